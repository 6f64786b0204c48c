// Copyright 2026 The entdis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Sets of maximally entangled states (I (x) U_i)|psi_0>, represented by their
// defining unitaries U_i.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "entdis/gpauli.hpp"
#include "entdis/linalg.hpp"

namespace entdis {

inline constexpr double kSetTolerance = 1e-10;

struct UnitarySet {
  Dimension d{2};
  std::vector<CMatrix> members;
  /// Present iff every member is a (phased) generalized Pauli with this index.
  std::optional<std::vector<PauliIndex>> tag;

  std::size_t size() const { return members.size(); }
  bool is_pauli() const { return tag.has_value(); }
};

/// Largest of |U_i^dag U_i - I| and |Tr(U_i^dag U_j)| over the set.
struct SetDefects {
  double unitarity = 0;
  double orthogonality = 0;
};

inline SetDefects set_defects(const UnitarySet& s) {
  SetDefects out;
  const int d = s.d.value();
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.unitarity = std::max(out.unitarity,
                             max_abs(s.members[i].adjoint() * s.members[i] - CMatrix::Identity(d, d)));
    for (std::size_t j = i + 1; j < s.size(); ++j)
      out.orthogonality =
          std::max(out.orthogonality, std::abs((s.members[i].adjoint() * s.members[j]).trace()));
  }
  return out;
}

/// Throws InputError unless members are d x d unitaries with pairwise
/// orthogonal states.
inline void validate_set(const UnitarySet& s, double tol = kSetTolerance) {
  const int d = s.d.value();
  if (s.members.empty()) throw InputError("state set is empty");
  for (const auto& u : s.members)
    if (u.rows() != d || u.cols() != d) throw InputError("member is not " + std::to_string(d) + "x" + std::to_string(d));
  if (s.tag && s.tag->size() != s.members.size()) throw InputError("Pauli tag length does not match member count");
  const auto defects = set_defects(s);
  if (!(defects.unitarity < tol)) throw InputError("member is not unitary");
  if (!(defects.orthogonality < tol)) throw InputError("states are not mutually orthogonal");
}

inline UnitarySet bell_set(const Dimension& d, const std::vector<PauliIndex>& indices) {
  std::set<PauliIndex> seen;
  UnitarySet s{d, {}, indices};
  for (const auto& p : indices) {
    check_index(d, p);
    if (!seen.insert(p).second)
      throw InputError("duplicate Pauli index (" + std::to_string(p.m) + "," + std::to_string(p.n) + ")");
    s.members.push_back(to_matrix(d, p));
  }
  return s;
}

/// Index list of the 3*ceil(sqrt d) - 1 family. Frequencies are taken mod d
/// (w^d = 1) and duplicates are removed in order of first appearance, so the
/// set is smaller when d = s(s-1) (3s - 3 states) or when (s-1)s - 1 >= d
/// (the wrapped index repeats a low frequency, 3s - 2 states).
inline std::vector<PauliIndex> theorem1_indices(int d) {
  if (d < 4) throw InputError("the sqrt family needs d >= 4, got " + std::to_string(d));
  int s = 1;
  while (s * s < d) ++s;
  std::vector<PauliIndex> out;
  std::set<PauliIndex> seen;
  auto push = [&](int m, int n) {
    const PauliIndex p{m % d, n};
    if (seen.insert(p).second) out.push_back(p);
  };
  for (int m = 0; m < s; ++m) push(m, 0);
  for (int k = 2; k <= s - 1; ++k) push(k * s - 1, 0);
  push(d - 1, 0);
  for (int k = 1; k <= s - 1; ++k) push(k * s - 1, 1);
  push(d - 1, 1);
  return out;
}

inline UnitarySet theorem1_set(int d) { return bell_set(Dimension(d), theorem1_indices(d)); }

/// Block-unitary quadruple on C^2 (+) C^r with r = d - 2 odd and >= 5.
struct Theorem2Spec {
  int d = 7;
  Complex omega{1.0, 0.0};
  Complex gamma = std::polar(1.0, std::numbers::pi / 4);
  Complex sigma{1.0, 0.0};

  int r() const { return d - 2; }

  void validate() const {
    if (d < 7 || d % 2 == 0)
      throw InputError("four-state block family needs odd d >= 7, got " + std::to_string(d));
    for (auto [name, z] : {std::pair{"omega", omega}, std::pair{"gamma", gamma}, std::pair{"sigma", sigma}})
      if (!(std::abs(std::abs(z) - 1.0) < 1e-12)) throw InputError(std::string(name) + " must have unit modulus");
    // conj(gamma) must avoid +-i conj(omega)^2.
    const Complex forbidden = Complex(0, 1) * std::conj(omega) * std::conj(omega);
    const Complex g = std::conj(gamma);
    if (!(std::abs(g - forbidden) > 1e-9) || !(std::abs(g + forbidden) > 1e-9))
      throw InputError("phase condition violated: conj(gamma) = +-i conj(omega)^2");
  }
};

inline CMatrix cyclic_permutation(int r, int power) {
  CMatrix p = CMatrix::Zero(r, r);
  for (int i = 0; i < r; ++i) p(((i + power) % r + r) % r, i) = 1.0;
  return p;
}

inline UnitarySet theorem2_set(const Theorem2Spec& spec) {
  spec.validate();
  const int d = spec.d, r = spec.r();
  const Complex i(0, 1);
  CMatrix x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  auto block = [&](const CMatrix& top, int power) {
    CMatrix u = CMatrix::Zero(d, d);
    u.topLeftCorner(2, 2) = top;
    u.bottomRightCorner(r, r) = cyclic_permutation(r, power);
    return u;
  };
  UnitarySet s{Dimension(d), {}, std::nullopt};
  s.members.push_back(CMatrix::Identity(d, d));
  s.members.push_back(block(spec.omega * x, 1));
  s.members.push_back(block(spec.gamma * z, 2));
  s.members.push_back(block(spec.sigma * y, (r + 1) / 2));
  return s;
}

/// Members replaced by their transposes; deciding A->B on the result decides
/// B->A on the input.
inline UnitarySet transpose_set(const UnitarySet& s) {
  UnitarySet t{s.d, {}, std::nullopt};
  for (const auto& u : s.members) t.members.push_back(u.transpose());
  if (s.tag) {
    t.tag.emplace();
    for (const auto& p : *s.tag) t.tag->push_back(transpose_index(s.d, p).index);
  }
  return t;
}

/// (I (x) U)|psi_0> with |psi_0> = d^{-1/2} sum_j |jj>; amplitude of |a b> at a*d + b.
inline CVector entangled_state(const Dimension& d, const CMatrix& u) {
  const int n = d.value();
  CVector v(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) v(a * n + b) = u(b, a) / std::sqrt(double(n));
  return v;
}

inline bool check_maximally_entangled(const Dimension& d, const CVector& state) {
  const int n = d.value();
  if (state.size() != n * n) throw InputError("state vector length must be d^2");
  if (!(std::abs(state.norm() - 1.0) < 1e-10)) throw InputError("state vector is not normalized");
  CMatrix coeffs(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) coeffs(a, b) = state(a * n + b);
  const RVector sv = Eigen::JacobiSVD<CMatrix>(coeffs).singularValues();
  const double target = 1.0 / std::sqrt(double(n));
  return (sv.array() - target).abs().maxCoeff() < 1e-8;
}

}  // namespace entdis
