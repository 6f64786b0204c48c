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

// Generalized Pauli (Weyl-Heisenberg) algebra on C^d.
//
// Convention: U_{mn}|j> = w^{mj} |j + n mod d>, w = exp(2 pi i / d). The first
// index is the clock frequency, the second the cyclic shift. Phases are kept
// as exact integer exponents of w; floating point appears only in to_matrix.

#include <complex>
#include <compare>
#include <cstdint>
#include <numbers>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "entdis/error.hpp"

namespace entdis {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

class Dimension {
 public:
  explicit Dimension(int d) : d_(d) {
    if (d < 2) throw InputError("dimension must be >= 2, got " + std::to_string(d));
  }

  int value() const { return d_; }

  int mod(std::int64_t x) const {
    const std::int64_t r = x % d_;
    return static_cast<int>(r < 0 ? r + d_ : r);
  }

  /// w^k as a double-precision complex number.
  Complex root(std::int64_t k) const {
    const double angle = 2.0 * std::numbers::pi * mod(k) / d_;
    return {std::cos(angle), std::sin(angle)};
  }

  friend bool operator==(const Dimension&, const Dimension&) = default;

 private:
  int d_;
};

struct PhaseExponent {
  int k = 0;
  friend auto operator<=>(const PhaseExponent&, const PhaseExponent&) = default;
};

struct PauliIndex {
  int m = 0;  // frequency
  int n = 0;  // shift
  friend auto operator<=>(const PauliIndex&, const PauliIndex&) = default;
};

struct PhasedPauli {
  PhaseExponent phase;
  PauliIndex index;
  friend auto operator<=>(const PhasedPauli&, const PhasedPauli&) = default;
};

inline void check_index(const Dimension& d, const PauliIndex& p) {
  if (p.m < 0 || p.m >= d.value() || p.n < 0 || p.n >= d.value()) {
    throw InputError("Pauli index (" + std::to_string(p.m) + "," + std::to_string(p.n) +
                     ") out of range for d=" + std::to_string(d.value()));
  }
}

/// U_p|j> = w^{phase}|index>.
inline std::pair<PhaseExponent, int> apply(const Dimension& d, const PauliIndex& p, int j) {
  check_index(d, p);
  if (j < 0 || j >= d.value()) {
    throw InputError("basis index " + std::to_string(j) + " out of range for d=" +
                     std::to_string(d.value()));
  }
  return {PhaseExponent{d.mod(std::int64_t{p.m} * j)}, d.mod(j + p.n)};
}

/// U_a U_b = w^{m_a n_b} U_{a+b}.
inline PhasedPauli product(const Dimension& d, const PhasedPauli& a, const PhasedPauli& b) {
  const std::int64_t k = std::int64_t{a.phase.k} + b.phase.k + std::int64_t{a.index.m} * b.index.n;
  return {PhaseExponent{d.mod(k)},
          PauliIndex{d.mod(a.index.m + b.index.m), d.mod(a.index.n + b.index.n)}};
}

/// (w^k U_{mn})^dagger = w^{mn - k} U_{-m,-n}.
inline PhasedPauli adjoint(const Dimension& d, const PhasedPauli& a) {
  return {PhaseExponent{d.mod(std::int64_t{a.index.m} * a.index.n - a.phase.k)},
          PauliIndex{d.mod(-a.index.m), d.mod(-a.index.n)}};
}

/// U_a^dagger U_b = w^{m_a (n_a - n_b)} U_{m_b - m_a, n_b - n_a}.
inline PhasedPauli adjoint_product(const Dimension& d, const PauliIndex& a, const PauliIndex& b) {
  check_index(d, a);
  check_index(d, b);
  return {PhaseExponent{d.mod(std::int64_t{a.m} * (a.n - b.n))},
          PauliIndex{d.mod(b.m - a.m), d.mod(b.n - a.n)}};
}

/// U_{mn}^T = w^{-mn} U_{m,-n}.
inline PhasedPauli transpose_index(const Dimension& d, const PauliIndex& p) {
  check_index(d, p);
  return {PhaseExponent{d.mod(-std::int64_t{p.m} * p.n)}, PauliIndex{p.m, d.mod(-p.n)}};
}

inline CMatrix to_matrix(const Dimension& d, const PhasedPauli& p) {
  check_index(d, p.index);
  const int dim = d.value();
  CMatrix u = CMatrix::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    const auto [phase, row] = apply(d, p.index, j);
    u(row, j) = d.root(std::int64_t{phase.k} + p.phase.k);
  }
  return u;
}

inline CMatrix to_matrix(const Dimension& d, const PauliIndex& p) {
  return to_matrix(d, PhasedPauli{PhaseExponent{0}, p});
}

// JSON: PauliIndex as [m, n]; PhasedPauli as {"phase": k, "index": [m, n]}.
inline void to_json(nlohmann::json& j, const PauliIndex& p) { j = nlohmann::json::array({p.m, p.n}); }

inline void from_json(const nlohmann::json& j, PauliIndex& p) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw InputError("Pauli index must be a two-element integer array");
  }
  p.m = j[0].get<int>();
  p.n = j[1].get<int>();
}

inline void to_json(nlohmann::json& j, const PhasedPauli& p) {
  j = nlohmann::json{{"phase", p.phase.k}, {"index", p.index}};
}

inline void from_json(const nlohmann::json& j, PhasedPauli& p) {
  if (!j.is_object() || !j.contains("phase") || !j.contains("index")) {
    throw InputError("phased Pauli must be an object with 'phase' and 'index'");
  }
  p.phase.k = j.at("phase").get<int>();
  p.index = j.at("index").get<PauliIndex>();
}

}  // namespace entdis
