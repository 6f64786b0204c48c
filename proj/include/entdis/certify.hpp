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

// Exact one-way indistinguishability provers and an independent re-verifier.
//
// Fourier cover (generalized Bell sets): a witness alpha must satisfy
//   sum_j w^{mj} alpha_j conj(alpha_{j+n}) = 0
// for every pairwise index difference (m, n). If the shift-0 differences hit
// every nonzero frequency, the moduli |alpha_j|^2 are all 1/d. If some shift
// n != 0 is hit at every frequency, its autocorrelation vanishes entirely,
// which is impossible with nonvanishing moduli.
//
// Forced block (arbitrary unitary sets): the Hermitian matrices M with
// Tr(U_i M U_j^dag) = 0 (i != j) form a real subspace S. If every traceless
// functional of a principal k x k block (k >= 2) lies in the span of the
// constraint functionals, the block is scalar on all of S. A rank-one
// element |phi><phi| then has a zero block, and no rank-one POVM built from
// S can sum to the identity.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "entdis/linalg.hpp"
#include "entdis/set_io.hpp"
#include "entdis/states.hpp"

namespace entdis {

enum class Direction { AToB, BToA };

inline const char* to_string(Direction dir) { return dir == Direction::AToB ? "A_to_B" : "B_to_A"; }

inline Direction direction_from_string(const std::string& s) {
  if (s == "A_to_B") return Direction::AToB;
  if (s == "B_to_A") return Direction::BToA;
  throw InputError("unknown direction '" + s + "'");
}

/// The set as seen by a one-way protocol in the given direction.
inline UnitarySet oriented(const UnitarySet& s, Direction dir) {
  return dir == Direction::AToB ? s : transpose_set(s);
}

struct CorrelationConstraintSystem {
  Dimension d{2};
  std::set<std::pair<int, int>> constraints;  // (shift n, frequency m), never (0, 0)

  std::set<int> frequencies_at(int shift) const {
    std::set<int> out;
    for (auto it = constraints.lower_bound({shift, 0}); it != constraints.end() && it->first == shift; ++it)
      out.insert(it->second);
    return out;
  }
};

inline CorrelationConstraintSystem constraints_from_set(const std::vector<PauliIndex>& indices, const Dimension& d) {
  std::set<PauliIndex> seen;
  for (const auto& p : indices) {
    check_index(d, p);
    if (!seen.insert(p).second) throw InputError("duplicate Pauli index in constraint system");
  }
  CorrelationConstraintSystem c{d, {}};
  for (std::size_t i = 0; i < indices.size(); ++i)
    for (std::size_t j = 0; j < indices.size(); ++j) {
      if (i == j) continue;
      // Phases do not affect vanishing.
      const auto diff = adjoint_product(d, indices[i], indices[j]).index;
      c.constraints.insert({diff.n, diff.m});
    }
  return c;
}

struct CoverCertificate {
  int d = 0;
  Direction direction = Direction::AToB;
  std::vector<PauliIndex> indices;
  std::vector<int> shift0_frequencies;
  int witness_shift = 0;
  std::vector<int> shiftN_frequencies;
};

inline std::optional<CoverCertificate> fourier_cover_prover(const CorrelationConstraintSystem& c) {
  const int d = c.d.value();
  const auto f0 = c.frequencies_at(0);
  for (int m = 1; m < d; ++m)
    if (!f0.count(m)) return std::nullopt;
  for (int n = 1; n < d; ++n) {
    const auto fn = c.frequencies_at(n);
    if (static_cast<int>(fn.size()) == d) {
      CoverCertificate cert;
      cert.d = d;
      cert.shift0_frequencies.assign(f0.begin(), f0.end());
      cert.witness_shift = n;
      cert.shiftN_frequencies.assign(fn.begin(), fn.end());
      return cert;
    }
  }
  return std::nullopt;
}

/// Runs the cover prover on a tagged set, oriented for `dir`.
inline std::optional<CoverCertificate> prove_cover(const UnitarySet& s, Direction dir) {
  const UnitarySet o = oriented(s, dir);
  if (!o.tag) return std::nullopt;
  auto cert = fourier_cover_prover(constraints_from_set(*o.tag, o.d));
  if (cert) {
    cert->direction = dir;
    cert->indices = *s.tag;
  }
  return cert;
}

struct FeasibleSubspace {
  Dimension d{2};
  RMatrix functionals;   // rows: Re/Im of M -> Tr(U_i M U_j^dag), i < j, in HermitianBasis coordinates
  RMatrix row_basis;     // orthonormal span of the functionals
  RMatrix kernel;        // columns: orthonormal coordinates of a basis of S
  int constraint_rank = 0;

  int dim() const { return static_cast<int>(kernel.cols()); }

  std::vector<CMatrix> basis() const {
    HermitianBasis hb(d.value());
    std::vector<CMatrix> out;
    for (Eigen::Index c = 0; c < kernel.cols(); ++c) out.push_back(hb.to_matrix(kernel.col(c)));
    return out;
  }

  /// Distance of a Hermitian matrix (Frobenius-normalized) from S.
  double membership_residual(const CMatrix& h) const {
    HermitianBasis hb(d.value());
    RVector x = hb.coordinates(h);
    const double nx = x.norm();
    if (nx == 0) return 0;
    x /= nx;
    return (row_basis.transpose() * x).norm();
  }
};

inline FeasibleSubspace hermitian_feasible_subspace(const UnitarySet& s) {
  if (s.size() < 2) throw InputError("feasible subspace needs at least two states");
  const int d = s.d.value();
  HermitianBasis hb(d);
  const auto pairs = static_cast<Eigen::Index>(s.size() * (s.size() - 1) / 2);
  RMatrix a(2 * pairs, hb.dim());
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      // Tr(U_i M U_j^dag) = Tr(U_j^dag U_i M)
      auto [re, im] = hb.trace_functional(s.members[j].adjoint() * s.members[i]);
      a.row(row++) = re.transpose();
      a.row(row++) = im.transpose();
    }
  auto split = split_row_space(a, hb.dim());
  return FeasibleSubspace{s.d, std::move(a), std::move(split.row_basis), std::move(split.kernel_basis), split.rank};
}

inline constexpr double kBlockTolerance = 1e-8;
inline constexpr const char* kRankOneAssumption =
    "perfect one-way discrimination admits a POVM of rank-one elements each satisfying the pairwise trace constraints";

struct BlockCertificate {
  int d = 0;
  Direction direction = Direction::AToB;
  std::vector<int> block_rows;
  std::vector<double> forced_residuals;
  double tolerance = kBlockTolerance;
  std::string unitaries_hash;
};

/// Unit-norm coordinate functionals spanning the traceless directions of the
/// principal block: Re/Im of each off-diagonal entry, then diagonal differences.
inline std::vector<RVector> traceless_block_functionals(int d, const std::vector<int>& rows) {
  HermitianBasis hb(d);
  std::vector<RVector> out;
  auto unit = [&](const CMatrix& w, bool imag) {
    auto [re, im] = hb.trace_functional(w);
    RVector f = imag ? im : re;
    out.push_back(f / f.norm());
  };
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      CMatrix w = CMatrix::Zero(d, d);
      w(rows[b], rows[a]) = 1.0;  // Tr(w M) = M(rows[a], rows[b])
      unit(w, false);
      unit(w, true);
    }
  for (std::size_t a = 1; a < rows.size(); ++a) {
    CMatrix w = CMatrix::Zero(d, d);
    w(rows[a], rows[a]) = 1.0;
    w(rows[0], rows[0]) = -1.0;
    unit(w, false);
  }
  return out;
}

inline void check_block_rows(int d, const std::vector<int>& rows) {
  if (rows.size() < 2) throw InputError("block needs at least two rows");
  std::set<int> seen;
  for (int r : rows) {
    if (r < 0 || r >= d) throw InputError("block row " + std::to_string(r) + " out of range");
    if (!seen.insert(r).second) throw InputError("block rows must be distinct");
  }
}

inline std::vector<double> block_residuals(const FeasibleSubspace& s, const std::vector<int>& rows) {
  std::vector<double> out;
  for (const auto& f : traceless_block_functionals(s.d.value(), rows)) out.push_back(residual_from_span(s.row_basis, f));
  return out;
}

inline std::optional<BlockCertificate> block_identity_prover(const FeasibleSubspace& s, const std::vector<int>& rows,
                                                             double tol = kBlockTolerance) {
  check_block_rows(s.d.value(), rows);
  auto res = block_residuals(s, rows);
  for (double r : res)
    if (!(r < tol)) return std::nullopt;
  BlockCertificate cert;
  cert.d = s.d.value();
  cert.block_rows = rows;
  cert.forced_residuals = std::move(res);
  cert.tolerance = tol;
  return cert;
}

/// Lexicographically first forced block, sizes 2..max_block.
inline std::optional<BlockCertificate> scan_blocks(const FeasibleSubspace& s, int max_block = 2,
                                                   double tol = kBlockTolerance) {
  const int d = s.d.value();
  for (int k = 2; k <= std::min(max_block, d); ++k) {
    std::vector<int> rows(k);
    for (int i = 0; i < k; ++i) rows[i] = i;
    while (true) {
      if (auto cert = block_identity_prover(s, rows, tol)) return cert;
      int i = k - 1;
      while (i >= 0 && rows[i] == d - k + i) --i;
      if (i < 0) break;
      ++rows[i];
      for (int j = i + 1; j < k; ++j) rows[j] = rows[j - 1] + 1;
    }
  }
  return std::nullopt;
}

inline std::optional<BlockCertificate> prove_block(const UnitarySet& s, Direction dir, int max_block = 2) {
  if (s.size() < 2) return std::nullopt;
  const UnitarySet o = oriented(s, dir);
  auto cert = scan_blocks(hermitian_feasible_subspace(o), max_block);
  if (cert) {
    cert->direction = dir;
    cert->unitaries_hash = members_hash(s);
  }
  return cert;
}

using Certificate = std::variant<CoverCertificate, BlockCertificate>;

struct VerifyResult {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

/// Recomputes everything from `original`; trusts nothing in the certificate
/// beyond the claimed structure.
inline VerifyResult verify_certificate(const CoverCertificate& cert, const UnitarySet& original) {
  const int d = original.d.value();
  if (cert.d != d) return {false, "dimension mismatch"};
  if (!original.tag) return {false, "set is not a generalized Bell set"};
  if (std::set<PauliIndex>(cert.indices.begin(), cert.indices.end()) !=
      std::set<PauliIndex>(original.tag->begin(), original.tag->end()))
    return {false, "index set mismatch"};
  // Members must realize their tags up to a global phase.
  for (std::size_t i = 0; i < original.size(); ++i) {
    const CMatrix ref = to_matrix(original.d, (*original.tag)[i]);
    const Complex ph = (ref.adjoint() * original.members[i]).trace() / double(d);
    if (!(max_abs(original.members[i] - ph * ref) < 1e-10) || !(std::abs(std::abs(ph) - 1) < 1e-10))
      return {false, "member does not match its Pauli tag"};
  }
  const UnitarySet o = oriented(original, cert.direction);
  CorrelationConstraintSystem c;
  try {
    c = constraints_from_set(*o.tag, o.d);
  } catch (const InputError& e) {
    return {false, e.what()};
  }
  const auto f0 = c.frequencies_at(0);
  for (int m = 1; m < d; ++m)
    if (!f0.count(m)) return {false, "shift-0 frequencies miss " + std::to_string(m)};
  if (std::set<int>(cert.shift0_frequencies.begin(), cert.shift0_frequencies.end()) != f0)
    return {false, "recorded shift-0 frequencies differ from recomputation"};
  if (cert.witness_shift <= 0 || cert.witness_shift >= d) return {false, "witness shift must be nonzero mod d"};
  const auto fn = c.frequencies_at(cert.witness_shift);
  if (static_cast<int>(fn.size()) != d) return {false, "witness shift is not fully covered"};
  if (std::set<int>(cert.shiftN_frequencies.begin(), cert.shiftN_frequencies.end()) != fn)
    return {false, "recorded witness-shift frequencies differ from recomputation"};
  return {true, "ok"};
}

inline VerifyResult verify_certificate(const BlockCertificate& cert, const UnitarySet& original) {
  const int d = original.d.value();
  if (cert.d != d) return {false, "dimension mismatch"};
  if (original.size() < 2) return {false, "set has fewer than two states"};
  if (cert.unitaries_hash != members_hash(original)) return {false, "unitaries hash mismatch"};
  if (!(cert.tolerance > 0) || !(cert.tolerance <= 1e-6)) return {false, "tolerance outside (0, 1e-6]"};
  try {
    check_block_rows(d, cert.block_rows);
  } catch (const InputError& e) {
    return {false, e.what()};
  }
  const auto s = hermitian_feasible_subspace(oriented(original, cert.direction));
  const auto res = block_residuals(s, cert.block_rows);
  if (res.size() != cert.forced_residuals.size()) return {false, "forced functional count mismatch"};
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!(res[i] < cert.tolerance)) return {false, "functional " + std::to_string(i) + " not forced"};
    if (!(std::abs(res[i] - cert.forced_residuals[i]) <= 1e-12))
      return {false, "recorded residual " + std::to_string(i) + " differs from recomputation"};
  }
  return {true, "ok"};
}

inline VerifyResult verify_certificate(const Certificate& cert, const UnitarySet& original) {
  return std::visit([&](const auto& c) { return verify_certificate(c, original); }, cert);
}

// Certificate JSON.

inline json certificate_to_json(const CoverCertificate& c) {
  return json{{"kind", "fourier_cover"},
              {"d", c.d},
              {"direction", to_string(c.direction)},
              {"indices", c.indices},
              {"shift0_frequencies", c.shift0_frequencies},
              {"witness_shift", c.witness_shift},
              {"shiftN_frequencies", c.shiftN_frequencies},
              {"uniform_modulus", "1/" + std::to_string(c.d)},
              {"tool_version", kToolVersion}};
}

inline json certificate_to_json(const BlockCertificate& c) {
  return json{{"kind", "forced_block"},
              {"d", c.d},
              {"direction", to_string(c.direction)},
              {"block_rows", c.block_rows},
              {"forced_residuals", c.forced_residuals},
              {"tolerance", c.tolerance},
              {"unitaries_hash", c.unitaries_hash},
              {"assumption", kRankOneAssumption},
              {"tool_version", kToolVersion}};
}

inline json certificate_to_json(const Certificate& c) {
  return std::visit([](const auto& x) { return certificate_to_json(x); }, c);
}

inline Certificate certificate_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const Direction dir = direction_from_string(j.value("direction", std::string("A_to_B")));
    if (kind == "fourier_cover") {
      CoverCertificate c;
      c.d = j.at("d").get<int>();
      c.direction = dir;
      c.indices = j.at("indices").get<std::vector<PauliIndex>>();
      c.shift0_frequencies = j.at("shift0_frequencies").get<std::vector<int>>();
      c.witness_shift = j.at("witness_shift").get<int>();
      c.shiftN_frequencies = j.at("shiftN_frequencies").get<std::vector<int>>();
      return c;
    }
    if (kind == "forced_block") {
      BlockCertificate c;
      c.d = j.at("d").get<int>();
      c.direction = dir;
      c.block_rows = j.at("block_rows").get<std::vector<int>>();
      c.forced_residuals = j.at("forced_residuals").get<std::vector<double>>();
      c.tolerance = j.at("tolerance").get<double>();
      c.unitaries_hash = j.at("unitaries_hash").get<std::string>();
      return c;
    }
    throw InputError("unknown certificate kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace entdis
