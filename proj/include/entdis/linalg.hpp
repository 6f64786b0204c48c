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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "entdis/gpauli.hpp"

namespace entdis {

using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Relative singular-value cutoff for every rank decision in the library.
inline constexpr double kRankCutoff = 1e-8;

inline double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Orthonormal basis of the real Hermitian d x d matrices, ordered as
/// E_kk, then for k < l: (E_kl + E_lk)/sqrt2, i(E_kl - E_lk)/sqrt2.
/// Coordinates in this basis are Frobenius-isometric.
class HermitianBasis {
 public:
  explicit HermitianBasis(int d) : d_(d) {
    for (int k = 0; k < d; ++k) elems_.push_back({k, k, 0});
    for (int k = 0; k < d; ++k)
      for (int l = k + 1; l < d; ++l) {
        elems_.push_back({k, l, 1});
        elems_.push_back({k, l, 2});
      }
  }

  int dim() const { return d_ * d_; }
  int d() const { return d_; }

  CMatrix element(int b) const {
    CMatrix m = CMatrix::Zero(d_, d_);
    const auto& e = elems_[b];
    const double s = 1.0 / std::sqrt(2.0);
    switch (e.kind) {
      case 0:
        m(e.k, e.k) = 1.0;
        break;
      case 1:
        m(e.k, e.l) = s;
        m(e.l, e.k) = s;
        break;
      default:
        m(e.k, e.l) = Complex(0, s);
        m(e.l, e.k) = Complex(0, -s);
    }
    return m;
  }

  CMatrix to_matrix(const RVector& coords) const {
    CMatrix m = CMatrix::Zero(d_, d_);
    const double s = 1.0 / std::sqrt(2.0);
    for (int b = 0; b < dim(); ++b) {
      const auto& e = elems_[b];
      const double c = coords(b);
      if (e.kind == 0) {
        m(e.k, e.k) += c;
      } else if (e.kind == 1) {
        m(e.k, e.l) += c * s;
        m(e.l, e.k) += c * s;
      } else {
        m(e.k, e.l) += Complex(0, c * s);
        m(e.l, e.k) += Complex(0, -c * s);
      }
    }
    return m;
  }

  /// Frobenius coordinates of a Hermitian matrix.
  RVector coordinates(const CMatrix& h) const {
    RVector c(dim());
    const double r2 = std::sqrt(2.0);
    for (int b = 0; b < dim(); ++b) {
      const auto& e = elems_[b];
      if (e.kind == 0)
        c(b) = h(e.k, e.k).real();
      else if (e.kind == 1)
        c(b) = r2 * 0.5 * (h(e.k, e.l) + h(e.l, e.k)).real();
      else
        c(b) = r2 * 0.5 * (h(e.k, e.l) - h(e.l, e.k)).imag();
    }
    return c;
  }

  /// Real and imaginary parts of M -> Tr(W M) as two coordinate row vectors.
  std::pair<RVector, RVector> trace_functional(const CMatrix& w) const {
    RVector re(dim()), im(dim());
    const double s = 1.0 / std::sqrt(2.0);
    for (int b = 0; b < dim(); ++b) {
      const auto& e = elems_[b];
      Complex t;
      if (e.kind == 0)
        t = w(e.k, e.k);
      else if (e.kind == 1)
        t = s * (w(e.l, e.k) + w(e.k, e.l));
      else
        t = Complex(0, s) * (w(e.l, e.k) - w(e.k, e.l));
      re(b) = t.real();
      im(b) = t.imag();
    }
    return {re, im};
  }

 private:
  struct Elem {
    int k, l, kind;
  };
  int d_;
  std::vector<Elem> elems_;
};

/// Row space and kernel of a real matrix from one SVD.
struct SubspaceSplit {
  RMatrix row_basis;     // columns: orthonormal basis of the row space
  RMatrix kernel_basis;  // columns: orthonormal basis of the kernel
  int rank = 0;
};

inline SubspaceSplit split_row_space(const RMatrix& a, int cols) {
  SubspaceSplit out;
  if (a.rows() == 0) {
    out.kernel_basis = RMatrix::Identity(cols, cols);
    out.row_basis = RMatrix(cols, 0);
    return out;
  }
  Eigen::BDCSVD<RMatrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (top > 0 && sv(i) > kRankCutoff * top) ++rank;
  out.rank = rank;
  out.row_basis = svd.matrixV().leftCols(rank);
  out.kernel_basis = svd.matrixV().rightCols(cols - rank);
  return out;
}

/// Distance from f to the column span of the orthonormal `basis`.
inline double residual_from_span(const RMatrix& basis, const RVector& f) {
  if (basis.cols() == 0) return f.norm();
  return (f - basis * (basis.transpose() * f)).norm();
}

/// Lawson-Hanson nonnegative least squares: argmin ||A x - b|| s.t. x >= 0.
inline RVector nnls(const RMatrix& a, const RVector& b, int max_iter = 0) {
  const Eigen::Index n = a.cols();
  if (max_iter <= 0) max_iter = static_cast<int>(3 * n + 10);
  RVector x = RVector::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 10 * std::numeric_limits<double>::epsilon() * a.norm() * std::max<Eigen::Index>(a.rows(), n);

  auto solve_passive = [&](RVector& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < n; ++i)
      if (passive[i]) idx.push_back(i);
    z = RVector::Zero(n);
    if (idx.empty()) return;
    RMatrix ap(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) ap.col(c) = a.col(idx[c]);
    RVector zp = ap.colPivHouseholderQr().solve(b);
    for (std::size_t c = 0; c < idx.size(); ++c) z(idx[c]) = zp(c);
  };

  for (int outer = 0; outer < max_iter; ++outer) {
    RVector w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!passive[i] && w(i) > best_w) {
        best_w = w(i);
        best = i;
      }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < max_iter; ++inner) {
      RVector z;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[i] && z(i) <= 0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[i] && z(i) <= 0) alpha = std::min(alpha, x(i) / (x(i) - z(i)));
      x += alpha * (z - x);
      for (Eigen::Index i = 0; i < n; ++i)
        if (passive[i] && std::abs(x(i)) <= tol) {
          passive[i] = false;
          x(i) = 0;
        }
    }
  }
  return x;
}

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace entdis
