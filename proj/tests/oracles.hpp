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

// Test-only reference constructions, built from the defining actions of the
// shift and clock operators with plain dense arithmetic. Nothing here calls
// the library's algebra routines.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

namespace entdis::oracle {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline std::complex<double> omega_pow(int d, long long k) {
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(((k % d) + d) % d) / d);
}

/// X|j> = |j+1 mod d>
inline Mat shift(int d) {
  Mat x = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) x((j + 1) % d, j) = 1.0;
  return x;
}

/// Z|j> = w^j |j>
inline Mat clock(int d) {
  Mat z = Mat::Zero(d, d);
  for (int j = 0; j < d; ++j) z(j, j) = omega_pow(d, j);
  return z;
}

inline Mat power(const Mat& a, int k) {
  Mat r = Mat::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) r = r * a;
  return r;
}

/// U_{mn} = X^n Z^m, i.e. U_{mn}|j> = w^{mj}|j+n>.
inline Mat pauli(int d, int m, int n) { return power(shift(d), n) * power(clock(d), m); }

/// Recovers (phase k, m, n) from a dense phased Pauli: column 0 holds w^k at row n,
/// column 1 holds w^{k+m} at row n+1.
struct Decoded {
  int phase, m, n;
};

inline Decoded decode(const Mat& u) {
  const int d = static_cast<int>(u.rows());
  auto to_k = [d](std::complex<double> z) {
    const double turns = std::arg(z) / (2 * std::numbers::pi) * d;
    return ((static_cast<int>(std::lround(turns)) % d) + d) % d;
  };
  int n = 0;
  for (int r = 0; r < d; ++r)
    if (std::abs(u(r, 0)) > 0.5) n = r;
  const int k = to_k(u(n, 0));
  const int k1 = to_k(u((n + 1) % d, 1));
  return {k, ((k1 - k) % d + d) % d, n};
}

inline Mat random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  return (a + a.adjoint()) / 2.0;
}

inline Vec random_unit(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = {g(rng), g(rng)};
  return v / v.norm();
}

}  // namespace entdis::oracle
