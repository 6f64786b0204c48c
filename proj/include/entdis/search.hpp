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

// Numerical side of the decision procedure: witness search on the unit
// sphere, POVM completion, protocol simulation, and the combined verdict.
//
// Conjugation convention: a witness alpha lives on the receiving party's
// space (U_i alpha pairwise orthogonal). The measuring party's POVM vectors
// are phi = conj(alpha), because <phi|_A (I (x) U)|psi_0> ~ U |conj(phi)>.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "entdis/certify.hpp"
#include "entdis/linalg.hpp"
#include "entdis/set_io.hpp"
#include "entdis/states.hpp"

namespace entdis {

struct OptimizerConfig {
  int restarts = 64;
  int max_iterations = 2000;
  double success_tol = 1e-12;
  double failure_floor = 1e-6;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
  int simulation_trials = 10000;
  int max_block = 2;

  void validate() const {
    if (restarts < 1) throw InputError("restarts must be >= 1");
    if (max_iterations < 0) throw InputError("max_iterations must be >= 0");
    if (!(success_tol < failure_floor)) throw InputError("success tolerance must be below the failure floor");
    if (simulation_trials < 1) throw InputError("simulation trials must be >= 1");
    if (max_block < 2) throw InputError("max block size must be >= 2");
  }
};

inline json config_to_json(const OptimizerConfig& c) {
  return json{{"restarts", c.restarts},
              {"max_iterations", c.max_iterations},
              {"success_tol", c.success_tol},
              {"failure_floor", c.failure_floor},
              {"seed", c.seed},
              {"simulation_trials", c.simulation_trials},
              {"max_block", c.max_block}};
}

struct Witness {
  int d = 0;
  CVector alpha;
  double residual = std::numeric_limits<double>::infinity();
  int restart = -1;
};

/// f(alpha) = sum_{i<j} |<alpha|U_i^dag U_j|alpha>|^2 on the unit sphere.
///
/// Pauli-tagged sets take a sparse path: U_i^dag U_j is a phased U_{mn}, the
/// phase drops out of |.|^2, and pairs sharing a difference are merged.
class Penalty {
 public:
  explicit Penalty(const UnitarySet& s) : d_(s.d.value()) {
    if (s.tag) {
      std::map<PauliIndex, int> counts;
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) ++counts[adjoint_product(s.d, (*s.tag)[i], (*s.tag)[j]).index];
      for (const auto& [idx, count] : counts) {
        CVector clock(d_);
        for (int k = 0; k < d_; ++k) clock(k) = s.d.root(std::int64_t{idx.m} * k);
        sparse_.push_back({idx.n, static_cast<double>(count), std::move(clock)});
      }
      return;
    }
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) dense_.push_back(s.members[i].adjoint() * s.members[j]);
  }

  int d() const { return d_; }

  double value(const CVector& alpha) const {
    return evaluate(alpha, nullptr);
  }

  /// Value and Riemannian gradient (Euclidean gradient over real and
  /// imaginary parts, projected onto the tangent space at alpha).
  double value_and_gradient(const CVector& alpha, CVector& grad) const {
    grad = CVector::Zero(d_);
    const double f = evaluate(alpha, &grad);
    grad -= alpha.dot(grad).real() * alpha;
    return f;
  }

 private:
  struct SparseTerm {
    int shift;
    double multiplicity;
    CVector clock;  // w^{mk}
  };

  // For c = <a|W|a>, d|c|^2 has Euclidean gradient 2 (conj(c) W a + c W^dag a).
  double evaluate(const CVector& alpha, CVector* grad) const {
    check(alpha);
    double f = 0;
    CVector wa(d_), wda(d_);
    for (const auto& t : sparse_) {
      for (int k = 0; k < d_; ++k) {
        const int up = (k + t.shift) % d_;
        wa(up) = t.clock(k) * alpha(k);                    // (U a)_{k+n} = w^{mk} a_k
        wda(k) = std::conj(t.clock(k)) * alpha(up);        // (U^dag a)_k = w^{-mk} a_{k+n}
      }
      const Complex c = alpha.dot(wa);
      f += t.multiplicity * std::norm(c);
      if (grad) *grad += 2.0 * t.multiplicity * (std::conj(c) * wa + c * wda);
    }
    for (const auto& w : dense_) {
      wa.noalias() = w * alpha;
      const Complex c = alpha.dot(wa);
      f += std::norm(c);
      if (grad) *grad += 2.0 * (std::conj(c) * wa + c * (w.adjoint() * alpha));
    }
    return f;
  }

  void check(const CVector& alpha) const {
    if (alpha.size() != d_) throw InputError("witness vector has wrong length");
    if (!(std::abs(alpha.norm() - 1.0) < 1e-8)) throw InputError("witness vector must have unit norm");
  }

  int d_;
  std::vector<SparseTerm> sparse_;
  std::vector<CMatrix> dense_;
};

inline double penalty(const CVector& alpha, const UnitarySet& s) { return Penalty(s).value(alpha); }

inline CVector random_unit_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  CVector v(d);
  for (int i = 0; i < d; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v / v.norm();
}

/// One projected-gradient descent with Armijo backtracking; Barzilai-Borwein
/// trial steps.
inline Witness descend(const Penalty& p, CVector alpha, const OptimizerConfig& cfg) {
  CVector g, g_new;
  double f = p.value_and_gradient(alpha, g);
  double step = 1.0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double gg = g.squaredNorm();
    if (f < cfg.success_tol || std::sqrt(gg) < 1e-12) break;
    bool accepted = false;
    CVector trial;
    double f_new = 0;
    for (int bt = 0; bt < 60; ++bt) {
      trial = alpha - step * g;
      trial /= trial.norm();
      f_new = p.value_and_gradient(trial, g_new);
      if (f_new <= f - 1e-4 * step * gg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const CVector s = trial - alpha;
    const CVector y = g_new - g;
    const double sy = s.dot(y).real();
    step = sy > 0 ? std::clamp(s.squaredNorm() / sy, 1e-8, 1e4) : 2 * step;
    alpha = trial;
    g = g_new;
    f = f_new;
  }
  return Witness{p.d(), alpha, f, -1};
}

inline int worker_count(int requested, int jobs) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  return std::clamp(n, 1, std::max(1, jobs));
}

struct SearchResult {
  Witness best;
  std::vector<Witness> harvested;  // every restart below success_tol, restart order
  int restarts_used = 0;
};

inline SearchResult witness_search(const UnitarySet& s, const OptimizerConfig& cfg) {
  cfg.validate();
  const Penalty p(s);
  std::vector<Witness> runs(cfg.restarts);
  std::atomic<int> next{0};
  auto work = [&] {
    for (int r = next++; r < cfg.restarts; r = next++) {
      std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(r));
      runs[r] = descend(p, random_unit_vector(s.d.value(), rng), cfg);
      runs[r].restart = r;
    }
  };
  const int workers = worker_count(cfg.threads, cfg.restarts);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  SearchResult out;
  out.restarts_used = cfg.restarts;
  for (const auto& w : runs) {
    if (w.residual < out.best.residual) out.best = w;  // ties keep the lower restart
    if (w.residual < cfg.success_tol) out.harvested.push_back(w);
  }
  return out;
}

struct PovmElement {
  double weight = 0;
  CVector phi;  // measuring-party vector, unit norm
};

struct Povm {
  std::vector<PovmElement> elements;

  std::size_t size() const { return elements.size(); }

  double identity_residual() const {
    if (elements.empty()) return std::numeric_limits<double>::infinity();
    const auto d = elements.front().phi.size();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& e : elements) sum += e.weight * e.phi * e.phi.adjoint();
    return max_abs(sum - CMatrix::Identity(d, d));
  }

  /// Largest |<conj(phi)|U_i^dag U_j|conj(phi)>| over elements and pairs.
  double orthogonality_residual(const UnitarySet& s) const {
    double worst = 0;
    for (const auto& e : elements) {
      const CVector v = e.phi.conjugate();
      for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j)
          worst = std::max(worst, std::abs(v.dot(s.members[i].adjoint() * (s.members[j] * v))));
    }
    return worst;
  }
};

inline constexpr double kPovmIdentityTolerance = 1e-8;
inline constexpr double kPovmOrthogonalityTolerance = 1e-6;

/// Merges vectors equal up to a phase, summing their weights.
inline void add_merged(std::vector<PovmElement>& out, const CVector& phi, double weight) {
  for (auto& e : out)
    if (std::abs(e.phi.dot(phi)) > 1 - 1e-12) {
      e.weight += weight;
      return;
    }
  out.push_back({weight, phi});
}

/// Orbit construction: {conj(U_ab alpha)} with weights 1/d resolves the
/// identity by the twirl identity.
inline Povm orbit_povm(const Dimension& d, const CVector& alpha) {
  Povm p;
  for (int a = 0; a < d.value(); ++a)
    for (int b = 0; b < d.value(); ++b) {
      const CVector v = to_matrix(d, PauliIndex{a, b}) * alpha;
      add_merged(p.elements, v.conjugate() / v.norm(), 1.0 / d.value());
    }
  return p;
}

/// Weights for the harvested witnesses by nonnegative least squares.
inline std::optional<Povm> nnls_povm(const Dimension& d, const std::vector<Witness>& witnesses) {
  std::vector<CVector> phis;
  for (const auto& w : witnesses) {
    const CVector phi = w.alpha.conjugate() / w.alpha.norm();
    bool dup = false;
    for (const auto& q : phis) dup = dup || std::abs(q.dot(phi)) > 1 - 1e-12;
    if (!dup) phis.push_back(phi);
  }
  if (phis.empty()) return std::nullopt;
  HermitianBasis hb(d.value());
  RMatrix a(hb.dim(), static_cast<Eigen::Index>(phis.size()));
  for (std::size_t k = 0; k < phis.size(); ++k) a.col(k) = hb.coordinates(phis[k] * phis[k].adjoint());
  const RVector x = nnls(a, hb.coordinates(CMatrix::Identity(d.value(), d.value())));
  Povm p;
  for (std::size_t k = 0; k < phis.size(); ++k)
    if (x(k) > 0) p.elements.push_back({x(k), phis[k]});
  if (!(p.identity_residual() < kPovmIdentityTolerance)) return std::nullopt;
  return p;
}

/// Completes a witness into a POVM; nullopt means incomplete.
inline std::optional<Povm> povm_completion(const UnitarySet& s, const Witness& w, const OptimizerConfig& cfg,
                                           const std::vector<Witness>& harvested = {}) {
  if (!(w.residual < cfg.success_tol)) throw InputError("POVM completion needs a witness below the success tolerance");
  if (s.tag) {
    Povm p = orbit_povm(s.d, w.alpha);
    if (p.identity_residual() < kPovmIdentityTolerance) return p;
    return std::nullopt;
  }
  std::vector<Witness> pool = harvested;
  if (pool.empty()) pool.push_back(w);
  return nnls_povm(s.d, pool);
}

/// Monte-Carlo run of the one-way protocol: the measuring party applies the
/// POVM, the other party measures in the basis obtained from {U_j conj(phi_k)}.
inline double simulate_protocol(const UnitarySet& s, const Povm& povm, int trials, std::uint64_t seed) {
  const int d = s.d.value();
  if (povm.elements.empty() || !(povm.identity_residual() < kPovmIdentityTolerance))
    throw InputError("POVM does not resolve the identity");
  for (const auto& e : povm.elements)
    if (e.phi.size() != d || !(e.weight > 0)) throw InputError("malformed POVM element");
  if (trials < 1) throw InputError("trials must be >= 1");
  const int n = static_cast<int>(s.size());

  // Per outcome k: orthonormal basis with labels (-1 for completion vectors),
  // and per state i the outcome distribution over that basis.
  struct Branch {
    std::vector<int> labels;
    std::vector<std::vector<double>> cumulative;  // [state][basis vector]
  };
  std::vector<Branch> branches;
  for (const auto& e : povm.elements) {
    const CVector bob = e.phi.conjugate() / e.phi.norm();
    std::vector<CVector> basis;
    Branch br;
    auto try_add = [&](CVector v, int label) {
      for (const auto& b : basis) v -= b.dot(v) * b;
      const double nv = v.norm();
      if (nv < 1e-6) return;
      basis.push_back(v / nv);
      br.labels.push_back(label);
    };
    for (int j = 0; j < n && static_cast<int>(basis.size()) < d; ++j) try_add(s.members[j] * bob, j);
    for (int j = 0; j < d && static_cast<int>(basis.size()) < d; ++j) try_add(CVector::Unit(d, j), -1);
    for (int i = 0; i < n; ++i) {
      const CVector state = s.members[i] * bob;
      std::vector<double> cum;
      double acc = 0;
      for (const auto& b : basis) cum.push_back(acc += std::norm(b.dot(state)));
      br.cumulative.push_back(std::move(cum));
    }
    branches.push_back(std::move(br));
  }
  std::vector<double> outcome_cum;
  double acc = 0;
  for (const auto& e : povm.elements) outcome_cum.push_back(acc += e.weight / d);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_state(0, n - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto sample = [&](const std::vector<double>& cum) {
    const double r = unit(rng) * cum.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), r);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()), cum.size() - 1);
  };
  long long hits = 0;
  for (int t = 0; t < trials; ++t) {
    const int i = pick_state(rng);
    const auto k = sample(outcome_cum);
    const auto& br = branches[k];
    const auto b = sample(br.cumulative[i]);
    if (br.labels[b] == i) ++hits;
  }
  return static_cast<double>(hits) / trials;
}

enum class VerdictKind { Distinguishable, Indistinguishable, Unknown };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Distinguishable:
      return "distinguishable";
    case VerdictKind::Indistinguishable:
      return "indistinguishable";
    default:
      return "unknown";
  }
}

struct Verdict {
  Direction direction = Direction::AToB;
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<Witness> witness;
  std::optional<Povm> povm;
  std::optional<Certificate> certificate;
  std::optional<double> best_residual;  // absent when a certificate made the search unnecessary
  std::optional<double> simulated_success;
  bool near_witness = false;
  int restarts_used = 0;
  OptimizerConfig config;
};

inline Verdict decide_direction(const UnitarySet& s, Direction dir, const OptimizerConfig& cfg) {
  cfg.validate();
  Verdict v;
  v.direction = dir;
  v.config = cfg;

  std::optional<Certificate> cert;
  if (s.tag)
    if (auto c = prove_cover(s, dir)) cert = *c;
  if (!cert && s.size() >= 2)
    if (auto c = prove_block(s, dir, cfg.max_block)) cert = *c;
  if (cert && verify_certificate(*cert, s)) {
    v.kind = VerdictKind::Indistinguishable;
    v.certificate = std::move(cert);
    return v;
  }

  const UnitarySet o = oriented(s, dir);
  const auto found = witness_search(o, cfg);
  v.best_residual = found.best.residual;
  v.restarts_used = found.restarts_used;
  v.witness = found.best;
  if (found.best.residual < cfg.success_tol) {
    auto povm = povm_completion(o, found.best, cfg, found.harvested);
    if (povm && povm->orthogonality_residual(o) < kPovmOrthogonalityTolerance) {
      v.kind = VerdictKind::Distinguishable;
      v.simulated_success = simulate_protocol(o, *povm, cfg.simulation_trials, cfg.seed);
      v.povm = std::move(povm);
      return v;
    }
    v.near_witness = true;
  } else if (!(found.best.residual > cfg.failure_floor)) {
    v.near_witness = true;
  }
  v.kind = VerdictKind::Unknown;
  return v;
}

struct Decision {
  Verdict a_to_b;
  Verdict b_to_a;

  bool one_way_indistinguishable() const {
    return a_to_b.kind == VerdictKind::Indistinguishable && b_to_a.kind == VerdictKind::Indistinguishable;
  }
};

inline Decision decide(const UnitarySet& s, const OptimizerConfig& cfg) {
  return {decide_direction(s, Direction::AToB, cfg), decide_direction(s, Direction::BToA, cfg)};
}

inline json witness_to_json(const Witness& w) {
  return json{{"d", w.d}, {"alpha", vector_to_json(w.alpha)}, {"residual", w.residual}, {"restart", w.restart}};
}

inline json povm_to_json(const Povm& p) {
  json out = json::array();
  for (const auto& e : p.elements) out.push_back(json{{"weight", e.weight}, {"phi", vector_to_json(e.phi)}});
  return out;
}

inline json verdict_to_json(const Verdict& v) {
  json j{{"direction", to_string(v.direction)},
         {"verdict", to_string(v.kind)},
         {"witness", v.witness ? witness_to_json(*v.witness) : json(nullptr)},
         {"povm_size", v.povm ? json(v.povm->size()) : json(nullptr)},
         {"certificate", v.certificate ? certificate_to_json(*v.certificate) : json(nullptr)},
         {"best_residual", v.best_residual ? json(*v.best_residual) : json(nullptr)},
         {"simulated_success", v.simulated_success ? json(*v.simulated_success) : json(nullptr)},
         {"near_witness", v.near_witness},
         {"restarts_used", v.restarts_used},
         {"config", config_to_json(v.config)}};
  return j;
}

}  // namespace entdis
