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


// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Timings are wall clock and count against each budget.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/QR>

#include "entdis/cli.hpp"
#include "oracles.hpp"

namespace {

using namespace entdis;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("violated: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "entdis");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

int ceil_sqrt(int d) {
  int s = 1;
  while (s * s < d) ++s;
  return s;
}

// 1. Exact algebra against the dense reference.
Outcome algebra() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0;
  long mismatched = 0, pairs = 0;
  for (int d = 2; d <= 8; ++d) {
    const Dimension dim(d);
    std::vector<oracle::Mat> dense;
    std::vector<PauliIndex> idx;
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        dense.push_back(oracle::pauli(d, m, n));
        idx.push_back({m, n});
      }
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) {
        ++pairs;
        const oracle::Mat ref = dense[a].adjoint() * dense[b];
        const auto got = adjoint_product(dim, idx[a], idx[b]);
        const auto dec = oracle::decode(ref);
        if (dec.phase != got.phase.k || dec.m != got.index.m || dec.n != got.index.n) ++mismatched;
        worst = std::max(worst, max_abs(to_matrix(dim, got) - ref));
      }
  }
  o.require(mismatched == 0, std::to_string(mismatched) + " phase/index mismatches");
  o.require(worst < 1e-12, "entrywise error " + fmt("%.3e", worst));

  double weyl = 0;
  int weyl_exact_bad = 0;
  for (int d = 2; d <= 16; ++d) {
    const Dimension dim(d);
    const PhasedPauli z{{0}, {1, 0}}, x{{0}, {0, 1}};
    const auto zx = product(dim, z, x), xz = product(dim, x, z);
    if (zx.index != xz.index || dim.mod(zx.phase.k - xz.phase.k) != 1) ++weyl_exact_bad;
    const oracle::Mat lhs = oracle::clock(d) * oracle::shift(d);
    const oracle::Mat rhs = oracle::omega_pow(d, 1) * oracle::shift(d) * oracle::clock(d);
    weyl = std::max(weyl, max_abs(lhs - rhs));
    weyl = std::max(weyl, max_abs(to_matrix(dim, PauliIndex{1, 0}) * to_matrix(dim, PauliIndex{0, 1}) -
                                  oracle::omega_pow(d, 1) * to_matrix(dim, PauliIndex{0, 1}) *
                                      to_matrix(dim, PauliIndex{1, 0})));
  }
  o.require(weyl_exact_bad == 0, "exact ZX = wXZ fails for some d <= 16");
  o.require(weyl < 1e-12, "dense Weyl error " + fmt("%.3e", weyl));
  const double t = seconds_since(t0);
  o.require(t < 10.0, "runtime " + fmt("%.2f s", t) + " >= 10 s");
  o.note(std::to_string(pairs) + " pairs, max entry error " + fmt("%.1e", worst));
  return o;
}

// 2. Square-root family: orthogonality, size, cover certificates.
Outcome theorem1_family() {
  Outcome o;
  std::string size_misses;
  for (int d = 4; d <= 20; ++d) {
    const auto t0 = Clock::now();
    const auto s = theorem1_set(d);
    const auto defects = set_defects(s);
    o.require(defects.orthogonality < 1e-10 && defects.unitarity < 1e-10,
              "d=" + std::to_string(d) + " not orthogonal");
    const int r = ceil_sqrt(d);
    const int expected = (d == r * (r - 1)) ? 3 * r - 3 : 3 * r - 1;
    if (static_cast<int>(s.size()) != expected)
      size_misses += " d=" + std::to_string(d) + ":" + std::to_string(s.size()) + "/" + std::to_string(expected);
    for (Direction dir : {Direction::AToB, Direction::BToA}) {
      const auto cert = prove_cover(s, dir);
      o.require(cert.has_value(), "d=" + std::to_string(d) + " " + to_string(dir) + " no cover certificate");
      if (cert) {
        const auto v = verify_certificate(*cert, s);
        o.require(v.ok, "d=" + std::to_string(d) + " " + to_string(dir) + " verification: " + v.reason);
      }
    }
    const double t = seconds_since(t0);
    o.require(t < 1.0, "d=" + std::to_string(d) + " runtime " + fmt("%.2f s", t));
  }
  o.require(size_misses.empty(), "size (got/expected)" + size_misses);
  return o;
}

std::vector<UnitarySet> theorem2_sets() {
  std::vector<UnitarySet> out;
  for (int d : {7, 9, 11}) {
    Theorem2Spec spec;
    spec.d = d;
    out.push_back(theorem2_set(spec));
  }
  return out;
}

// 3. Four-state block family.
Outcome theorem2_family() {
  Outcome o;
  for (const auto& s : theorem2_sets()) {
    const auto t0 = Clock::now();
    const std::string tag = "d=" + std::to_string(s.d.value());
    const auto defects = set_defects(s);
    o.require(s.size() == 4, tag + " size");
    o.require(defects.unitarity < 1e-12 && defects.orthogonality < 1e-12, tag + " defects");
    for (Direction dir : {Direction::AToB, Direction::BToA}) {
      const auto sub = hermitian_feasible_subspace(oriented(s, dir));
      const auto res = block_residuals(sub, {0, 1});
      o.require(*std::max_element(res.begin(), res.end()) < 1e-8, tag + " " + to_string(dir) + " block residual");
      const auto cert = block_identity_prover(sub, {0, 1});
      o.require(cert.has_value(), tag + " " + to_string(dir) + " block {0,1} not certified");
    }
    OptimizerConfig cfg;
    const auto dec = decide(s, cfg);
    o.require(dec.a_to_b.kind == VerdictKind::Indistinguishable && dec.b_to_a.kind == VerdictKind::Indistinguishable,
              tag + " decide is not indistinguishable");
    const double t = seconds_since(t0);
    o.require(t < 5.0, tag + " runtime " + fmt("%.2f s", t));
  }
  return o;
}

// 4. Phase gate through the command line.
Outcome phase_gate() {
  Outcome o;
  for (const char* g : {"0,1", "0,-1"}) {
    const auto r = cli({"gen", "theorem2", "--d", "7", "--omega", "1,0", "--gamma", g});
    o.require(r.code == cli::kExitInput, std::string("gamma=") + g + " exit " + std::to_string(r.code));
  }
  // Control: the default phase is accepted.
  o.require(cli({"gen", "theorem2", "--d", "7"}).code == cli::kExitOk, "default gamma rejected");
  return o;
}

// 5. Distinguishable controls.
Outcome controls() {
  Outcome o;
  const auto t0 = Clock::now();
  OptimizerConfig cfg;
  std::mt19937_64 rng(2026);
  double worst_w = 0, worst_id = 0, worst_succ = 1;
  for (int d = 4; d <= 8; ++d) {
    const Dimension dim(d);
    std::uniform_int_distribution<int> pick(0, d * d - 1);
    for (int t = 0; t < 50; ++t) {
      int a = pick(rng), b = pick(rng);
      while (b == a) b = pick(rng);
      const auto s = bell_set(dim, {{a / d, a % d}, {b / d, b % d}});
      const auto w = witness_search(s, cfg).best;
      const auto povm = orbit_povm(dim, w.alpha);
      const double succ = simulate_protocol(s, povm, 10000, cfg.seed + static_cast<std::uint64_t>(t));
      worst_w = std::max(worst_w, w.residual);
      worst_id = std::max(worst_id, povm.identity_residual());
      worst_succ = std::min(worst_succ, succ);
    }
  }
  o.require(worst_w < 1e-10, "(a) pair witness residual " + fmt("%.2e", worst_w));
  o.require(worst_id < 1e-10, "(a) orbit identity residual " + fmt("%.2e", worst_id));
  o.require(worst_succ == 1.0, "(a) simulated success " + fmt("%.6f", worst_succ));

  const Dimension three(3);
  int triples = 0;
  double worst_t = 0;
  for (int a = 0; a < 9; ++a)
    for (int b = a + 1; b < 9; ++b)
      for (int c = b + 1; c < 9; ++c) {
        ++triples;
        const auto s = bell_set(three, {{a / 3, a % 3}, {b / 3, b % 3}, {c / 3, c % 3}});
        worst_t = std::max(worst_t, witness_search(s, cfg).best.residual);
      }
  o.require(triples == 84, "triple count");
  o.require(worst_t < 1e-9, "(b) triple witness residual " + fmt("%.2e", worst_t));

  const auto diag = bell_set(Dimension(4), {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const auto dec = decide(diag, cfg);
  o.require(dec.a_to_b.kind == VerdictKind::Distinguishable, "(c) diagonal set not distinguishable A_to_B");
  o.require(dec.b_to_a.kind == VerdictKind::Distinguishable, "(c) diagonal set not distinguishable B_to_A");
  o.require(!prove_cover(diag, Direction::AToB) && !prove_cover(diag, Direction::BToA),
            "(c) cover prover not inconclusive");
  const double t = seconds_since(t0);
  o.require(t < 120.0, "runtime " + fmt("%.1f s", t) + " >= 120 s");
  o.note("pairs: max residual " + fmt("%.1e", worst_w) + ", triples: max residual " + fmt("%.1e", worst_t));
  return o;
}

// 6. Certified sets must keep the search away from zero.
Outcome search_floor() {
  Outcome o;
  OptimizerConfig cfg;
  std::vector<std::pair<std::string, UnitarySet>> sets;
  for (int d = 4; d <= 20; ++d) sets.emplace_back("sqrt d=" + std::to_string(d), theorem1_set(d));
  for (auto& s : theorem2_sets()) sets.emplace_back("block d=" + std::to_string(s.d.value()), std::move(s));
  double floor = std::numeric_limits<double>::infinity();
  std::string where, table;
  for (const auto& [name, s] : sets) {
    double local = std::numeric_limits<double>::infinity();
    for (Direction dir : {Direction::AToB, Direction::BToA})
      local = std::min(local, witness_search(oriented(s, dir), cfg).best.residual);
    o.require(local > 1e-4, name + " best residual " + fmt("%.3e", local));
    if (!s.tag) {
      // Any vector on the cyclic block is an exact witness; the certificate
      // rules out a complete measurement, not a single witness.
      o.note(name + ": penalty at e_2 = " + fmt("%.1e", penalty(CVector::Unit(s.d.value(), 2), s)));
    }
    table += " " + name.substr(name.find('=') + 1) + (name[0] == 's' ? "" : "b") + ":" + fmt("%.3g", local);
    if (local < floor) {
      floor = local;
      where = name;
    }
  }
  o.note("empirical floor " + fmt("%.4e", floor) + " (" + where + ")");
  o.note("per set:" + table);
  return o;
}

CMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ();
}

// 7. Gradient and twirl.
Outcome hygiene() {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    UnitarySet s;
    const int d = std::uniform_int_distribution<int>(2, 7)(rng);
    s.d = Dimension(d);
    // At most d members: three or four Paulis at d = 2 make the penalty constant
    // on the sphere, where a relative gradient error is 0/0.
    const int k = std::uniform_int_distribution<int>(2, std::min(5, d))(rng);
    if (t % 2 == 0) {
      std::vector<PauliIndex> idx;
      std::uniform_int_distribution<int> pick(0, d * d - 1);
      while (static_cast<int>(idx.size()) < k) {
        const int v = pick(rng);
        const PauliIndex p{v / d, v % d};
        if (std::find(idx.begin(), idx.end(), p) == idx.end()) idx.push_back(p);
      }
      s = bell_set(s.d, idx);
    } else {
      for (int i = 0; i < k; ++i) s.members.push_back(random_unitary(d, rng));
    }
    const Penalty p(s);
    const CVector a = oracle::random_unit(d, rng);
    CVector g;
    p.value_and_gradient(a, g);
    const double h = 1e-6;
    CVector fd(d);
    for (int c = 0; c < 2 * d; ++c) {
      CVector e = CVector::Zero(d);
      e(c / 2) = (c % 2 == 0) ? Complex(1, 0) : Complex(0, 1);
      const CVector dir = e - a.dot(e).real() * a;
      auto f = [&](double step) {
        const CVector v = a + step * dir;
        return p.value(v / v.norm());
      };
      const double dd = (f(h) - f(-h)) / (2 * h);
      if (c % 2 == 0)
        fd(c / 2).real(dd);
      else
        fd(c / 2).imag(dd);
    }
    worst = std::max(worst, (fd - g).norm() / g.norm());
  }
  o.require(worst < 1e-6, "gradient relative error " + fmt("%.3e", worst));

  double twirl = 0;
  for (int d = 2; d <= 6; ++d) {
    const Dimension dim(d);
    const CMatrix rho = oracle::random_hermitian(d, rng);
    CMatrix sum = CMatrix::Zero(d, d);
    for (int m = 0; m < d; ++m)
      for (int n = 0; n < d; ++n) {
        const CMatrix u = to_matrix(dim, PauliIndex{m, n});
        sum += u * rho * u.adjoint();
      }
    twirl = std::max(twirl, max_abs(sum - double(d) * rho.trace() * CMatrix::Identity(d, d)));
  }
  o.require(twirl < 1e-10, "twirl error " + fmt("%.3e", twirl));
  o.note("gradient rel. error " + fmt("%.1e", worst) + ", twirl error " + fmt("%.1e", twirl));
  return o;
}

// 8. Size table from the sweep command.
Outcome sweep_table() {
  Outcome o;
  const auto r = cli({"--format", "csv", "sweep", "--d-min", "4", "--d-max", "60"});
  o.require(r.code == cli::kExitOk, "sweep exit " + std::to_string(r.code));
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  int rows = 0;
  bool saw30 = false;
  while (std::getline(in, line)) {
    int d, sq, half, gen;
    char cert[8] = {};
    if (std::sscanf(line.c_str(), "%d,%d,%d,%d,%7s", &d, &sq, &half, &gen, cert) != 5) {
      o.require(false, "unparsable row '" + line + "'");
      continue;
    }
    ++rows;
    if (d >= 30) o.require(sq <= half, "d=" + std::to_string(d) + " " + std::to_string(sq) + " > " + std::to_string(half));
    if (d == 30) {
      saw30 = true;
      o.require(sq == 17 && half == 17, "d=30 row " + line);
    }
  }
  o.require(rows == 57 && saw30, "expected 57 rows including d=30");
  return o;
}

// 9. Byte-identical reports.
Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "entdis_acceptance";
  std::filesystem::create_directories(dir);
  const std::string set = (dir / "t1_9.json").string();
  o.require(cli({"gen", "theorem1", "--d", "9", "-o", set}).code == cli::kExitOk, "gen failed");
  const auto first = cli({"--seed", "0", "decide", set});
  const auto second = cli({"--seed", "0", "decide", set});
  o.require(first.code == cli::kExitOk && second.code == cli::kExitOk, "decide failed");
  o.require(!first.out.empty() && first.out == second.out, "reports differ");
  o.note(std::to_string(first.out.size()) + " bytes, hash " + fnv1a_hex(first.out));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"algebra exactness", algebra},
      {"square-root family certified", theorem1_family},
      {"four-state block family certified", theorem2_family},
      {"phase condition gate", phase_gate},
      {"distinguishable controls", controls},
      {"prover/search consistency", search_floor},
      {"numerical hygiene", hygiene},
      {"size table", sweep_table},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    failed += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  criterion " << i + 1 << ": " << criteria[i].first << " ("
              << fmt("%.2f s", seconds_since(t0)) << ")\n";
    for (const auto& n : o.notes) std::cout << "        " << n << "\n";
    std::cout.flush();
  }
  std::cout << (failed ? std::to_string(failed) + " of 9 criteria failed" : std::string("all 9 criteria passed"))
            << "\n";
  return failed ? 1 : 0;
}
