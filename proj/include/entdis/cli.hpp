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

// Command-line front end. Exit codes: 0 computed, 1 verification false,
// 2 input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "entdis/certify.hpp"
#include "entdis/search.hpp"
#include "entdis/set_io.hpp"
#include "entdis/states.hpp"

namespace entdis::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFalse = 1;
inline constexpr int kExitInput = 2;

struct RunConfig {
  std::uint64_t seed = 0;
  int restarts = 64;
  int max_iterations = 2000;
  double tol_success = 1e-12;
  double tol_floor = 1e-6;
  std::string output;
  std::string format;  // empty: command default

  OptimizerConfig optimizer() const {
    OptimizerConfig c;
    c.seed = seed;
    c.restarts = restarts;
    c.max_iterations = max_iterations;
    c.success_tol = tol_success;
    c.failure_floor = tol_floor;
    if (const char* t = std::getenv("ENTDIS_THREADS")) {
      try {
        c.threads = std::stoi(t);
      } catch (const std::exception&) {
        throw InputError("ENTDIS_THREADS must be an integer");
      }
    }
    c.validate();
    return c;
  }
};

/// "a,b;c,d" -> [[a,b],[c,d]]
inline std::vector<std::vector<double>> parse_pairs(const std::string& text) {
  std::vector<std::vector<double>> out;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    std::stringstream items(group);
    std::string item;
    std::vector<double> pair;
    while (std::getline(items, item, ',')) {
      try {
        std::size_t used = 0;
        pair.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw InputError("cannot parse number '" + item + "'");
      }
    }
    if (pair.size() != 2) throw InputError("expected pairs 'x,y' separated by ';' in '" + text + "'");
    out.push_back(pair);
  }
  return out;
}

inline Complex parse_complex(const std::string& text) {
  const auto p = parse_pairs(text);
  if (p.size() != 1) throw InputError("expected one complex number 're,im'");
  return {p[0][0], p[0][1]};
}

inline void emit(const RunConfig& rc, const std::string& text, std::ostream& out) {
  if (rc.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(rc.output, std::ios::binary);
  if (!f) throw InputError("cannot write '" + rc.output + "'");
  f << text;
}

struct LoadedSet {
  UnitarySet set;
  std::string input_hash;
};

inline LoadedSet load_set(const std::string& path) {
  const std::string text = read_file(path);
  return {set_from_json(parse_json_text(text, path)), fnv1a_hex(text)};
}

inline json report_header(const OptimizerConfig& cfg, const std::string& input_hash) {
  return json{{"tool_version", kToolVersion}, {"input_hash", input_hash}, {"config", config_to_json(cfg)}};
}

inline int cmd_gen(const RunConfig& rc, const std::string& type, int d, const std::string& indices,
                   const std::string& omega, const std::string& gamma, const std::string& sigma,
                   const std::string& from, std::ostream& out,
                   std::ostream& err = std::cerr) {
  json file;
  UnitarySet s;
  if (type == "theorem1") {
    s = theorem1_set(d);
    file = bell_set_json(s);
  } else if (type == "bell") {
    std::vector<PauliIndex> idx;
    for (const auto& p : parse_pairs(indices)) {
      if (p[0] != std::floor(p[0]) || p[1] != std::floor(p[1])) throw InputError("indices must be integers");
      idx.push_back({static_cast<int>(p[0]), static_cast<int>(p[1])});
    }
    s = bell_set(Dimension(d), idx);
    file = bell_set_json(s);
  } else if (type == "theorem2") {
    Theorem2Spec spec;
    spec.d = d;
    if (!omega.empty()) spec.omega = parse_complex(omega);
    if (!gamma.empty()) spec.gamma = parse_complex(gamma);
    if (!sigma.empty()) spec.sigma = parse_complex(sigma);
    s = theorem2_set(spec);
    file = explicit_set_json(s);
  } else if (type == "explicit") {
    if (from.empty()) throw InputError("gen explicit needs --from <set file>");
    s = load_set(from).set;
    file = explicit_set_json(s);
  } else {
    throw InputError("unknown generator '" + type + "'");
  }
  emit(rc, file.dump(2) + "\n", out);
  const auto defects = set_defects(s);
  std::ostream& summary = rc.output.empty() ? err : out;
  summary << "states: " << s.size() << "  d: " << s.d.value() << "  max unitarity defect: " << defects.unitarity
          << "  max |Tr(Ui^dag Uj)|: " << defects.orthogonality << "\n";
  return kExitOk;
}

inline int cmd_decide(const RunConfig& rc, const std::string& path, std::ostream& out) {
  const auto loaded = load_set(path);
  const auto cfg = rc.optimizer();
  const auto decision = decide(loaded.set, cfg);
  if (rc.format == "csv") {
    std::ostringstream csv;
    csv << "direction,verdict,best_residual,povm_size,simulated_success\n";
    for (const Verdict* v : {&decision.a_to_b, &decision.b_to_a}) {
      csv << to_string(v->direction) << ',' << to_string(v->kind) << ','
          << (v->best_residual ? json(*v->best_residual).dump() : "") << ','
          << (v->povm ? std::to_string(v->povm->size()) : "") << ','
          << (v->simulated_success ? json(*v->simulated_success).dump() : "") << '\n';
    }
    emit(rc, csv.str(), out);
    return kExitOk;
  }
  json report = report_header(cfg, loaded.input_hash);
  report["results"] = json::array({verdict_to_json(decision.a_to_b), verdict_to_json(decision.b_to_a)});
  report["one_way_indistinguishable"] = decision.one_way_indistinguishable();
  emit(rc, report.dump(2) + "\n", out);
  return kExitOk;
}

inline int cmd_certify(const RunConfig& rc, const std::string& path, const std::string& direction,
                       std::ostream& out, std::ostream& err = std::cerr) {
  const auto loaded = load_set(path);
  const Direction dir = direction_from_string(direction);
  std::optional<Certificate> cert;
  if (auto c = prove_cover(loaded.set, dir)) cert = *c;
  if (!cert && loaded.set.size() >= 2)
    if (auto c = prove_block(loaded.set, dir)) cert = *c;
  json j = cert ? certificate_to_json(*cert) : json(nullptr);
  if (cert) j["input_hash"] = loaded.input_hash;
  emit(rc, j.dump(2) + "\n", out);
  if (!cert) err << "no certificate found (" << direction << "); this does not imply distinguishability\n";
  return kExitOk;
}

inline int cmd_search(const RunConfig& rc, const std::string& path, const std::string& direction,
                      std::ostream& out) {
  const auto loaded = load_set(path);
  const auto cfg = rc.optimizer();
  const UnitarySet o = oriented(loaded.set, direction_from_string(direction));
  const auto found = witness_search(o, cfg);
  json report = report_header(cfg, loaded.input_hash);
  report["direction"] = direction;
  report["witness"] = witness_to_json(found.best);
  report["harvested"] = found.harvested.size();
  report["restarts_used"] = found.restarts_used;
  emit(rc, report.dump(2) + "\n", out);
  return kExitOk;
}

inline int cmd_simulate(const RunConfig& rc, const std::string& path, const std::string& direction,
                        const std::string& alpha_text, int trials, std::ostream& out,
                        std::ostream& err = std::cerr) {
  const auto loaded = load_set(path);
  const auto cfg = rc.optimizer();
  const UnitarySet o = oriented(loaded.set, direction_from_string(direction));
  json report = report_header(cfg, loaded.input_hash);
  report["direction"] = direction;
  std::optional<Povm> povm;
  if (!alpha_text.empty()) {
    // Orbit POVM from a user-supplied vector, witness or not.
    if (!o.tag) throw InputError("--alpha needs a generalized Bell set");
    const auto pairs = parse_pairs(alpha_text);
    CVector alpha(static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t i = 0; i < pairs.size(); ++i) alpha(static_cast<Eigen::Index>(i)) = Complex(pairs[i][0], pairs[i][1]);
    if (alpha.size() != o.d.value() || alpha.norm() == 0) throw InputError("--alpha must be a nonzero vector of length d");
    alpha /= alpha.norm();
    povm = orbit_povm(o.d, alpha);
    report["witness_residual"] = penalty(alpha, o);
  } else {
    const auto found = witness_search(o, cfg);
    report["witness_residual"] = found.best.residual;
    if (found.best.residual < cfg.success_tol) povm = povm_completion(o, found.best, cfg, found.harvested);
  }
  if (!povm) {
    report["povm_size"] = nullptr;
    report["success_rate"] = nullptr;
    emit(rc, report.dump(2) + "\n", out);
    err << "no complete POVM available; nothing to simulate\n";
    return kExitOk;
  }
  report["povm_size"] = povm->size();
  report["povm"] = povm_to_json(*povm);
  report["trials"] = trials;
  report["success_rate"] = simulate_protocol(o, *povm, trials, cfg.seed);
  emit(rc, report.dump(2) + "\n", out);
  return kExitOk;
}

struct SweepRow {
  int d = 0;
  int sqrt_family = 0;   // 3 ceil(sqrt d) - 1
  int half_family = 0;   // ceil(d / 2) + 2
  int generated = 0;
  bool certified = false;
};

inline std::vector<SweepRow> sweep_rows(int d_min, int d_max) {
  if (d_min < 4 || d_max < d_min) throw InputError("sweep needs 4 <= d_min <= d_max");
  std::vector<SweepRow> rows;
  for (int d = d_min; d <= d_max; ++d) {
    int s = 1;
    while (s * s < d) ++s;
    const auto set = theorem1_set(d);
    bool ok = true;
    for (Direction dir : {Direction::AToB, Direction::BToA}) {
      const auto cert = prove_cover(set, dir);
      ok = ok && cert && verify_certificate(*cert, set);
    }
    rows.push_back({d, 3 * s - 1, (d + 1) / 2 + 2, static_cast<int>(set.size()), ok});
  }
  return rows;
}

inline int cmd_sweep(const RunConfig& rc, int d_min, int d_max, std::ostream& out) {
  const auto rows = sweep_rows(d_min, d_max);
  std::ostringstream text;
  if (rc.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back(json{{"d", r.d},
                         {"sqrt_family_size", r.sqrt_family},
                         {"half_family_size", r.half_family},
                         {"generated_size", r.generated},
                         {"certified", r.certified}});
    text << json{{"tool_version", kToolVersion}, {"rows", arr}}.dump(2) << "\n";
  } else {
    text << "d,sqrt_family_size,half_family_size,generated_size,certified\n";
    for (const auto& r : rows)
      text << r.d << ',' << r.sqrt_family << ',' << r.half_family << ',' << r.generated << ','
           << (r.certified ? "true" : "false") << '\n';
  }
  emit(rc, text.str(), out);
  return kExitOk;
}

inline int cmd_verify(const std::string& cert_path, const std::string& set_path, std::ostream& out) {
  const auto cert = certificate_from_json(parse_json_text(read_file(cert_path), cert_path));
  const auto loaded = load_set(set_path);
  const auto res = verify_certificate(cert, loaded.set);
  out << (res.ok ? "verified" : "rejected") << ": " << res.reason << "\n";
  return res.ok ? kExitOk : kExitFalse;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Construct maximally entangled qudit state sets and decide one-way LOCC distinguishability",
               "entdis"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;
  app.add_option("--seed", rc.seed, "RNG seed")->capture_default_str();
  app.add_option("--restarts", rc.restarts, "witness search restarts")->capture_default_str();
  app.add_option("--max-iterations", rc.max_iterations, "iterations per restart")->capture_default_str();
  app.add_option("--tol-success", rc.tol_success, "witness success tolerance")->capture_default_str();
  app.add_option("--tol-floor", rc.tol_floor, "failure floor for the search residual")->capture_default_str();
  app.add_option("--output,-o", rc.output, "write the report to this path instead of stdout");
  app.add_option("--format", rc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  std::string type, indices, omega, gamma, sigma, from;
  int d = 0;
  auto* gen = app.add_subcommand("gen", "write a set file");
  gen->add_option("type", type, "theorem1 | theorem2 | bell | explicit")->required();
  gen->add_option("--d", d, "local dimension");
  gen->add_option("--indices", indices, "bell indices 'm,n;m,n;...'");
  gen->add_option("--omega", omega, "theorem2 phase 're,im'");
  gen->add_option("--gamma", gamma, "theorem2 phase 're,im'");
  gen->add_option("--sigma", sigma, "theorem2 phase 're,im'");
  gen->add_option("--from", from, "set file to materialize (explicit)");

  std::string set_path, cert_path, direction = "A_to_B", alpha;
  int trials = 10000, d_min = 4, d_max = 60;
  auto* decide_cmd = app.add_subcommand("decide", "decide both one-way directions");
  decide_cmd->add_option("set", set_path)->required();
  auto* certify_cmd = app.add_subcommand("certify", "run the exact provers");
  certify_cmd->add_option("set", set_path)->required();
  certify_cmd->add_option("--direction", direction)->check(CLI::IsMember({"A_to_B", "B_to_A"}));
  auto* search_cmd = app.add_subcommand("search", "numerical witness search");
  search_cmd->add_option("set", set_path)->required();
  search_cmd->add_option("--direction", direction)->check(CLI::IsMember({"A_to_B", "B_to_A"}));
  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo one-way protocol");
  simulate_cmd->add_option("set", set_path)->required();
  simulate_cmd->add_option("--direction", direction)->check(CLI::IsMember({"A_to_B", "B_to_A"}));
  simulate_cmd->add_option("--trials", trials)->capture_default_str();
  simulate_cmd->add_option("--alpha", alpha, "orbit POVM seed vector 're,im;re,im;...'");
  auto* sweep_cmd = app.add_subcommand("sweep", "family size table");
  sweep_cmd->add_option("--d-min", d_min)->capture_default_str();
  sweep_cmd->add_option("--d-max", d_max)->capture_default_str();
  auto* verify_cmd = app.add_subcommand("verify", "re-check a certificate against a set");
  verify_cmd->add_option("certificate", cert_path)->required();
  verify_cmd->add_option("set", set_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen) return cmd_gen(rc, type, d, indices, omega, gamma, sigma, from, out, err);
    if (*decide_cmd) return cmd_decide(rc, set_path, out);
    if (*certify_cmd) return cmd_certify(rc, set_path, direction, out, err);
    if (*search_cmd) return cmd_search(rc, set_path, direction, out);
    if (*simulate_cmd) return cmd_simulate(rc, set_path, direction, alpha, trials, out, err);
    if (*sweep_cmd) return cmd_sweep(rc, d_min, d_max, out);
    if (*verify_cmd) return cmd_verify(cert_path, set_path, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace entdis::cli
