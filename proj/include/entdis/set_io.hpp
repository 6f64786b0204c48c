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

// Set-file JSON schema:
//   {"d": int, "type": "generalized_bell", "indices": [[m, n], ...]}
//   {"d": int, "type": "explicit", "unitaries": [ d rows of d [re, im] pairs, ... ]}
//   {"d": int, "type": "theorem1"}
//   {"d": int, "type": "theorem2", "omega": [re, im], "gamma": [re, im], "sigma": [re, im]}

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "entdis/states.hpp"

namespace entdis {

using nlohmann::json;

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("complex number must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d) throw InputError("unitary must have d rows");
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != d) throw InputError("unitary row must have d entries");
    for (int c = 0; c < d; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  return m;
}

inline json vector_to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline CVector vector_from_json(const json& j) {
  if (!j.is_array()) throw InputError("vector must be an array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

/// Hash of the members' exact binary values, stable across runs of one build.
inline std::string members_hash(const UnitarySet& s) {
  json m = json::array();
  for (const auto& u : s.members) m.push_back(matrix_to_json(u));
  return fnv1a_hex(json{{"d", s.d.value()}, {"members", m}}.dump());
}

inline json bell_set_json(const UnitarySet& s) {
  if (!s.tag) throw InputError("set is not a generalized Bell set");
  return json{{"d", s.d.value()}, {"type", "generalized_bell"}, {"indices", *s.tag}};
}

inline json explicit_set_json(const UnitarySet& s) {
  json u = json::array();
  for (const auto& m : s.members) u.push_back(matrix_to_json(m));
  return json{{"d", s.d.value()}, {"type", "explicit"}, {"unitaries", u}};
}

inline UnitarySet set_from_json(const json& j) {
  if (!j.is_object()) throw InputError("set file must hold a JSON object");
  if (!j.contains("d") || !j["d"].is_number_integer()) throw InputError("set file needs integer field 'd'");
  if (!j.contains("type") || !j["type"].is_string()) throw InputError("set file needs string field 'type'");
  const int d = j["d"].get<int>();
  const std::string type = j["type"].get<std::string>();
  if (type == "theorem1") return theorem1_set(d);
  if (type == "theorem2") {
    Theorem2Spec spec;
    spec.d = d;
    if (j.contains("omega")) spec.omega = complex_from_json(j["omega"]);
    if (j.contains("gamma")) spec.gamma = complex_from_json(j["gamma"]);
    if (j.contains("sigma")) spec.sigma = complex_from_json(j["sigma"]);
    return theorem2_set(spec);
  }
  if (type == "generalized_bell") {
    if (!j.contains("indices") || !j["indices"].is_array()) throw InputError("generalized_bell set needs 'indices'");
    return bell_set(Dimension(d), j["indices"].get<std::vector<PauliIndex>>());
  }
  if (type == "explicit") {
    if (!j.contains("unitaries") || !j["unitaries"].is_array()) throw InputError("explicit set needs 'unitaries'");
    UnitarySet s{Dimension(d), {}, std::nullopt};
    for (const auto& u : j["unitaries"]) s.members.push_back(matrix_from_json(u, d));
    validate_set(s);
    return s;
  }
  throw InputError("unknown set type '" + type + "'");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in " + what + ": " + e.what());
  }
}

}  // namespace entdis
