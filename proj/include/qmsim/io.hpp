/* Copyright 2026 The qmsim Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

/*
io.hpp - JSON and CSV formats: state dumps, protocol scripts, cluster graphs,
verification reports, and self-describing CSV tables.
*/
#ifndef QMSIM_IO_HPP_
#define QMSIM_IO_HPP_

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qmsim/graph.hpp"
#include "qmsim/script.hpp"
#include "qmsim/state.hpp"

namespace qmsim::io {

using json = nlohmann::json;

// Shortest round-trip decimal form, identical across runs.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json complex_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

// A bare number or a [re, im] pair.
inline cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InvalidInput("expected a number or [re, im] pair, got " + j.dump());
}

inline QubitId qubit_from_json(const json& j) {
  if (j.is_string()) return QubitId::parse(j.get<std::string>());
  if (j.is_number_integer()) return QubitId::photon(j.get<int>());
  throw InvalidInput("expected a qubit label, got " + j.dump());
}

inline json state_to_json(const StateVector& s) {
  json labels = json::array();
  for (const auto& q : s.labels()) labels.push_back(q.label());
  json amps = json::array();
  for (const auto& a : s.amplitudes()) amps.push_back(complex_to_json(a));
  return {{"labels", labels}, {"amplitudes", amps}};
}

inline StateVector state_from_json(const json& j) {
  require(j.is_object() && j.contains("labels") && j.contains("amplitudes"),
          "state dump needs 'labels' and 'amplitudes'");
  std::vector<QubitId> labels;
  for (const auto& l : j.at("labels")) labels.push_back(qubit_from_json(l));
  std::vector<cplx> amps;
  for (const auto& a : j.at("amplitudes")) amps.push_back(complex_from_json(a));
  return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

inline json op_to_json(const ScriptOp& op) {
  json j{{"kind", to_string(op.kind)}, {"target", op.target.label()}};
  if (op.control) {
    j["control"] = op.control->label();
    j["r"] = op.r.imag() == 0.0 ? json(op.r.real()) : complex_to_json(op.r);
  }
  return j;
}

inline ScriptOp op_from_json(const json& j) {
  require(j.is_object(), "gate record must be an object, got " + j.dump());
  require(j.contains("kind") && j.contains("target"), "gate record needs 'kind' and 'target': " + j.dump());
  ScriptOp op{parse_op_kind(j.at("kind").get<std::string>()), qubit_from_json(j.at("target")), std::nullopt, 1.0};
  if (j.contains("control") && !j.at("control").is_null()) op.control = qubit_from_json(j.at("control"));
  if (j.contains("r")) op.r = complex_from_json(j.at("r"));
  return op;
}

inline json script_to_json(const ProtocolScript& s) {
  json qubits = json::array();
  for (const auto& q : s.qubits) qubits.push_back(q.label());
  json ops = json::array();
  for (const auto& op : s.ops) ops.push_back(op_to_json(op));
  return {{"qubits", qubits}, {"ops", ops}};
}

// Either {"qubits": [...], "ops": [...]} or a bare list of gate records, in
// which case the register is the ancilla (if used) followed by the photons in
// ascending order.
inline ProtocolScript script_from_json(const json& j) {
  ProtocolScript s;
  const json* ops = &j;
  if (j.is_object()) {
    require(j.contains("ops"), "script object needs an 'ops' list");
    ops = &j.at("ops");
    if (j.contains("qubits"))
      for (const auto& q : j.at("qubits")) s.qubits.push_back(qubit_from_json(q));
  }
  require(ops->is_array(), "script ops must be a JSON list");
  for (const auto& rec : *ops) s.ops.push_back(op_from_json(rec));
  if (s.qubits.empty()) {
    std::set<QubitId> seen;
    for (const auto& op : s.ops) {
      seen.insert(op.target);
      if (op.control) seen.insert(*op.control);
    }
    s.qubits.assign(seen.begin(), seen.end());
  }
  s.validate();
  return s;
}

inline json graph_to_json(const ClusterGraph& g) {
  json vs = json::array();
  for (const auto& v : g.vertices()) vs.push_back(v.label());
  json es = json::array();
  for (const auto& [a, b] : g.edges()) es.push_back({a.label(), b.label()});
  return {{"vertices", vs}, {"edges", es}};
}

// {"vertices": [...], "edges": [[a, b], ...]}; integers denote photons.
inline ClusterGraph graph_from_json(const json& j) {
  require(j.is_object() && j.contains("vertices"), "graph needs a 'vertices' list");
  std::vector<QubitId> vs;
  for (const auto& v : j.at("vertices")) vs.push_back(qubit_from_json(v));
  ClusterGraph g(std::move(vs));
  if (j.contains("edges")) {
    for (const auto& e : j.at("edges")) {
      require(e.is_array() && e.size() == 2, "edge must be a pair, got " + e.dump());
      g.add_edge(qubit_from_json(e[0]), qubit_from_json(e[1]));
    }
  }
  return g;
}

inline json report_to_json(const VerificationReport& r) {
  json values = json::object();
  for (const auto& [q, v] : r.expectations) values[q.label()] = v;
  return {{"expectations", values}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InvalidInput("malformed JSON in '" + path + "': " + e.what());
  }
}

using Metadata = std::vector<std::pair<std::string, std::string>>;

// "# key: value" lines, then the column header, then rows.
class CsvTable {
 public:
  CsvTable(Metadata meta, std::vector<std::string> columns)
      : meta_(std::move(meta)), columns_(std::move(columns)) {}

  void add_row(std::vector<std::string> cells) {
    require(cells.size() == columns_.size(), "CSV row width does not match header");
    rows_.push_back(std::move(cells));
  }

  std::string str() const {
    std::ostringstream os;
    for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
    join(os, columns_);
    for (const auto& r : rows_) join(os, r);
    return os.str();
  }

 private:
  static void join(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }

  Metadata meta_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace qmsim::io

#endif  // QMSIM_IO_HPP_
