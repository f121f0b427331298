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
graph.hpp - Cluster (graph) states on the dense engine: graph type, the local
stabilizers K_i = X_i prod_{j in N(i)} Z_j, ideal state preparation and
stabilizer verification.
*/
#ifndef QMSIM_GRAPH_HPP_
#define QMSIM_GRAPH_HPP_

#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "qmsim/state.hpp"

namespace qmsim {

class ClusterGraph {
 public:
  ClusterGraph() = default;
  explicit ClusterGraph(std::vector<QubitId> vertices) : vertices_(std::move(vertices)) {
    for (std::size_t i = 0; i < vertices_.size(); ++i)
      for (std::size_t j = i + 1; j < vertices_.size(); ++j)
        require(vertices_[i] != vertices_[j], "duplicate vertex " + vertices_[i].label());
  }

  void add_edge(QubitId u, QubitId v) {
    require(u != v, "self-loop on " + u.label());
    require(contains(u), "edge references unknown vertex " + u.label());
    require(contains(v), "edge references unknown vertex " + v.label());
    edges_.insert(std::minmax(u, v));
  }

  const std::vector<QubitId>& vertices() const { return vertices_; }
  const std::set<std::pair<QubitId, QubitId>>& edges() const { return edges_; }
  bool contains(QubitId v) const { return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end(); }
  bool has_edge(QubitId u, QubitId v) const { return edges_.contains(std::minmax(u, v)); }

  std::vector<QubitId> neighbors(QubitId v) const {
    require(contains(v), "unknown vertex " + v.label());
    std::vector<QubitId> out;
    for (const auto& [a, b] : edges_) {
      if (a == v) out.push_back(b);
      if (b == v) out.push_back(a);
    }
    return out;
  }

 private:
  std::vector<QubitId> vertices_;
  std::set<std::pair<QubitId, QubitId>> edges_;
};

// Height-three binary tree: root 7, middle nodes 5 and 6, leaves 1-4.
// Vertex order 7,1,5,2,3,6,4 matches the order the tree protocol emits.
inline ClusterGraph tree7_graph() {
  auto p = [](int k) { return QubitId::photon(k); };
  ClusterGraph g({p(7), p(1), p(5), p(2), p(3), p(6), p(4)});
  g.add_edge(p(7), p(5));
  g.add_edge(p(7), p(6));
  g.add_edge(p(5), p(1));
  g.add_edge(p(5), p(2));
  g.add_edge(p(6), p(3));
  g.add_edge(p(6), p(4));
  return g;
}

inline ClusterGraph path_graph(const std::vector<QubitId>& chain) {
  ClusterGraph g(chain);
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) g.add_edge(chain[i], chain[i + 1]);
  return g;
}

inline PauliString stabilizer(const ClusterGraph& graph, QubitId v) {
  PauliString p;
  for (QubitId u : graph.neighbors(v)) p[u] = Pauli::Z;
  p[v] = Pauli::X;
  return p;
}

// H on every vertex, then CZ on every edge; register order = vertex order.
inline StateVector ideal_cluster_state(const ClusterGraph& graph) {
  const auto& vs = graph.vertices();
  require(!vs.empty(), "graph has no vertices");
  require(static_cast<int>(vs.size()) <= kMaxDenseQubits,
          "graph with " + std::to_string(vs.size()) +
              " vertices is too large for the dense path; use the tableau path");
  const int n = static_cast<int>(vs.size());
  std::vector<std::size_t> edge_masks;
  for (const auto& [a, b] : graph.edges()) {
    auto pos = [&](QubitId q) {
      return std::size_t{1} << (n - 1 - (std::find(vs.begin(), vs.end(), q) - vs.begin()));
    };
    edge_masks.push_back(pos(a) | pos(b));
  }
  const std::size_t dim = std::size_t{1} << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  std::vector<cplx> amps(dim);
  for (std::size_t x = 0; x < dim; ++x) {
    int parity = 0;
    for (auto m : edge_masks) parity ^= ((x & m) == m);
    amps[x] = parity ? -amp : amp;
  }
  return StateVector::from_amplitudes(vs, std::move(amps));
}

struct VerificationReport {
  std::map<QubitId, double> expectations;
  double tolerance = 1e-9;
  bool pass = false;
};

// Register and graph must hold the same qubits; order may differ.
inline VerificationReport verify_all(const StateVector& state, const ClusterGraph& graph, double tol = 1e-9) {
  require(static_cast<std::size_t>(state.qubit_count()) == graph.vertices().size(),
          "register/graph mismatch: " + std::to_string(state.qubit_count()) + " qubits vs " +
              std::to_string(graph.vertices().size()) + " vertices");
  for (QubitId v : graph.vertices())
    require(state.contains(v), "register/graph mismatch: vertex " + v.label() + " not in register");
  VerificationReport report;
  report.tolerance = tol;
  report.pass = true;
  for (QubitId v : graph.vertices()) {
    const double e = expect_pauli(state, stabilizer(graph, v));
    report.expectations[v] = e;
    if (std::abs(e - 1.0) > tol) report.pass = false;
  }
  return report;
}

}  // namespace qmsim

#endif  // QMSIM_GRAPH_HPP_
