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
protocols.hpp - Builders for the 1D chain, the seven-photon tree and the 2D
cluster protocols, plus the closed-form tree fidelity.
*/
#ifndef QMSIM_PROTOCOLS_HPP_
#define QMSIM_PROTOCOLS_HPP_

#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qmsim/gates.hpp"
#include "qmsim/graph.hpp"
#include "qmsim/script.hpp"
#include "qmsim/state.hpp"

namespace qmsim {

// H_a, CNOT_{a,p} for each photon, then a final H_a and an ancilla measurement.
inline void append_chain(ProtocolScript& script, QubitId ancilla, const std::array<QubitId, 3>& photons,
                         cplx r, bool measure = true) {
  for (QubitId p : photons) {
    script.ops.push_back({OpKind::H, ancilla, std::nullopt, 1.0});
    script.ops.push_back({OpKind::CNOT, p, ancilla, r});
  }
  script.ops.push_back({OpKind::H, ancilla, std::nullopt, 1.0});
  if (measure) script.ops.push_back({OpKind::Measure, ancilla, std::nullopt, 1.0});
}

struct ChainResult {
  std::array<StateVector, 2> outcome;   // renormalized three-photon states
  std::array<double, 2> probability;

  // Outcome 1 mapped onto outcome 0's cluster by Z on the last photon.
  StateVector corrected(int which) const {
    if (which == 0) return outcome[0];
    return apply_1q(outcome[1], outcome[1].labels().back(), mat::pauli_z());
  }
};

inline ChainResult build_chain3(ReflectionCoeff r) {
  const auto a = QubitId::ancilla();
  const std::array<QubitId, 3> photons{QubitId::photon(1), QubitId::photon(2), QubitId::photon(3)};
  ProtocolScript script{{a, photons[0], photons[1], photons[2]}, {}};
  append_chain(script, a, photons, r.value(), false);
  const auto pre = run_dense(script).state;
  auto branch = [&](int outcome) {
    auto proj = project(pre, a, outcome);
    return std::pair{drop_qubit(proj.state, a), proj.probability};
  };
  auto [s0, p0] = branch(0);
  auto [s1, p1] = branch(1);
  return {{std::move(s0), std::move(s1)}, {p0, p1}};
}

// |phi_0> = |00+> + r|10+> + r|01-> - r^2|11->
// |phi_1> = |00+> + r|10+> - r^2|01-> + r^3|11->
// |+-> normalized; returned unnormalized.
inline StateVector closed_form_tree_state(ReflectionCoeff rc, int branch,
                                          const std::array<QubitId, 3>& labels = {
                                              QubitId::photon(1), QubitId::photon(2), QubitId::photon(3)}) {
  require(branch == 0 || branch == 1, "branch must be 0 or 1");
  const cplx r = rc.value();
  // coefficient and third-qubit sign for |q1 q2>, index q1*2+q2
  std::array<cplx, 4> coeff;
  std::array<double, 4> sign{1.0, -1.0, 1.0, -1.0};
  if (branch == 0)
    coeff = {1.0, r, r, -r * r};
  else
    coeff = {1.0, -r * r, r, r * r * r};
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<cplx> amps(8);
  for (int q12 = 0; q12 < 4; ++q12) {
    amps[q12 * 2] = coeff[q12] * h;
    amps[q12 * 2 + 1] = coeff[q12] * h * sign[q12];
  }
  return StateVector::from_amplitudes({labels[0], labels[1], labels[2]}, std::move(amps));
}

inline constexpr std::array<double, 9> kTreePolynomial{2, 10, 23, 32, 29, 18, 9, 4, 1};

struct TreeFidelityReport {
  cplx r;
  cplx numerator_poly_value;
  double n_r = 0.0;
  double fidelity = 0.0;               // |numerator|^2 / (2^7 n_r)
  double inner_product_fidelity = 0.0;  // explicit overlap of the listed kets
  double discrepancy = 0.0;
  std::optional<std::string> diagnostic;  // set whenever the two routes disagree beyond 1e-9
};

inline TreeFidelityReport tree_fidelity_closed_form(ReflectionCoeff rc) {
  TreeFidelityReport rep;
  rep.r = rc.value();
  const double r2 = std::norm(rep.r);
  cplx rp = 1.0;
  double np = 1.0;
  for (double c : kTreePolynomial) {
    rep.numerator_poly_value += c * rp;
    rep.n_r += c * np;
    rp *= rep.r;
    np *= r2;
  }
  rep.fidelity = std::norm(rep.numerator_poly_value) / (128.0 * rep.n_r);

  const auto a = QubitId::ancilla();
  const std::array<QubitId, 3> left{QubitId::photon(1), QubitId::photon(5), QubitId::photon(2)};
  const std::array<QubitId, 3> right{QubitId::photon(3), QubitId::photon(6), QubitId::photon(4)};
  auto tree_ket = [&](ReflectionCoeff r) {
    std::vector<cplx> amps;
    for (int b : {0, 1}) {
      const auto part = kron(closed_form_tree_state(r, b, left), closed_form_tree_state(r, b, right));
      amps.insert(amps.end(), part.amplitudes().begin(), part.amplitudes().end());
    }
    std::vector<QubitId> labels{a, left[0], left[1], left[2], right[0], right[1], right[2]};
    return StateVector::from_amplitudes(std::move(labels), std::move(amps));
  };
  rep.inner_product_fidelity = fidelity(tree_ket(ReflectionCoeff::ideal()), tree_ket(rc));
  rep.discrepancy = std::abs(rep.fidelity - rep.inner_product_fidelity);
  if (rep.discrepancy > 1e-9) {
    std::ostringstream os;
    os.precision(12);
    os << "printed polynomial gives F=" << rep.fidelity << " but the overlap of the listed states gives F="
       << rep.inner_product_fidelity << " at r=" << rep.r;
    rep.diagnostic = os.str();
  }
  return rep;
}

// Register order a, 7, 1, 5, 2, 3, 6, 4. Both chains and the CZ stage
// post-select ancilla outcome 0.
inline ProtocolScript script_tree7(ReflectionCoeff r_path1, ReflectionCoeff r_path2) {
  const auto a = QubitId::ancilla();
  auto p = [](int k) { return QubitId::photon(k); };
  ProtocolScript s{{a, p(7), p(1), p(5), p(2), p(3), p(6), p(4)}, {}};
  append_chain(s, a, {p(1), p(5), p(2)}, r_path1.value());
  append_chain(s, a, {p(3), p(6), p(4)}, r_path1.value());
  s.ops.push_back({OpKind::H, a, std::nullopt, 1.0});
  s.ops.push_back({OpKind::CZ, p(5), a, r_path2.value()});
  s.ops.push_back({OpKind::CZ, p(6), a, r_path2.value()});
  s.ops.push_back({OpKind::E, p(7), a, r_path1.value()});
  return s;
}

// Seven photons in order 7,1,5,2,3,6,4, ancilla consumed, normalized.
inline StateVector build_tree7(ReflectionCoeff r_path1, ReflectionCoeff r_path2) {
  auto run = run_dense(script_tree7(r_path1, r_path2));
  return normalized(drop_qubit(run.state, QubitId::ancilla()));
}

inline double tree_fidelity_simulated(ReflectionCoeff r_path1, ReflectionCoeff r_path2) {
  return fidelity(ideal_cluster_state(tree7_graph()), build_tree7(r_path1, r_path2));
}

// For i = 1..nodes: H_a, CZ_{a,i}, CNOT_{a,i+N}; the CNOT is skipped where
// i+N runs past the last photon.
inline ProtocolScript script_2d(int width_n, int nodes, ReflectionCoeff r) {
  require(width_n >= 1, "width must be >= 1");
  require(nodes >= width_n, "nodes must be >= width");
  const auto a = QubitId::ancilla();
  ProtocolScript s;
  s.qubits.push_back(a);
  for (int i = 1; i <= nodes; ++i) s.qubits.push_back(QubitId::photon(i));
  for (int i = 1; i <= nodes; ++i) {
    s.ops.push_back({OpKind::H, a, std::nullopt, 1.0});
    s.ops.push_back({OpKind::CZ, QubitId::photon(i), a, r.value()});
    if (i + width_n <= nodes) s.ops.push_back({OpKind::CNOT, QubitId::photon(i + width_n), a, r.value()});
  }
  return s;
}

inline StateVector build_2d(int width_n, int nodes, ReflectionCoeff r) {
  require(nodes + 1 <= kMaxDenseQubits,
          "register too large for the dense path (" + std::to_string(nodes + 1) +
              " qubits); run the script on the tableau path");
  return run_dense(script_2d(width_n, nodes, r)).state;
}

inline double fidelity_2d_scaling(double per_photon_fidelity, int n_photons) {
  require(per_photon_fidelity >= 0.0 && per_photon_fidelity <= 1.0, "per-photon fidelity must lie in [0, 1]");
  require(n_photons >= 0, "photon count must be >= 0");
  return std::pow(per_photon_fidelity, n_photons);
}

}  // namespace qmsim

#endif  // QMSIM_PROTOCOLS_HPP_
