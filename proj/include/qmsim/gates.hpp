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
gates.hpp - Metasurface gate models. The ancilla (|g> = |0>, |r> = |1>) controls
whether the array reflects; every reflection event carries the complex
reflection coefficient r, and the lost amplitude is simply dropped
(post-selected, unnormalized kets).
*/
#ifndef QMSIM_GATES_HPP_
#define QMSIM_GATES_HPP_

#include <array>
#include <cmath>
#include <complex>

#include "qmsim/state.hpp"

namespace qmsim {

class ReflectionCoeff {
 public:
  ReflectionCoeff(cplx r) : r_(r) {  // NOLINT(google-explicit-constructor)
    require(std::isfinite(r.real()) && std::isfinite(r.imag()), "reflection coefficient must be finite");
    require(std::abs(r) <= 1.0 + 1e-9, "|r| must be <= 1, got " + std::to_string(std::abs(r)));
  }
  ReflectionCoeff(double r) : ReflectionCoeff(cplx(r, 0.0)) {}  // NOLINT(google-explicit-constructor)

  static ReflectionCoeff ideal() { return ReflectionCoeff(1.0); }

  cplx value() const { return r_; }
  bool is_ideal() const { return r_ == cplx(1.0, 0.0); }

 private:
  cplx r_;
};

// Identity on the ground branch, r X on the photon in the Rydberg branch.
inline StateVector noisy_cnot(StateVector state, ReflectionCoeff r, QubitId ancilla, QubitId photon) {
  return apply_ctrl2(std::move(state), ancilla, photon, mat::identity(),
                     mat::scaled(mat::pauli_x(), r.value()));
}

// Identity on the ground branch, diag(1, -r) on the photon in the Rydberg branch.
inline StateVector noisy_cz(StateVector state, ReflectionCoeff r, QubitId ancilla, QubitId photon) {
  return apply_ctrl2(std::move(state), ancilla, photon, mat::identity(), mat::diag(1.0, -r.value()));
}

// Driven by control fields, never by scattering, so always ideal.
inline StateVector hadamard_ancilla(StateVector state, QubitId ancilla) {
  return apply_1q(std::move(state), ancilla, mat::hadamard());
}

// Coherently moves Rydberg-branch amplitude onto the ground branch with the
// same photonic configuration (pi pulse to |e>, decay to |g>).
inline StateVector relabel_to_ground(StateVector state, QubitId ancilla) {
  const std::size_t bit = state.mask(ancilla);
  auto amps = state.mutable_amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (!(i & bit)) continue;
    amps[i & ~bit] += amps[i];
    amps[i] = 0.0;
  }
  state.check_nonzero();
  return state;
}

// Inheritance gate: noisy CNOT followed by the decay relabel.
inline StateVector e_gate(StateVector state, ReflectionCoeff r, QubitId ancilla, QubitId photon) {
  return relabel_to_ground(noisy_cnot(std::move(state), r, ancilla, photon), ancilla);
}

// Mean state fidelity of CZ after CNOT (same ancilla/photon pair) against the
// r = 1 gates, over inputs (|g> +- |r>)/sqrt(2) (x) {|0>, |1>}.
inline double gate_fidelity_path2(ReflectionCoeff r) {
  const auto a = QubitId::ancilla();
  const auto p = QubitId::photon(1);
  const double h = 1.0 / std::sqrt(2.0);
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    for (int photon_bit : {0, 1}) {
      std::vector<cplx> amps(4, 0.0);
      amps[photon_bit] = h;
      amps[2 | photon_bit] = sign * h;
      const auto input = StateVector::from_amplitudes({a, p}, amps);
      const auto ideal = noisy_cz(noisy_cnot(input, ReflectionCoeff::ideal(), a, p), ReflectionCoeff::ideal(), a, p);
      const auto noisy = noisy_cz(noisy_cnot(input, r, a, p), r, a, p);
      total += fidelity(ideal, noisy);
    }
  }
  return total / 4.0;
}

}  // namespace qmsim

#endif  // QMSIM_GATES_HPP_
