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
script.hpp - Protocol scripts: a register declaration plus an ordered list of
gate and measurement records, executable on the dense engine.
*/
#ifndef QMSIM_SCRIPT_HPP_
#define QMSIM_SCRIPT_HPP_

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "qmsim/gates.hpp"
#include "qmsim/state.hpp"

namespace qmsim {

enum class OpKind { H, X, Z, S, CNOT, CZ, E, Measure };

inline std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::H: return "h";
    case OpKind::X: return "x";
    case OpKind::Z: return "z";
    case OpKind::S: return "s";
    case OpKind::CNOT: return "cnot";
    case OpKind::CZ: return "cz";
    case OpKind::E: return "e";
    case OpKind::Measure: return "measure";
  }
  return "?";
}

inline OpKind parse_op_kind(const std::string& s) {
  for (OpKind k : {OpKind::H, OpKind::X, OpKind::Z, OpKind::S, OpKind::CNOT, OpKind::CZ, OpKind::E,
                   OpKind::Measure})
    if (to_string(k) == s) return k;
  throw InvalidInput("unknown gate kind '" + s + "'");
}

inline bool is_two_qubit(OpKind k) { return k == OpKind::CNOT || k == OpKind::CZ || k == OpKind::E; }

struct ScriptOp {
  OpKind kind;
  QubitId target;
  std::optional<QubitId> control;  // two-qubit kinds only
  cplx r = 1.0;                    // reflection coefficient, two-qubit kinds only

  std::string describe() const {
    std::string s = to_string(kind);
    if (control) s += "(" + control->label() + "," + target.label() + ")";
    else s += "(" + target.label() + ")";
    return s;
  }
};

struct ProtocolScript {
  std::vector<QubitId> qubits;
  std::vector<ScriptOp> ops;

  void validate() const {
    require(!qubits.empty(), "script declares no qubits");
    int ancillas = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      if (qubits[i].is_ancilla()) ++ancillas;
      for (std::size_t j = i + 1; j < qubits.size(); ++j)
        require(qubits[i] != qubits[j], "duplicate qubit " + qubits[i].label() + " in script");
    }
    require(ancillas <= 1, "script declares more than one ancilla");
    auto declared = [&](QubitId q) {
      return std::find(qubits.begin(), qubits.end(), q) != qubits.end();
    };
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const auto& op = ops[i];
      const std::string where = "op " + std::to_string(i) + " (" + op.describe() + ")";
      require(declared(op.target), where + ": undeclared qubit " + op.target.label());
      if (is_two_qubit(op.kind)) {
        require(op.control.has_value(), where + ": missing control");
        require(declared(*op.control), where + ": undeclared qubit " + op.control->label());
        require(op.control->is_ancilla(), where + ": control must be the ancilla");
        require(*op.control != op.target, where + ": control equals target");
        ReflectionCoeff check(op.r);
      } else {
        require(!op.control.has_value(), where + ": single-qubit op has a control");
      }
    }
  }

  bool all_ideal() const {
    return std::all_of(ops.begin(), ops.end(), [](const ScriptOp& op) { return op.r == cplx(1.0); });
  }
};

struct DenseRun {
  StateVector state;
  std::vector<int> outcomes;          // one per measurement, in script order
  std::vector<double> probabilities;  // matching outcome probabilities
};

inline StateVector apply_op(StateVector s, const ScriptOp& op) {
  switch (op.kind) {
    case OpKind::H: return apply_1q(std::move(s), op.target, mat::hadamard());
    case OpKind::X: return apply_1q(std::move(s), op.target, mat::pauli_x());
    case OpKind::Z: return apply_1q(std::move(s), op.target, mat::pauli_z());
    case OpKind::S: return apply_1q(std::move(s), op.target, mat::phase_s());
    case OpKind::CNOT: return noisy_cnot(std::move(s), op.r, *op.control, op.target);
    case OpKind::CZ: return noisy_cz(std::move(s), op.r, *op.control, op.target);
    case OpKind::E: return e_gate(std::move(s), op.r, *op.control, op.target);
    case OpKind::Measure: break;
  }
  throw InvalidInput("apply_op cannot execute " + op.describe());
}

// Measurements take outcome 0 whenever it is possible, otherwise 1.
inline DenseRun run_dense(const ProtocolScript& script) {
  script.validate();
  DenseRun run{StateVector::zeros(script.qubits), {}, {}};
  for (const auto& op : script.ops) {
    if (op.kind != OpKind::Measure) {
      run.state = apply_op(std::move(run.state), op);
      continue;
    }
    const std::size_t bit = run.state.mask(op.target);
    double w0 = 0.0, total = 0.0;
    const auto amps = run.state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
      total += std::norm(amps[i]);
      if (!(i & bit)) w0 += std::norm(amps[i]);
    }
    const int outcome = (w0 / total >= 1e-15) ? 0 : 1;
    auto proj = project(run.state, op.target, outcome);
    run.state = std::move(proj.state);
    run.outcomes.push_back(outcome);
    run.probabilities.push_back(proj.probability);
  }
  return run;
}

}  // namespace qmsim

#endif  // QMSIM_SCRIPT_HPP_
