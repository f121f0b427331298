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
state.hpp - Dense state vectors over a labelled ancilla + photon register.

Qubit order is declaration order and the first declared qubit is the most
significant bit of the basis index, so |a p1 p2 p3> reads left to right.
Operators may be non-unitary; nothing here renormalizes implicitly.
*/
#ifndef QMSIM_STATE_HPP_
#define QMSIM_STATE_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qmsim/error.hpp"

namespace qmsim {

using cplx = std::complex<double>;

inline constexpr int kMaxDenseQubits = 22;

class QubitId {
 public:
  enum class Role : std::uint8_t { Ancilla, Photon };

  static constexpr QubitId ancilla() { return QubitId(Role::Ancilla, 0); }
  static QubitId photon(int k) {
    require(k >= 1, "photon index must be >= 1, got " + std::to_string(k));
    return QubitId(Role::Photon, k);
  }

  // Accepts "a" / "ancilla" and "p<k>" / "photon<k>".
  static QubitId parse(std::string_view text) {
    if (text == "a" || text == "ancilla") return ancilla();
    std::string_view digits;
    if (text.starts_with("photon"))
      digits = text.substr(6);
    else if (text.starts_with("p"))
      digits = text.substr(1);
    require(!digits.empty() &&
                std::all_of(digits.begin(), digits.end(),
                            [](char c) { return c >= '0' && c <= '9'; }),
            "unrecognised qubit label '" + std::string(text) + "'");
    return photon(std::stoi(std::string(digits)));
  }

  constexpr Role role() const { return role_; }
  constexpr int index() const { return index_; }
  constexpr bool is_ancilla() const { return role_ == Role::Ancilla; }
  std::string label() const { return is_ancilla() ? "a" : "p" + std::to_string(index_); }

  constexpr auto operator<=>(const QubitId&) const = default;

 private:
  constexpr QubitId(Role role, int index) : role_(role), index_(index) {}
  Role role_;
  int index_;
};

struct QubitHash {
  std::size_t operator()(const QubitId& q) const noexcept {
    return std::hash<int>()(q.is_ancilla() ? -1 : q.index());
  }
};

// Row-major 2x2 operator {m00, m01, m10, m11}.
using Mat2 = std::array<cplx, 4>;

namespace mat {
inline Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
inline Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline Mat2 pauli_y() { return {0.0, cplx(0, -1), cplx(0, 1), 0.0}; }
inline Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }
inline Mat2 phase_s() { return {1.0, 0.0, 0.0, cplx(0, 1)}; }
inline Mat2 hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h, h, -h};
}
inline Mat2 diag(cplx d0, cplx d1) { return {d0, 0.0, 0.0, d1}; }
inline Mat2 scaled(Mat2 m, cplx c) {
  for (auto& v : m) v *= c;
  return m;
}
inline Mat2 product(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
}  // namespace mat

enum class Pauli : std::uint8_t { X, Y, Z };

// Identity on every qubit not present in the map.
using PauliString = std::map<QubitId, Pauli>;

inline char pauli_char(Pauli p) { return p == Pauli::X ? 'X' : p == Pauli::Y ? 'Y' : 'Z'; }

inline std::string to_string(const PauliString& p) {
  if (p.empty()) return "I";
  std::string out;
  for (const auto& [q, op] : p) {
    if (!out.empty()) out += ' ';
    out += pauli_char(op);
    out += '_';
    out += q.label();
  }
  return out;
}

class StateVector {
 public:
  // All-|0> product state.
  static StateVector zeros(std::vector<QubitId> qubits) {
    check_register(qubits);
    std::vector<cplx> amps(std::size_t{1} << qubits.size(), 0.0);
    amps[0] = 1.0;
    return StateVector(std::move(qubits), std::move(amps));
  }

  static StateVector from_amplitudes(std::vector<QubitId> qubits, std::vector<cplx> amps) {
    check_register(qubits);
    require(amps.size() == (std::size_t{1} << qubits.size()),
            "amplitude count " + std::to_string(amps.size()) + " does not match " +
                std::to_string(qubits.size()) + " qubits");
    StateVector s(std::move(qubits), std::move(amps));
    s.check_nonzero();
    return s;
  }

  int qubit_count() const { return static_cast<int>(labels_.size()); }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<QubitId>& labels() const { return labels_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> mutable_amplitudes() { return amps_; }
  cplx amplitude(std::size_t basis) const { return amps_.at(basis); }

  bool contains(QubitId q) const {
    return std::find(labels_.begin(), labels_.end(), q) != labels_.end();
  }
  std::size_t position(QubitId q) const {
    auto it = std::find(labels_.begin(), labels_.end(), q);
    require(it != labels_.end(), "qubit " + q.label() + " not in register");
    return static_cast<std::size_t>(it - labels_.begin());
  }
  // Bit mask of q within a basis index.
  std::size_t mask(QubitId q) const {
    return std::size_t{1} << (labels_.size() - 1 - position(q));
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  // Zero-norm states are not representable; operations that annihilate a
  // state report it here.
  void check_nonzero() const {
    if (!(squared_norm() > 1e-300)) throw InvalidInput("state has zero norm");
  }

  static void check_register(const std::vector<QubitId>& qubits) {
    require(!qubits.empty(), "register must contain at least one qubit");
    require(static_cast<int>(qubits.size()) <= kMaxDenseQubits,
            "register too large: " + std::to_string(qubits.size()) + " qubits exceeds the dense cap of " +
                std::to_string(kMaxDenseQubits));
    int ancillas = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      if (qubits[i].is_ancilla()) ++ancillas;
      for (std::size_t j = i + 1; j < qubits.size(); ++j)
        require(qubits[i] != qubits[j], "duplicate qubit " + qubits[i].label() + " in register");
    }
    require(ancillas <= 1, "register may hold at most one ancilla");
  }

 private:
  StateVector(std::vector<QubitId> labels, std::vector<cplx> amps)
      : labels_(std::move(labels)), amps_(std::move(amps)) {}

  std::vector<QubitId> labels_;
  std::vector<cplx> amps_;
};

inline StateVector new_register(std::vector<QubitId> qubits) {
  return StateVector::zeros(std::move(qubits));
}

inline StateVector apply_1q(StateVector state, QubitId q, const Mat2& m) {
  const std::size_t bit = state.mask(q);
  auto amps = state.mutable_amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & bit) continue;
    const cplx a0 = amps[i];
    const cplx a1 = amps[i | bit];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[i | bit] = m[2] * a0 + m[3] * a1;
  }
  return state;
}

// Control-block-diagonal operator |0><0| (x) m0 + |1><1| (x) m1.
inline StateVector apply_ctrl2(StateVector state, QubitId control, QubitId target, const Mat2& m0,
                               const Mat2& m1) {
  require(control != target, "control and target must differ (" + control.label() + ")");
  const std::size_t cbit = state.mask(control);
  const std::size_t tbit = state.mask(target);
  auto amps = state.mutable_amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i & tbit) continue;
    const Mat2& m = (i & cbit) ? m1 : m0;
    const cplx a0 = amps[i];
    const cplx a1 = amps[i | tbit];
    amps[i] = m[0] * a0 + m[1] * a1;
    amps[i | tbit] = m[2] * a0 + m[3] * a1;
  }
  state.check_nonzero();
  return state;
}

struct Projection {
  StateVector state;   // renormalized, full register
  double probability;  // squared norm of the projected branch (sums to the input's squared norm)
};

inline Projection project(const StateVector& state, QubitId q, int outcome) {
  require(outcome == 0 || outcome == 1, "measurement outcome must be 0 or 1");
  const double total = state.squared_norm();
  require(total > 0.0, "cannot measure a zero-norm state");
  const std::size_t bit = state.mask(q);
  std::vector<cplx> amps(state.amplitudes().begin(), state.amplitudes().end());
  double kept = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (static_cast<bool>(i & bit) != static_cast<bool>(outcome))
      amps[i] = 0.0;
    else
      kept += std::norm(amps[i]);
  }
  if (kept / total < 1e-15)
    throw InvalidInput("impossible outcome " + std::to_string(outcome) + " on " + q.label());
  const double scale = 1.0 / std::sqrt(kept);
  for (auto& a : amps) a *= scale;
  return {StateVector::from_amplitudes(state.labels(), std::move(amps)), kept};
}

inline void require_same_register(const StateVector& a, const StateVector& b) {
  require(a.labels() == b.labels(), "register mismatch between states");
}

// <a|b>
inline cplx inner(const StateVector& a, const StateVector& b) {
  require_same_register(a, b);
  cplx s = 0.0;
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

// Global-phase-invariant |<a|b>|^2 / (|a|^2 |b|^2).
inline double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(inner(a, b)) / (a.squared_norm() * b.squared_norm());
}

inline StateVector normalized(StateVector s) {
  const double n = std::sqrt(s.squared_norm());
  for (auto& a : s.mutable_amplitudes()) a /= n;
  return s;
}

inline double expect_pauli(const StateVector& state, const PauliString& p) {
  const double n2 = state.squared_norm();
  require(std::abs(n2 - 1.0) <= 1e-9,
          "expect_pauli needs a normalized state (squared norm " + std::to_string(n2) + ")");
  std::size_t xmask = 0, zmask = 0;
  int y_count = 0;
  for (const auto& [q, op] : p) {
    const std::size_t bit = state.mask(q);
    if (op != Pauli::Z) xmask |= bit;
    if (op != Pauli::X) zmask |= bit;
    if (op == Pauli::Y) ++y_count;
  }
  // P|x> = i^{#Y} (-1)^{popcount(x & zmask)} |x ^ xmask>
  static const cplx kIPow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  const cplx global = kIPow[y_count % 4];
  const auto amps = state.amplitudes();
  cplx s = 0.0;
  for (std::size_t x = 0; x < amps.size(); ++x) {
    if (amps[x] == 0.0) continue;
    const double sign = (std::popcount(x & zmask) & 1) ? -1.0 : 1.0;
    s += std::conj(amps[x ^ xmask]) * sign * amps[x];
  }
  return (global * s).real();
}

// Tensor product with a's qubits first.
inline StateVector kron(const StateVector& a, const StateVector& b) {
  std::vector<QubitId> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  StateVector::check_register(labels);
  std::vector<cplx> amps;
  amps.reserve(a.dimension() * b.dimension());
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) amps.push_back(x * y);
  return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

// Same state expressed in a different qubit order.
inline StateVector reorder(const StateVector& s, const std::vector<QubitId>& order) {
  require(order.size() == s.labels().size(), "reorder needs a permutation of the register");
  const int n = s.qubit_count();
  std::vector<std::size_t> src_bit(n);
  for (int i = 0; i < n; ++i) src_bit[i] = s.mask(order[i]);
  std::vector<QubitId> check = order;
  StateVector::check_register(check);
  std::vector<cplx> amps(s.dimension());
  for (std::size_t y = 0; y < amps.size(); ++y) {
    std::size_t x = 0;
    for (int i = 0; i < n; ++i)
      if (y & (std::size_t{1} << (n - 1 - i))) x |= src_bit[i];
    amps[y] = s.amplitude(x);
  }
  return StateVector::from_amplitudes(order, std::move(amps));
}

// Removes a qubit that is in a definite computational basis state.
inline StateVector drop_qubit(const StateVector& s, QubitId q) {
  require(s.qubit_count() > 1, "cannot drop the last qubit");
  const std::size_t bit = s.mask(q);
  double w[2] = {0.0, 0.0};
  for (std::size_t i = 0; i < s.dimension(); ++i) w[(i & bit) ? 1 : 0] += std::norm(s.amplitude(i));
  const int keep = w[1] > w[0] ? 1 : 0;
  require(w[1 - keep] <= 1e-24 * (w[0] + w[1]),
          "qubit " + q.label() + " is not in a computational basis state");
  const std::size_t low = bit - 1;
  std::vector<cplx> amps;
  amps.reserve(s.dimension() / 2);
  for (std::size_t y = 0; y < s.dimension() / 2; ++y) {
    const std::size_t x = ((y & ~low) << 1) | (y & low) | (keep ? bit : 0);
    amps.push_back(s.amplitude(x));
  }
  std::vector<QubitId> labels = s.labels();
  labels.erase(labels.begin() + static_cast<std::ptrdiff_t>(s.position(q)));
  return StateVector::from_amplitudes(std::move(labels), std::move(amps));
}

}  // namespace qmsim

#endif  // QMSIM_STATE_HPP_
