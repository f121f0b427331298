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
tableau.hpp - Bit-packed stabilizer tableau (destabilizer rows 0..n-1,
stabilizer rows n..2n-1, one scratch row) for ideal Clifford scripts at
sizes far beyond the dense engine.
*/
#ifndef QMSIM_TABLEAU_HPP_
#define QMSIM_TABLEAU_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmsim/graph.hpp"
#include "qmsim/script.hpp"

namespace qmsim {

struct MeasureResult {
  int outcome;
  bool deterministic;
};

struct InducedGraph {
  ClusterGraph graph;
  // Local Cliffords (h, s, z) that map the state onto the graph state.
  std::vector<ScriptOp> local_ops;
};

class StabilizerTableau {
 public:
  explicit StabilizerTableau(std::vector<QubitId> qubits)
      : labels_(std::move(qubits)),
        n_(labels_.size()),
        words_((n_ + 63) / 64),
        x_((2 * n_ + 1) * words_, 0),
        z_((2 * n_ + 1) * words_, 0),
        r_(2 * n_ + 1, 0) {
    require(n_ > 0, "tableau needs at least one qubit");
    for (std::size_t i = 0; i < n_; ++i) {
      require(index_.emplace(labels_[i], i).second, "duplicate qubit " + labels_[i].label());
      set(x_, i, i, true);       // destabilizer X_i
      set(z_, n_ + i, i, true);  // stabilizer Z_i
    }
  }

  std::size_t qubit_count() const { return n_; }
  const std::vector<QubitId>& labels() const { return labels_; }
  const std::vector<int>& measurement_outcomes() const { return outcomes_; }

  std::size_t index(QubitId q) const {
    auto it = index_.find(q);
    require(it != index_.end(), "qubit " + q.label() + " not in tableau");
    return it->second;
  }

  void h(QubitId q) { h(index(q)); }
  void s(QubitId q) { s(index(q)); }
  void x(QubitId q) {
    const std::size_t a = index(q);
    for (std::size_t i = 0; i < 2 * n_; ++i) r_[i] ^= get(z_, i, a);
  }
  void z(QubitId q) {
    const std::size_t a = index(q);
    for (std::size_t i = 0; i < 2 * n_; ++i) r_[i] ^= get(x_, i, a);
  }
  void cnot(QubitId c, QubitId t) { cnot(index(c), index(t)); }
  void cz(QubitId c, QubitId t) {
    const std::size_t b = index(t);
    h(b);
    cnot(index(c), b);
    h(b);
  }

  // Z-basis measurement. Random outcomes are forced to `preferred`.
  MeasureResult measure(QubitId q, int preferred = 0) {
    require(preferred == 0 || preferred == 1, "measurement outcome must be 0 or 1");
    const std::size_t a = index(q);
    std::size_t p = 2 * n_;
    for (std::size_t i = n_; i < 2 * n_; ++i)
      if (get(x_, i, a)) {
        p = i;
        break;
      }
    if (p < 2 * n_) {
      for (std::size_t i = 0; i < 2 * n_; ++i)
        if (i != p && get(x_, i, a)) rowsum(i, p);
      copy_row(p - n_, p);
      clear_row(p);
      set(z_, p, a, true);
      r_[p] = static_cast<std::uint8_t>(preferred);
      outcomes_.push_back(preferred);
      return {preferred, false};
    }
    const std::size_t scratch = 2 * n_;
    clear_row(scratch);
    for (std::size_t i = 0; i < n_; ++i)
      if (get(x_, i, a)) rowsum(scratch, i + n_);
    const int outcome = r_[scratch];
    outcomes_.push_back(outcome);
    return {outcome, true};
  }

  // +1 / -1 if +-P is in the stabilizer group, nullopt otherwise.
  std::optional<int> stabilizer_sign(const PauliString& p) const {
    std::vector<std::uint64_t> px(words_, 0), pz(words_, 0);
    for (const auto& [q, op] : p) {
      const std::size_t a = index(q);
      if (op != Pauli::Z) px[a / 64] |= bit(a);
      if (op != Pauli::X) pz[a / 64] |= bit(a);
    }
    auto anticommutes = [&](std::size_t row) {
      int parity = 0;
      for (std::size_t w = 0; w < words_; ++w)
        parity ^= std::popcount((px[w] & zw(row, w)) ^ (pz[w] & xw(row, w))) & 1;
      return parity != 0;
    };
    for (std::size_t i = n_; i < 2 * n_; ++i)
      if (anticommutes(i)) return std::nullopt;
    StabilizerTableau acc = *this;
    const std::size_t scratch = 2 * n_;
    acc.clear_row(scratch);
    for (std::size_t i = 0; i < n_; ++i)
      if (anticommutes(i)) acc.rowsum(scratch, i + n_);
    for (std::size_t w = 0; w < words_; ++w)
      if (acc.xw(scratch, w) != px[w] || acc.zw(scratch, w) != pz[w]) return std::nullopt;
    return acc.r_[scratch] ? -1 : +1;
  }

  bool is_stabilizer(const PauliString& p) const { return stabilizer_sign(p) == 1; }

  // Stabilizer generator i as (sign, Pauli string).
  std::pair<int, PauliString> generator(std::size_t i) const {
    require(i < n_, "generator index out of range");
    PauliString p;
    for (std::size_t a = 0; a < n_; ++a) {
      const bool xb = get(x_, n_ + i, a), zb = get(z_, n_ + i, a);
      if (xb && zb) p[labels_[a]] = Pauli::Y;
      else if (xb) p[labels_[a]] = Pauli::X;
      else if (zb) p[labels_[a]] = Pauli::Z;
    }
    return {r_[n_ + i] ? -1 : +1, std::move(p)};
  }

  // Dense "+XZ_Y" form over register order.
  std::string generator_string(std::size_t i) const {
    require(i < n_, "generator index out of range");
    std::string s(1, r_[n_ + i] ? '-' : '+');
    for (std::size_t a = 0; a < n_; ++a) {
      const bool xb = get(x_, n_ + i, a), zb = get(z_, n_ + i, a);
      s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : '_');
    }
    return s;
  }

  bool generators_commute() const {
    for (std::size_t i = n_; i < 2 * n_; ++i)
      for (std::size_t j = i + 1; j < 2 * n_; ++j)
        if (!rows_commute(i, j)) return false;
    return true;
  }

  // Rank of the stabilizer rows as binary symplectic vectors.
  std::size_t symplectic_rank() const {
    std::vector<std::vector<std::uint64_t>> rows;
    for (std::size_t i = n_; i < 2 * n_; ++i) {
      std::vector<std::uint64_t> v(2 * words_);
      for (std::size_t w = 0; w < words_; ++w) {
        v[w] = xw(i, w);
        v[words_ + w] = zw(i, w);
      }
      rows.push_back(std::move(v));
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * words_ * 64 && rank < rows.size(); ++col) {
      const std::size_t w = col / 64;
      const std::uint64_t b = bit(col % 64);
      std::size_t piv = rank;
      while (piv < rows.size() && !(rows[piv][w] & b)) ++piv;
      if (piv == rows.size()) continue;
      std::swap(rows[piv], rows[rank]);
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (i != rank && (rows[i][w] & b))
          for (std::size_t k = 0; k < rows[i].size(); ++k) rows[i][k] ^= rows[rank][k];
      ++rank;
    }
    return rank;
  }

  // Local-Clifford reduction to graph form. Row reduce the X block, apply H
  // on its non-pivot columns (the X block is then invertible), reduce to
  // X = I, clear Y diagonals with S and negative signs with Z.
  InducedGraph induced_graph() const {
    StabilizerTableau t = *this;
    InducedGraph out;
    auto row = [&](std::size_t i) { return t.n_ + i; };

    std::vector<bool> pivot_col(n_, false);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < n_ && rank < n_; ++col) {
      std::size_t piv = rank;
      while (piv < n_ && !t.get(t.x_, row(piv), col)) ++piv;
      if (piv == n_) continue;
      t.swap_rows(row(piv), row(rank));
      for (std::size_t i = 0; i < n_; ++i)
        if (i != rank && t.get(t.x_, row(i), col)) t.rowsum(row(i), row(rank));
      pivot_col[col] = true;
      ++rank;
    }
    for (std::size_t col = 0; col < n_; ++col) {
      if (pivot_col[col]) continue;
      t.h(col);
      out.local_ops.push_back({OpKind::H, labels_[col], std::nullopt, 1.0});
    }
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t piv = col;
      while (piv < n_ && !t.get(t.x_, row(piv), col)) ++piv;
      if (piv == n_) throw NumericalFailure("graph-form reduction: X block is singular");
      t.swap_rows(row(piv), row(col));
      for (std::size_t i = 0; i < n_; ++i)
        if (i != col && t.get(t.x_, row(i), col)) t.rowsum(row(i), row(col));
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (t.get(t.z_, row(i), i)) {
        t.s(i);
        out.local_ops.push_back({OpKind::S, labels_[i], std::nullopt, 1.0});
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (t.r_[row(i)]) {
        t.zq(i);
        out.local_ops.push_back({OpKind::Z, labels_[i], std::nullopt, 1.0});
      }
    }
    out.graph = ClusterGraph(labels_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j) {
        const bool a = t.get(t.z_, row(i), j), b = t.get(t.z_, row(j), i);
        if (a != b) throw NumericalFailure("graph-form reduction produced an asymmetric adjacency");
        if (a) out.graph.add_edge(labels_[i], labels_[j]);
      }
    return out;
  }

 private:
  static constexpr std::uint64_t bit(std::size_t a) { return std::uint64_t{1} << (a % 64); }
  bool get(const std::vector<std::uint64_t>& m, std::size_t row, std::size_t a) const {
    return (m[row * words_ + a / 64] >> (a % 64)) & 1U;
  }
  void set(std::vector<std::uint64_t>& m, std::size_t row, std::size_t a, bool v) {
    auto& w = m[row * words_ + a / 64];
    if (v) w |= bit(a);
    else w &= ~bit(a);
  }
  std::uint64_t xw(std::size_t row, std::size_t w) const { return x_[row * words_ + w]; }
  std::uint64_t zw(std::size_t row, std::size_t w) const { return z_[row * words_ + w]; }

  void h(std::size_t a) {
    for (std::size_t i = 0; i < 2 * n_; ++i) {
      const bool xb = get(x_, i, a), zb = get(z_, i, a);
      r_[i] ^= static_cast<std::uint8_t>(xb && zb);
      set(x_, i, a, zb);
      set(z_, i, a, xb);
    }
  }
  void s(std::size_t a) {
    for (std::size_t i = 0; i < 2 * n_; ++i) {
      const bool xb = get(x_, i, a), zb = get(z_, i, a);
      r_[i] ^= static_cast<std::uint8_t>(xb && zb);
      set(z_, i, a, zb ^ xb);
    }
  }
  void zq(std::size_t a) {
    for (std::size_t i = 0; i < 2 * n_; ++i) r_[i] ^= get(x_, i, a);
  }
  void cnot(std::size_t c, std::size_t t) {
    require(c != t, "control and target must differ");
    for (std::size_t i = 0; i < 2 * n_; ++i) {
      const bool xc = get(x_, i, c), zc = get(z_, i, c), xt = get(x_, i, t), zt = get(z_, i, t);
      r_[i] ^= static_cast<std::uint8_t>(xc && zt && (xt == zc));
      set(x_, i, t, xt ^ xc);
      set(z_, i, c, zc ^ zt);
    }
  }

  bool rows_commute(std::size_t i, std::size_t j) const {
    int parity = 0;
    for (std::size_t w = 0; w < words_; ++w)
      parity ^= std::popcount((xw(i, w) & zw(j, w)) ^ (zw(i, w) & xw(j, w))) & 1;
    return parity == 0;
  }

  // row h <- row i * row h, with the phase tracked mod 4.
  void rowsum(std::size_t h, std::size_t i) {
    int phase = 2 * r_[h] + 2 * r_[i];
    for (std::size_t w = 0; w < words_; ++w) {
      const std::uint64_t x1 = xw(i, w), z1 = zw(i, w), x2 = xw(h, w), z2 = zw(h, w);
      const std::uint64_t plus = (x1 & z1 & ~x2 & z2) | (x1 & ~z1 & x2 & z2) | (~x1 & z1 & x2 & ~z2);
      const std::uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & ~x2 & z2) | (~x1 & z1 & x2 & z2);
      phase += std::popcount(plus) - std::popcount(minus);
      x_[h * words_ + w] = x1 ^ x2;
      z_[h * words_ + w] = z1 ^ z2;
    }
    phase = ((phase % 4) + 4) % 4;
    r_[h] = static_cast<std::uint8_t>(phase == 2);
  }
  void copy_row(std::size_t dst, std::size_t src) {
    std::copy_n(x_.begin() + src * words_, words_, x_.begin() + dst * words_);
    std::copy_n(z_.begin() + src * words_, words_, z_.begin() + dst * words_);
    r_[dst] = r_[src];
  }
  void clear_row(std::size_t row) {
    std::fill_n(x_.begin() + row * words_, words_, 0);
    std::fill_n(z_.begin() + row * words_, words_, 0);
    r_[row] = 0;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(x_.begin() + a * words_, x_.begin() + (a + 1) * words_, x_.begin() + b * words_);
    std::swap_ranges(z_.begin() + a * words_, z_.begin() + (a + 1) * words_, z_.begin() + b * words_);
    std::swap(r_[a], r_[b]);
  }

  std::vector<QubitId> labels_;
  std::unordered_map<QubitId, std::size_t, QubitHash> index_;
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> x_, z_;
  std::vector<std::uint8_t> r_;
  std::vector<int> outcomes_;
};

// Runs an ideal Clifford script. Measurements resolve deterministic outcomes
// and force 0 otherwise, matching run_dense.
inline StabilizerTableau tableau_run(const ProtocolScript& script) {
  script.validate();
  StabilizerTableau t(script.qubits);
  for (std::size_t i = 0; i < script.ops.size(); ++i) {
    const auto& op = script.ops[i];
    if (op.kind == OpKind::E)
      throw InvalidInput("op " + std::to_string(i) + " (" + op.describe() +
                         "): E gate is not a Clifford operation; use the dense path");
    if (op.r != cplx(1.0))
      throw InvalidInput("op " + std::to_string(i) + " (" + op.describe() +
                         "): tableau path needs r = 1, use the dense path for lossy gates");
    switch (op.kind) {
      case OpKind::H: t.h(op.target); break;
      case OpKind::X: t.x(op.target); break;
      case OpKind::Z: t.z(op.target); break;
      case OpKind::S: t.s(op.target); break;
      case OpKind::CNOT: t.cnot(*op.control, op.target); break;
      case OpKind::CZ: t.cz(*op.control, op.target); break;
      case OpKind::Measure: t.measure(op.target, 0); break;
      case OpKind::E: break;
    }
  }
  return t;
}

}  // namespace qmsim

#endif  // QMSIM_TABLEAU_HPP_
