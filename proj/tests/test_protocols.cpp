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

#include <cmath>

#include "qmsim/graph.hpp"
#include "qmsim/protocols.hpp"
#include "test_util.hpp"

namespace qmsim {
namespace {

using testing::A;
using testing::P;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// Signs of the two printed 3-photon chain states, index |p1 p2 p3>.
const std::array<int, 8> kOutcome0Signs{+1, +1, +1, -1, +1, +1, -1, +1};
const std::array<int, 8> kOutcome1Signs{+1, -1, +1, +1, +1, -1, -1, -1};

std::vector<cplx> signed_amplitudes(const std::array<int, 8>& signs) {
  std::vector<cplx> v;
  for (int s : signs) v.emplace_back(s / std::sqrt(8.0));
  return v;
}

// Product-basis kets built by hand: |x y z> with x, z in {0, 1, +, -}.
std::vector<cplx> ket3(char a, char b, char c) {
  auto one = [](char ch) -> std::array<cplx, 2> {
    switch (ch) {
      case '0': return {1.0, 0.0};
      case '1': return {0.0, 1.0};
      case '+': return {kInvSqrt2, kInvSqrt2};
      default: return {kInvSqrt2, -kInvSqrt2};
    }
  };
  const auto x = one(a), y = one(b), z = one(c);
  std::vector<cplx> v(8);
  for (int i = 0; i < 8; ++i) v[i] = x[(i >> 2) & 1] * y[(i >> 1) & 1] * z[i & 1];
  return v;
}

std::vector<cplx> add(std::vector<cplx> a, const std::vector<cplx>& b, cplx wb = 1.0) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += wb * b[i];
  return a;
}

TEST(BuildChain3, IdealOutcomeZeroMatchesPrinted) {
  const auto res = build_chain3(1.0);
  const auto want = signed_amplitudes(kOutcome0Signs);
  EXPECT_GT(testing::phase_free_fidelity(res.outcome[0].amplitudes(), want), 1.0 - 1e-12);
}

TEST(BuildChain3, IdealOutcomeOneMatchesPrinted) {
  const auto res = build_chain3(1.0);
  const auto want = signed_amplitudes(kOutcome1Signs);
  EXPECT_GT(testing::phase_free_fidelity(res.outcome[1].amplitudes(), want), 1.0 - 1e-12);
}

TEST(BuildChain3, IdealProbabilitiesAreHalf) {
  const auto res = build_chain3(1.0);
  EXPECT_NEAR(res.probability[0], 0.5, 1e-12);
  EXPECT_NEAR(res.probability[1], 0.5, 1e-12);
}

TEST(BuildChain3, CompactFormsAgree) {
  const auto printed = signed_amplitudes(kOutcome0Signs);
  auto half = add(add(add(ket3('0', '0', '+'), ket3('1', '0', '+')), ket3('0', '1', '-')), ket3('1', '1', '-'), -1.0);
  for (auto& v : half) v *= 0.5;
  auto pm = add(ket3('+', '0', '+'), ket3('-', '1', '-'));
  for (auto& v : pm) v *= kInvSqrt2;
  testing::expect_amplitudes_near(half, printed, 1e-15);
  testing::expect_amplitudes_near(pm, printed, 1e-15);
}

TEST(BuildChain3, StabilizersAfterCorrection) {
  const auto res = build_chain3(1.0);
  const auto g = path_graph({P(1), P(2), P(3)});
  const auto r0 = verify_all(res.outcome[0], g, 1e-12);
  EXPECT_TRUE(r0.pass);
  const auto r1 = verify_all(res.corrected(1), g, 1e-12);
  EXPECT_TRUE(r1.pass);
  for (const auto& [q, v] : r1.expectations) EXPECT_NEAR(v, 1.0, 1e-12) << q.label();
}

TEST(BuildChain3, NoisyBranchIsNormalized) {
  const auto res = build_chain3(0.88);
  EXPECT_NEAR(res.outcome[0].squared_norm(), 1.0, 1e-12);
  EXPECT_NEAR(res.outcome[1].squared_norm(), 1.0, 1e-12);
  EXPECT_LT(res.probability[0] + res.probability[1], 1.0);
}

TEST(ClosedFormTreeState, IdealBranchZero) {
  const auto s = closed_form_tree_state(1.0, 0);
  const auto want = add(ket3('+', '0', '+'), ket3('-', '1', '-'));
  EXPECT_GT(testing::phase_free_fidelity(s.amplitudes(), want), 1.0 - 1e-14);
}

TEST(ClosedFormTreeState, ZeroReflectionBranchZero) {
  const auto s = closed_form_tree_state(0.0, 0);
  EXPECT_GT(testing::phase_free_fidelity(s.amplitudes(), ket3('0', '0', '+')), 1.0 - 1e-15);
}

TEST(ClosedFormTreeState, BadBranch) { EXPECT_THROW(closed_form_tree_state(1.0, 2), InvalidInput); }

// Horner evaluation of the fidelity polynomial, written independently.
double poly_oracle_fidelity(cplx r) {
  const std::array<double, 9> c{2, 10, 23, 32, 29, 18, 9, 4, 1};
  cplx p = 0.0;
  double n = 0.0;
  const double m = std::norm(r);
  for (int i = 8; i >= 0; --i) {
    p = p * r + c[i];
    n = n * m + c[i];
  }
  return std::norm(p) / (128.0 * n);
}

TEST(TreeFidelityClosedForm, IdealIsExactlyOne) {
  const auto rep = tree_fidelity_closed_form(1.0);
  EXPECT_EQ(rep.numerator_poly_value, cplx(128.0));
  EXPECT_EQ(rep.n_r, 128.0);
  EXPECT_EQ(rep.fidelity, 1.0);
  EXPECT_NEAR(rep.inner_product_fidelity, 1.0, 1e-15);
  EXPECT_FALSE(rep.diagnostic.has_value());
}

TEST(TreeFidelityClosedForm, ReducedReflection) {
  EXPECT_NEAR(tree_fidelity_closed_form(0.88).fidelity, 0.962, 5e-4);
}

TEST(TreeFidelityClosedForm, MatchesHornerOracle) {
  for (double r : {0.0, 0.3, 0.88, 0.999})
    EXPECT_NEAR(tree_fidelity_closed_form(r).fidelity, poly_oracle_fidelity(r), 1e-12) << r;
}

TEST(TreeFidelityClosedForm, RejectsLargeR) { EXPECT_THROW(tree_fidelity_closed_form(1.5), InvalidInput); }

TEST(BuildTree7, IdealSatisfiesStabilizers) {
  const auto s = build_tree7(1.0, 1.0);
  const auto rep = verify_all(s, tree7_graph(), 1e-12);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.expectations.size(), 7u);
  EXPECT_NEAR(tree_fidelity_simulated(1.0, 1.0), 1.0, 1e-12);
}

TEST(BuildTree7, NoisyAgainstClosedForm) {
  const double sim = tree_fidelity_simulated(0.88, 0.88);
  const double closed = tree_fidelity_closed_form(0.88).fidelity;
  // The two noise bookkeepings differ; both must sit clearly below one.
  EXPECT_LT(sim, 0.99);
  EXPECT_LT(closed, 0.99);
  EXPECT_LT(std::abs(sim - closed), 0.02);
  const auto rep = verify_all(build_tree7(0.88, 0.88), tree7_graph());
  EXPECT_FALSE(rep.pass);
  bool below = false;
  for (const auto& [q, v] : rep.expectations) below = below || v < 1.0 - 1e-9;
  EXPECT_TRUE(below);
}

TEST(BuildTree7, ScriptIsValidAndLabelled) {
  const auto s = script_tree7(1.0, 0.5);
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(s.qubits.size(), 8u);
  int cz = 0;
  for (const auto& op : s.ops)
    if (op.kind == OpKind::CZ) {
      ++cz;
      EXPECT_EQ(op.r, cplx(0.5));
    }
  EXPECT_EQ(cz, 2);
}

TEST(Build2d, SmallInstanceNormalized) {
  EXPECT_NEAR(build_2d(2, 4, 1.0).squared_norm(), 1.0, 1e-12);
}

TEST(Build2d, GateTranscript) {
  const auto s = script_2d(2, 4, 1.0);
  std::vector<std::string> log;
  for (const auto& op : s.ops) log.push_back(op.describe());
  const std::vector<std::string> want{"h(a)",  "cz(a,p1)", "cnot(a,p3)", "h(a)", "cz(a,p2)", "cnot(a,p4)",
                                      "h(a)",  "cz(a,p3)", "h(a)",       "cz(a,p4)"};
  EXPECT_EQ(log, want);
}

TEST(Build2d, TooLargeForDense) {
  try {
    build_2d(20, 1000, 1.0);
    FAIL() << "expected InvalidInput";
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("tableau"), std::string::npos);
  }
}

TEST(Fidelity2dScaling, Examples) {
  EXPECT_EQ(fidelity_2d_scaling(0.9, 0), 1.0);
  EXPECT_EQ(fidelity_2d_scaling(1.0, 1000), 1.0);
  const double f = gate_fidelity_path2(0.88);
  double prod = 1.0;
  for (int i = 0; i < 10; ++i) prod *= f;
  EXPECT_NEAR(fidelity_2d_scaling(f, 10), prod, 1e-15);
  EXPECT_THROW(fidelity_2d_scaling(1.2, 3), InvalidInput);
  EXPECT_THROW(fidelity_2d_scaling(0.5, -1), InvalidInput);
}

// ---- properties

TEST(ProtocolProperties, ClosedFormMonotoneOnGrid) {
  double prev = tree_fidelity_closed_form(0.0).fidelity;
  for (int i = 1; i <= 100; ++i) {
    const double f = tree_fidelity_closed_form(i / 100.0).fidelity;
    // fidelity never improves as the reflection weakens
    EXPECT_GE(f, prev - 1e-15) << "r = " << i / 100.0;
    prev = f;
  }
}

TEST(ProtocolProperties, FidelityIsPolynomialRatio) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 100; ++i) {
    const auto rep = tree_fidelity_closed_form(testing::random_r(rng));
    EXPECT_NEAR(rep.fidelity, std::norm(rep.numerator_poly_value) / (128.0 * rep.n_r), 1e-12);
  }
}

TEST(ProtocolProperties, RoutesAgreeOrDiagnosticIsSet) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 100; ++i) {
    const auto rep = tree_fidelity_closed_form(testing::random_r(rng));
    if (rep.discrepancy > 1e-9) {
      ASSERT_TRUE(rep.diagnostic.has_value());
      EXPECT_FALSE(rep.diagnostic->empty());
    } else {
      EXPECT_FALSE(rep.diagnostic.has_value());
    }
  }
}

TEST(ProtocolProperties, NormalizedOutputs) {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 20; ++i) {
    const cplx r1 = testing::random_r(rng), r2 = testing::random_r(rng);
    EXPECT_NEAR(build_tree7(r1, r2).squared_norm(), 1.0, 1e-12);
    const auto chain = build_chain3(r1);
    EXPECT_NEAR(chain.outcome[0].squared_norm(), 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace qmsim
