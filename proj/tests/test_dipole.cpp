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
#include <numbers>

#include "qmsim/ensemble.hpp"
#include "test_util.hpp"

namespace qmsim::dipole {
namespace {

constexpr double kPi = std::numbers::pi;

const DipoleLattice& ordered20() {
  static const DipoleLattice lat = DipoleLattice::square(20, 20, 0.21);
  return lat;
}

const ScatterSolution& ordered20_solution() {
  static const ScatterSolution sol = solve_scattering(ordered20(), BeamSpec{});
  return sol;
}

TEST(GreenDyadic, Reciprocity) {
  const Vec3 r(0.3, -0.2, 0.7);
  const CMat3 diff = green_dyadic(kWavenumber, r) - green_dyadic(kWavenumber, -r).transpose();
  EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(GreenDyadic, FarFieldIsTransverse) {
  // at large kR only the (I - RR) part survives
  const Vec3 r(0.0, 0.0, 500.0);
  const CMat3 g = green_dyadic(kWavenumber, r);
  EXPECT_LT(std::abs(g(2, 2)) / std::abs(g(0, 0)), 1e-3);
}

TEST(GreenDyadic, ZeroDisplacement) { EXPECT_THROW(green_dyadic(kWavenumber, Vec3::Zero()), InvalidInput); }

TEST(Polarizability, OnResonance) {
  const cplx a = resonant_polarizability(0.0, 1.0);
  EXPECT_EQ(a.real(), 0.0);
  EXPECT_NEAR(std::abs(a), 6.0 * kPi / std::pow(kWavenumber, 3), 1e-15);
}

TEST(Polarizability, FarDetuned) {
  EXPECT_LT(std::abs(resonant_polarizability(1e9, 1.0)), 1e-9);
  EXPECT_LT(std::abs(resonant_polarizability(-1e9, 1.0)), 1e-9);
}

TEST(Polarizability, ResonantCrossSection) {
  const double k = kWavenumber;
  const cplx a = resonant_polarizability(0.0, 1.0);
  const double scattering = std::pow(k, 4) * std::norm(a) * (8.0 * kPi / 3.0) / std::pow(4.0 * kPi, 2);
  const double extinction = k * a.imag();  // optical theorem in the same units
  EXPECT_NEAR(scattering, 3.0 / (2.0 * kPi), 1e-14);
  EXPECT_NEAR(extinction, scattering, 1e-14);
}

TEST(GaussianBeam, FocusAndProfile) {
  const BeamSpec beam;
  const CVec3 e0 = gaussian_beam_field(beam, Vec3::Zero());
  EXPECT_NEAR(e0.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e0.x()), 1.0, 1e-15);
  EXPECT_NEAR(gaussian_beam_field(beam, Vec3(beam.waist, 0.0, 0.0)).norm(), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(gaussian_beam_field(beam, Vec3(0.0, 0.0, beam.rayleigh_range())).norm(), 1.0 / std::sqrt(2.0),
              1e-14);
  EXPECT_NEAR(beam.width(beam.rayleigh_range()), std::sqrt(2.0) * beam.waist, 1e-14);
}

TEST(GaussianBeam, Validation) {
  BeamSpec bad;
  bad.waist = 0.0;
  EXPECT_THROW(bad.validate(), InvalidInput);
  bad = BeamSpec{};
  bad.polarization = Vec3::UnitZ();
  EXPECT_THROW(bad.validate(), InvalidInput);
}

TEST(SolveScattering, SingleDipole) {
  DipoleLattice lat = DipoleLattice::square(1, 1, 1.0);
  lat.positions[0] = Vec3(0.1, -0.2, 0.05);
  const auto sol = solve_scattering(lat, BeamSpec{});
  const CVec3 want = lat.alpha * gaussian_beam_field(BeamSpec{}, lat.positions[0]);
  EXPECT_LT((sol.dipoles[0] - want).norm(), 1e-15);
}

TEST(SolveScattering, MirrorPair) {
  DipoleLattice lat = DipoleLattice::square(1, 2, 0.3);
  lat.positions[0] = Vec3(0.05, 0.17, 0.02);
  lat.positions[1] = Vec3(0.05, -0.17, 0.02);
  const auto sol = solve_scattering(lat, BeamSpec{});
  // mirror y -> -y maps the x-polarized beam to itself
  const CVec3& d1 = sol.dipoles[0];
  const CVec3& d2 = sol.dipoles[1];
  EXPECT_LT(std::abs(d1.x() - d2.x()), 1e-10);
  EXPECT_LT(std::abs(d1.y() + d2.y()), 1e-10);
  EXPECT_LT(std::abs(d1.z() - d2.z()), 1e-10);
}

TEST(SolveScattering, PlanarShortcutMatchesFullSolve) {
  // tiny out-of-plane offset forces the 3N system
  const auto lat = DipoleLattice::square(4, 4, 0.21);
  auto tilted = lat;
  tilted.positions[5].z() += 1e-9;
  const auto a = solve_scattering(lat, BeamSpec{});
  const auto b = solve_scattering(tilted, BeamSpec{});
  for (std::size_t i = 0; i < a.dipoles.size(); ++i) EXPECT_LT((a.dipoles[i] - b.dipoles[i]).norm(), 1e-6);
}

TEST(SolveScattering, CoincidentScatterers) {
  DipoleLattice lat = DipoleLattice::square(1, 2, 0.3);
  lat.positions[1] = lat.positions[0];
  EXPECT_THROW(solve_scattering(lat, BeamSpec{}), InvalidInput);
}

TEST(SolveScattering, OrderedLatticeReflects) {
  const auto& sol = ordered20_solution();
  EXPECT_LE(sol.relative_residual, 1e-10);
  EXPECT_GT(sol.rcond, 0.0);
  EXPECT_NEAR(std::abs(reflection_coefficient(sol)), 0.99, 0.02);
}

TEST(TotalField, DestructiveTransmission) {
  const auto& sol = ordered20_solution();
  const Vec3 behind(0.0, 0.0, 3.0);
  EXPECT_LT(total_field(sol, behind).norm(), 0.1 * gaussian_beam_field(sol.beam, behind).norm());
}

TEST(TotalField, NoDipolesGivesIncident) {
  ScatterSolution sol;
  sol.positions = {Vec3(0.0, 0.0, 0.0)};
  sol.dipoles = {CVec3::Zero()};
  const Vec3 p(0.3, 0.1, -2.0);
  EXPECT_EQ(total_field(sol, p), gaussian_beam_field(sol.beam, p));
  EXPECT_EQ(reflection_coefficient(sol), cplx(0.0));
}

TEST(ReflectionCoefficient, Validation) {
  const auto& sol = ordered20_solution();
  EXPECT_THROW(reflection_coefficient(sol, 1.0), InvalidInput);
  EXPECT_THROW(reflection_coefficient(sol, -5.0, {32, 4.0}), InvalidInput);
}

TEST(ReflectionCoefficient, GridRefinementConverged) {
  const auto check = reflection_with_refinement(ordered20_solution());
  EXPECT_TRUE(check.converged);
  EXPECT_LT(check.delta, 1e-3);
}

TEST(Ensemble, OrderedRunsIdentical) {
  const auto lat = DipoleLattice::square(6, 6, 0.21);
  const auto e = disorder_ensemble(lat, BeamSpec{}, {0.0, DisorderDim::InPlane, 7}, 5);
  ASSERT_EQ(e.size(), 5u);
  for (const auto& rec : e.runs) EXPECT_EQ(rec.r, e.runs[0].r);
  EXPECT_EQ(e.sd(), 0.0);
}

TEST(Ensemble, Deterministic) {
  const auto lat = DipoleLattice::square(6, 6, 0.21);
  const DisorderSpec d{0.05, DisorderDim::InPlane, 42};
  const auto a = disorder_ensemble(lat, BeamSpec{}, d, 8, {-5.0, {}, 1});
  const auto b = disorder_ensemble(lat, BeamSpec{}, d, 8, {-5.0, {}, 3});
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.runs[i].r, b.runs[i].r);
  EXPECT_EQ(a.running_se, b.running_se);
}

TEST(Ensemble, RunsIndividuallyReproducible) {
  const auto lat = DipoleLattice::square(6, 6, 0.21);
  const DisorderSpec d{0.1, DisorderDim::Full3D, 9};
  const auto e = disorder_ensemble(lat, BeamSpec{}, d, 4);
  DisorderSpec third = d;
  third.seed = run_seed(9, 3);
  EXPECT_EQ(single_realization(lat, BeamSpec{}, third, {}).r, e.runs[3].r);
}

TEST(Ensemble, StandardErrorConsistent) {
  const auto lat = DipoleLattice::square(6, 6, 0.21);
  const auto e = disorder_ensemble(lat, BeamSpec{}, {0.1, DisorderDim::InPlane, 3}, 20);
  for (std::size_t i = 0; i < e.size(); ++i)
    EXPECT_NEAR(e.running_se[i], e.running_sd[i] / std::sqrt(static_cast<double>(i + 1)), 1e-15);
}

TEST(Ensemble, RejectsBadInput) {
  const auto lat = DipoleLattice::square(2, 2, 0.21);
  EXPECT_THROW(disorder_ensemble(lat, BeamSpec{}, {-0.1, DisorderDim::InPlane, 1}, 3), InvalidInput);
  EXPECT_THROW(disorder_ensemble(lat, BeamSpec{}, {0.1, DisorderDim::InPlane, 1}, 0), InvalidInput);
  EXPECT_THROW(reflectivity_vs_disorder(lat, BeamSpec{}, {0.2, 0.1}, 2, 1), InvalidInput);
  EXPECT_THROW(parse_disorder_dim("4d"), InvalidInput);
}

TEST(ReflectivityVsDisorder, OrderedEntry) {
  const auto table = reflectivity_vs_disorder(ordered20(), BeamSpec{}, {0.0}, 3, 1);
  ASSERT_EQ(table.size(), 1u);
  EXPECT_NEAR(table[0].mean_abs_r, 0.99, 0.02);
}

TEST(Seeds, SplitmixReference) {
  // first output of the reference splitmix64 generator seeded with 0
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  EXPECT_NE(run_seed(1, 0), run_seed(1, 1));
  EXPECT_NE(run_seed(1, 0), run_seed(2, 0));
}

// ---- properties

TEST(DipoleProperties, ReciprocityRandom) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Vec3 r(u(rng), u(rng), u(rng));
    if (r.norm() < 1e-3) continue;
    const CMat3 d = green_dyadic(kWavenumber, r) - green_dyadic(kWavenumber, -r).transpose();
    worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(DipoleProperties, DisorderedRealizationsBounded) {
  const auto lat = DipoleLattice::square(10, 10, 0.21);
  for (std::uint64_t s = 0; s < 6; ++s) {
    const DisorderSpec d{0.05 * static_cast<double>(s), s % 2 ? DisorderDim::Full3D : DisorderDim::InPlane, s};
    const auto sol = solve_scattering(displaced(lat, d), BeamSpec{});
    EXPECT_LE(sol.relative_residual, 1e-10);
    EXPECT_LE(std::abs(reflection_coefficient(sol)), 1.02);
  }
}

TEST(DipoleProperties, DisplacementStatistics) {
  const auto lat = DipoleLattice::square(30, 30, 0.5);
  const auto moved = displaced(lat, {0.1, DisorderDim::InPlane, 77});
  double sum2 = 0.0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const Vec3 d = moved.positions[i] - lat.positions[i];
    EXPECT_EQ(d.z(), 0.0);
    sum2 += d.x() * d.x() + d.y() * d.y();
  }
  const double sd = std::sqrt(sum2 / (2.0 * static_cast<double>(lat.size())));
  EXPECT_NEAR(sd, 0.05, 0.005);
}

}  // namespace
}  // namespace qmsim::dipole
