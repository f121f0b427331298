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
dipole.hpp - Coupled-dipole scattering off a finite atomic array.

Lengths are in units of the wavelength (k = 2 pi). Each scatterer is an
isotropic point dipole d_i = alpha [E_inc(r_i) + k^2 sum_{j != i} G(r_i - r_j) d_j]
with G the free-space dyadic Green's function, so the scattered field of a
dipole d at displacement R is k^2 G(R) d.
*/
#ifndef QMSIM_DIPOLE_HPP_
#define QMSIM_DIPOLE_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qmsim/error.hpp"
#include "qmsim/state.hpp"

namespace qmsim::dipole {

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

inline constexpr double kWavenumber = 2.0 * std::numbers::pi;  // 1/lambda units

namespace detail {
struct GreenTerms {
  cplx prefactor;  // e^{ikR} / (4 pi R)
  cplx transverse;  // 1 + i/kR - 1/(kR)^2
  cplx longitudinal;  // -1 - 3i/kR + 3/(kR)^2
  Vec3 unit;
};

inline GreenTerms green_terms(double k, const Vec3& disp) {
  const double dist = disp.norm();
  if (!(dist > 0.0)) throw InvalidInput("dyadic Green's function is singular at zero displacement");
  const double kr = k * dist;
  const cplx i(0.0, 1.0);
  return {std::exp(i * kr) / (4.0 * std::numbers::pi * dist), 1.0 + i / kr - 1.0 / (kr * kr),
          -1.0 - 3.0 * i / kr + 3.0 / (kr * kr), disp / dist};
}
}  // namespace detail

// G(R) = e^{ikR}/(4 pi R) [(1 + i/kR - 1/(kR)^2) I + (-1 - 3i/kR + 3/(kR)^2) R^ R^T]
inline CMat3 green_dyadic(double k, const Vec3& disp) {
  const auto t = detail::green_terms(k, disp);
  CMat3 g = t.transverse * CMat3::Identity();
  g += t.longitudinal * (t.unit * t.unit.transpose()).cast<cplx>();
  return t.prefactor * g;
}

// G(R) d without forming the matrix.
inline CVec3 green_apply(double k, const Vec3& disp, const CVec3& d) {
  const auto t = detail::green_terms(k, disp);
  const cplx proj = t.unit.cast<cplx>().dot(d);  // unit is real
  return t.prefactor * (t.transverse * d + t.longitudinal * proj * t.unit.cast<cplx>());
}

// Two-level scatterer: alpha = -(6 pi / k^3) (Gamma/2) / (Delta + i Gamma/2).
inline cplx resonant_polarizability(double detuning, double linewidth, double k = kWavenumber) {
  require(linewidth > 0.0, "linewidth must be > 0");
  require(k > 0.0, "wavenumber must be > 0");
  const double half = 0.5 * linewidth;
  return -(6.0 * std::numbers::pi / (k * k * k)) * half / cplx(detuning, half);
}

struct BeamSpec {
  double wavelength_um = 0.7;  // reporting only
  double waist = 1.2;          // w0 in wavelengths
  Vec3 polarization = Vec3::UnitX();

  void validate() const {
    require(waist > 0.0, "beam waist must be > 0");
    require(std::abs(polarization.norm() - 1.0) < 1e-12, "polarization must be a unit vector");
    require(polarization.z() == 0.0, "polarization must be transverse to the +z axis");
  }
  double rayleigh_range() const { return std::numbers::pi * waist * waist; }
  double width(double z) const {
    const double zr = rayleigh_range();
    return waist * std::sqrt(1.0 + (z / zr) * (z / zr));
  }
};

// Paraxial TEM00 mode along +z, focus on the z = 0 plane, unit amplitude there.
inline CVec3 gaussian_beam_field(const BeamSpec& beam, const Vec3& p) {
  const double z = p.z();
  const double zr = beam.rayleigh_range();
  const double w = beam.width(z);
  const double rho2 = p.x() * p.x() + p.y() * p.y();
  const double inv_curvature = z / (z * z + zr * zr);
  const double gouy = std::atan2(z, zr);
  const double phase = kWavenumber * z + 0.5 * kWavenumber * rho2 * inv_curvature - gouy;
  const cplx f = (beam.waist / w) * std::exp(-rho2 / (w * w)) * std::polar(1.0, phase);
  return f * beam.polarization.cast<cplx>();
}

// The incident mode mirrored through z -> -z: the ideal back-reflected beam.
inline CVec3 reflected_mode_field(const BeamSpec& beam, const Vec3& p) {
  return gaussian_beam_field(beam, Vec3(p.x(), p.y(), -p.z()));
}

struct DipoleLattice {
  std::vector<Vec3> positions;
  double spacing = 0.0;
  int nx = 0, ny = 0;
  cplx alpha;

  // Square nx x ny lattice centred on the origin in the z = 0 plane.
  static DipoleLattice square(int nx, int ny, double spacing, cplx alpha) {
    require(nx >= 1 && ny >= 1, "lattice dimensions must be >= 1");
    require(spacing > 0.0, "lattice spacing must be > 0");
    DipoleLattice lat;
    lat.spacing = spacing;
    lat.nx = nx;
    lat.ny = ny;
    lat.alpha = alpha;
    lat.positions.reserve(static_cast<std::size_t>(nx) * ny);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        lat.positions.emplace_back((i - 0.5 * (nx - 1)) * spacing, (j - 0.5 * (ny - 1)) * spacing, 0.0);
    return lat;
  }

  // Default scatterers: on resonance.
  static DipoleLattice square(int nx, int ny, double spacing) {
    return square(nx, ny, spacing, resonant_polarizability(0.0, 1.0));
  }

  std::size_t size() const { return positions.size(); }
};

enum class DisorderDim { InPlane, Full3D };

inline std::string to_string(DisorderDim d) { return d == DisorderDim::InPlane ? "inplane" : "3d"; }
inline DisorderDim parse_disorder_dim(const std::string& s) {
  if (s == "inplane" || s == "in-plane" || s == "2d") return DisorderDim::InPlane;
  if (s == "3d" || s == "full") return DisorderDim::Full3D;
  throw InvalidInput("unknown disorder dimensionality '" + s + "' (expected inplane or 3d)");
}

struct DisorderSpec {
  double sigma = 0.0;  // in units of the lattice spacing
  DisorderDim dimensionality = DisorderDim::InPlane;
  std::uint64_t seed = 0;
};

// Gaussian displacement of every scatterer with s.d. sigma * spacing per axis.
inline DipoleLattice displaced(const DipoleLattice& lattice, const DisorderSpec& disorder) {
  require(disorder.sigma >= 0.0, "sigma must be >= 0");
  DipoleLattice out = lattice;
  if (disorder.sigma == 0.0) return out;
  std::mt19937_64 rng(disorder.seed);
  std::normal_distribution<double> normal(0.0, disorder.sigma * lattice.spacing);
  for (auto& p : out.positions) {
    p.x() += normal(rng);
    p.y() += normal(rng);
    if (disorder.dimensionality == DisorderDim::Full3D) p.z() += normal(rng);
  }
  return out;
}

struct ScatterSolution {
  std::vector<Vec3> positions;
  std::vector<CVec3> dipoles;
  std::vector<CVec3> incident;  // E_inc at each scatterer
  BeamSpec beam;
  double k = kWavenumber;
  cplx alpha;
  double relative_residual = 0.0;
  double rcond = 1.0;  // reciprocal condition estimate of the system matrix
};

inline constexpr double kMinSeparation = 1e-6;
inline constexpr double kMaxResidual = 1e-10;

// Dense direct solve of (I - alpha k^2 G) d = alpha E_inc. A planar array
// driven by a transverse field keeps d_z = 0 and G_xz = G_yz = 0 exactly, so
// only the in-plane 2N x 2N block is factorized in that case.
inline ScatterSolution solve_scattering(const DipoleLattice& lattice, const BeamSpec& beam) {
  beam.validate();
  const std::size_t n = lattice.size();
  require(n >= 1, "lattice has no scatterers");
  const double k = kWavenumber;
  const double k2 = k * k;

  ScatterSolution sol;
  sol.positions = lattice.positions;
  sol.beam = beam;
  sol.k = k;
  sol.alpha = lattice.alpha;
  sol.incident.reserve(n);
  bool planar = true;
  for (const auto& p : lattice.positions) {
    sol.incident.push_back(gaussian_beam_field(beam, p));
    if (p.z() != lattice.positions.front().z() || sol.incident.back().z() != cplx(0.0)) planar = false;
  }
  const int dims = planar ? 2 : 3;
  const Eigen::Index m = static_cast<Eigen::Index>(dims * n);

  Eigen::MatrixXcd system = Eigen::MatrixXcd::Identity(m, m);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec3 disp = lattice.positions[i] - lattice.positions[j];
      if (disp.norm() < kMinSeparation)
        throw InvalidInput("scatterers " + std::to_string(i) + " and " + std::to_string(j) +
                           " coincide (separation < 1e-6 lambda)");
      const CMat3 block = -lattice.alpha * k2 * green_dyadic(k, disp);
      // G is symmetric and even in R, so the (j, i) block equals the (i, j) block.
      for (int a = 0; a < dims; ++a)
        for (int b = 0; b < dims; ++b) {
          system(dims * i + a, dims * j + b) = block(a, b);
          system(dims * j + a, dims * i + b) = block(a, b);
        }
    }
  }
  Eigen::VectorXcd rhs(m);
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < dims; ++a) rhs(dims * i + a) = lattice.alpha * sol.incident[i](a);

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(system);
  sol.rcond = lu.rcond();
  if (!(sol.rcond > 1e-14))
    throw NumericalFailure("coupled-dipole system is singular or ill-conditioned (rcond estimate " +
                           std::to_string(sol.rcond) + ")");
  const Eigen::VectorXcd d = lu.solve(rhs);
  const double rhs_norm = rhs.norm();
  sol.relative_residual = rhs_norm > 0.0 ? (system * d - rhs).norm() / rhs_norm : 0.0;
  if (!(sol.relative_residual <= kMaxResidual))
    throw NumericalFailure("coupled-dipole solve residual " + std::to_string(sol.relative_residual) +
                           " exceeds 1e-10");

  sol.dipoles.resize(n, CVec3::Zero());
  for (std::size_t i = 0; i < n; ++i)
    for (int a = 0; a < dims; ++a) sol.dipoles[i](a) = d(dims * i + a);
  return sol;
}

inline CVec3 scattered_field(const ScatterSolution& sol, const Vec3& point) {
  CVec3 e = CVec3::Zero();
  const double k2 = sol.k * sol.k;
  for (std::size_t j = 0; j < sol.positions.size(); ++j) {
    const Vec3 disp = point - sol.positions[j];
    if (disp.norm() < 1e-9)
      throw InvalidInput("field point coincides with scatterer " + std::to_string(j));
    e += k2 * green_apply(sol.k, disp, sol.dipoles[j]);
  }
  return e;
}

inline CVec3 total_field(const ScatterSolution& sol, const Vec3& point) {
  return gaussian_beam_field(sol.beam, point) + scattered_field(sol, point);
}

struct OverlapGrid {
  int samples = 64;                // per transverse axis
  double half_width_factor = 4.0;  // grid spans +-factor * w(plane_z)
};

// r = sum E_scat . conj(E_ref) / sum |E_ref|^2 over a midpoint grid on the
// plane z = plane_z upstream of the array.
inline cplx reflection_coefficient(const ScatterSolution& sol, double plane_z = -5.0, OverlapGrid grid = {}) {
  require(plane_z < 0.0, "reflection plane must lie upstream (plane_z < 0)");
  require(grid.samples >= 64, "overlap grid needs at least 64 samples per axis");
  require(grid.half_width_factor >= 4.0, "overlap grid must cover at least 4 w(z)");
  const double half = grid.half_width_factor * sol.beam.width(plane_z);
  const double step = 2.0 * half / grid.samples;
  cplx num = 0.0;
  double den = 0.0;
  for (int ix = 0; ix < grid.samples; ++ix) {
    const double x = -half + (ix + 0.5) * step;
    for (int iy = 0; iy < grid.samples; ++iy) {
      const Vec3 p(x, -half + (iy + 0.5) * step, plane_z);
      const CVec3 ref = reflected_mode_field(sol.beam, p);
      num += ref.dot(scattered_field(sol, p));  // conj(ref) . E_scat
      den += ref.squaredNorm();
    }
  }
  return num / den;
}

struct ReflectionCheck {
  cplx r;
  cplx r_refined;  // same overlap on a grid with twice the samples per axis
  double delta;    // | |r_refined| - |r| |
  bool converged;  // delta <= 1e-3
};

inline ReflectionCheck reflection_with_refinement(const ScatterSolution& sol, double plane_z = -5.0,
                                                  OverlapGrid grid = {}) {
  ReflectionCheck c;
  c.r = reflection_coefficient(sol, plane_z, grid);
  OverlapGrid fine = grid;
  fine.samples *= 2;
  c.r_refined = reflection_coefficient(sol, plane_z, fine);
  c.delta = std::abs(std::abs(c.r_refined) - std::abs(c.r));
  c.converged = c.delta <= 1e-3;
  return c;
}

struct FieldSample {
  double x, z;
  CVec3 total;
};

// Total field on the y = 0 plane, x-major.
inline std::vector<FieldSample> field_map_xz(const ScatterSolution& sol, double x_min, double x_max, int nx,
                                             double z_min, double z_max, int nz) {
  require(nx >= 2 && nz >= 2, "field map needs at least 2 samples per axis");
  require(x_max > x_min && z_max > z_min, "field map ranges must be increasing");
  std::vector<FieldSample> out;
  out.reserve(static_cast<std::size_t>(nx) * nz);
  for (int i = 0; i < nx; ++i) {
    const double x = x_min + (x_max - x_min) * i / (nx - 1);
    for (int j = 0; j < nz; ++j) {
      const double z = z_min + (z_max - z_min) * j / (nz - 1);
      out.push_back({x, z, total_field(sol, Vec3(x, 0.0, z))});
    }
  }
  return out;
}

}  // namespace qmsim::dipole

#endif  // QMSIM_DIPOLE_HPP_
