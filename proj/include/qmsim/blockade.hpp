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
blockade.hpp - Finite Rydberg blockade. Array sites at distance r_d from the
ancilla reflect with 1 / (1 + i (r_d / R_c)^6), which feeds the path-1
(chain CNOTs, E gate) and path-2 (CZ) coefficients of the tree protocol.
*/
#ifndef QMSIM_BLOCKADE_HPP_
#define QMSIM_BLOCKADE_HPP_

#include <cmath>
#include <numbers>
#include <complex>
#include <string>
#include <vector>

#include "qmsim/protocols.hpp"

namespace qmsim::blockade {

struct BlockadeParams {
  double c6;            // van der Waals coefficient, rad/s * length^6
  double linewidth;     // gamma + Gamma, rad/s
  double rabi_pump;     // |Omega_p|, rad/s

  void validate() const {
    require(c6 > 0.0, "c6 must be > 0");
    require(linewidth > 0.0, "linewidth (gamma + Gamma) must be > 0");
    require(rabi_pump > 0.0, "pump Rabi frequency must be > 0");
  }
};

// Rb 70S-like defaults in rad/s and micrometres (R_c ~ 4.3 um, the array scale).
inline BlockadeParams default_params() {
  const double two_pi = 2.0 * std::numbers::pi;
  return {two_pi * 862.7e9, two_pi * 6.07e6, two_pi * 20e6};
}

// R_c = ((gamma + Gamma) c6 / (2 |Omega_p|^2))^(1/6)
inline double critical_radius(const BlockadeParams& p) {
  p.validate();
  return std::pow(p.linewidth * p.c6 / (2.0 * p.rabi_pump * p.rabi_pump), 1.0 / 6.0);
}

inline cplx blockade_reflectivity(double r_d, double r_c) {
  require(r_c > 0.0, "critical radius must be > 0");
  require(r_d >= 0.0, "distance must be >= 0");
  const double u = r_d / r_c;
  const double u6 = u * u * u * u * u * u;
  return 1.0 / cplx(1.0, u6);
}

enum class PathGeometry { Symmetric, Path1Centered };

inline std::string to_string(PathGeometry g) {
  return g == PathGeometry::Symmetric ? "symmetric" : "path1-centered";
}
inline PathGeometry parse_geometry(const std::string& s) {
  if (s == "symmetric") return PathGeometry::Symmetric;
  if (s == "path1-centered" || s == "path1_centered") return PathGeometry::Path1Centered;
  throw InvalidInput("unknown geometry mode '" + s + "' (expected symmetric or path1-centered)");
}

struct SeparationPoint {
  double s;  // separation, same length unit as R_c
  cplx r1;
  cplx r2;
  double fidelity;
};

// Fidelity of the simulated tree against the ideal tree for each separation.
// With use_magnitude the path coefficients enter as |r|.
inline std::vector<SeparationPoint> tree_fidelity_vs_separation(double r_c, PathGeometry geometry,
                                                                const std::vector<double>& s_grid,
                                                                bool use_magnitude = false) {
  require(r_c > 0.0, "critical radius must be > 0");
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    require(s_grid[i] >= 0.0, "separations must be >= 0");
    if (i > 0) require(s_grid[i] >= s_grid[i - 1], "separation grid must be ascending");
  }
  std::vector<SeparationPoint> out;
  out.reserve(s_grid.size());
  for (double s : s_grid) {
    cplx r1 = 1.0, r2;
    if (geometry == PathGeometry::Symmetric) {
      r1 = r2 = blockade_reflectivity(0.5 * s, r_c);
    } else {
      r2 = blockade_reflectivity(s, r_c);
    }
    if (use_magnitude) {
      r1 = std::abs(r1);
      r2 = std::abs(r2);
    }
    out.push_back({s, r1, r2, tree_fidelity_simulated(r1, r2)});
  }
  return out;
}

inline std::vector<SeparationPoint> tree_fidelity_vs_separation(const BlockadeParams& params,
                                                                PathGeometry geometry,
                                                                const std::vector<double>& s_grid,
                                                                bool use_magnitude = false) {
  return tree_fidelity_vs_separation(critical_radius(params), geometry, s_grid, use_magnitude);
}

}  // namespace qmsim::blockade

#endif  // QMSIM_BLOCKADE_HPP_
