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
ensemble.hpp - Monte Carlo disorder ensembles over the coupled-dipole solver.

Run i uses seed splitmix64(master_seed + (i + 1) * 0x9E3779B97F4A7C15), so any
subset of runs can be reproduced on its own.
*/
#ifndef QMSIM_ENSEMBLE_HPP_
#define QMSIM_ENSEMBLE_HPP_

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qmsim/dipole.hpp"
#include "qmsim/parallel.hpp"
#include "qmsim/stats.hpp"

namespace qmsim::dipole {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t run_seed(std::uint64_t master, std::size_t run_index) {
  return splitmix64(master + (static_cast<std::uint64_t>(run_index) + 1) * 0x9E3779B97F4A7C15ULL);
}

struct EnsembleOptions {
  double plane_z = -5.0;
  OverlapGrid grid;
  unsigned jobs = 1;
};

struct RunRecord {
  cplx r;
  double relative_residual;
  double rcond;
};

// Running statistics are of |r| and indexed by run count (entry i covers runs 0..i).
struct EnsembleStats {
  double sigma = 0.0;
  std::vector<RunRecord> runs;
  std::vector<double> running_mean;
  std::vector<double> running_sd;
  std::vector<double> running_se;

  std::size_t size() const { return runs.size(); }
  double mean_abs_r() const { return running_mean.back(); }
  double sd() const { return running_sd.back(); }
  double se() const { return running_se.back(); }
};

inline RunRecord single_realization(const DipoleLattice& lattice, const BeamSpec& beam,
                                    const DisorderSpec& disorder, const EnsembleOptions& opt) {
  const auto sol = solve_scattering(displaced(lattice, disorder), beam);
  return {reflection_coefficient(sol, opt.plane_z, opt.grid), sol.relative_residual, sol.rcond};
}

inline EnsembleStats disorder_ensemble(const DipoleLattice& lattice, const BeamSpec& beam,
                                       const DisorderSpec& disorder, int runs, const EnsembleOptions& opt = {}) {
  require(runs >= 1, "runs must be >= 1");
  require(disorder.sigma >= 0.0, "sigma must be >= 0");
  EnsembleStats out;
  out.sigma = disorder.sigma;
  if (disorder.sigma == 0.0) {
    // Every realization is the ordered lattice.
    const auto rec = single_realization(lattice, beam, disorder, opt);
    out.runs.assign(static_cast<std::size_t>(runs), rec);
  } else {
    out.runs = parallel_map(static_cast<std::size_t>(runs), opt.jobs, [&](std::size_t i) {
      DisorderSpec d = disorder;
      d.seed = run_seed(disorder.seed, i);
      return single_realization(lattice, beam, d, opt);
    });
  }
  stats::RunningStats acc;
  for (const auto& rec : out.runs) {
    acc.push(std::abs(rec.r));
    out.running_mean.push_back(acc.mean());
    out.running_sd.push_back(acc.sd());
    out.running_se.push_back(acc.se());
  }
  return out;
}

struct DisorderPoint {
  double sigma;
  double mean_abs_r;
  double sd;
  double se;
};

inline std::vector<DisorderPoint> reflectivity_vs_disorder(const DipoleLattice& lattice, const BeamSpec& beam,
                                                           const std::vector<double>& sigma_grid, int runs,
                                                           std::uint64_t master_seed,
                                                           DisorderDim dim = DisorderDim::InPlane,
                                                           const EnsembleOptions& opt = {}) {
  require(!sigma_grid.empty(), "sigma grid is empty");
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    require(sigma_grid[i] >= 0.0, "sigma must be >= 0");
    if (i > 0) require(sigma_grid[i] > sigma_grid[i - 1], "sigma grid must be ascending");
  }
  std::vector<DisorderPoint> table;
  for (double s : sigma_grid) {
    const auto e = disorder_ensemble(lattice, beam, {s, dim, master_seed}, runs, opt);
    table.push_back({s, e.mean_abs_r(), e.sd(), e.se()});
  }
  return table;
}

}  // namespace qmsim::dipole

#endif  // QMSIM_ENSEMBLE_HPP_
