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
qmsim - command-line driver. Subcommands emit plot-ready CSV/JSON under --out
together with manifest.json. Exit codes: 0 success, 1 numerical failure,
2 invalid input.
*/
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmsim/blockade.hpp"
#include "qmsim/ensemble.hpp"
#include "qmsim/io.hpp"
#include "qmsim/protocols.hpp"
#include "qmsim/tableau.hpp"
#include "run_output.hpp"

using nlohmann::json;
using qmsim::InvalidInput;
using qmsim::io::format_double;
namespace dp = qmsim::dipole;

namespace {

struct Common {
  std::string out = "qmsim_out";
  std::uint64_t seed = 1;
  unsigned jobs = 0;
};

struct ReflectivityArgs {
  int nx = 20, ny = 20;
  double spacing = 0.21;
  double waist = 1.2;
  double wavelength_um = 0.7;
  std::vector<double> sigma{0.0};
  int runs = 100;
  std::string disorder_dim = "inplane";
  double detuning = 0.0;
  double plane_z = -5.0;
  int grid = 64;
  bool field_map = false;
};

struct TreeArgs {
  std::vector<double> r{0.8, 0.85, 0.88, 0.9, 0.95, 0.99, 0.999, 1.0};
};

struct TwoDArgs {
  int n_min = 0, n_max = 100, n_step = 1;
  std::vector<double> scenario_r{0.99, 0.88};
  std::string per_photon_source = "path2";
  std::vector<double> per_photon_fidelity;
};

struct BlockadeArgs {
  std::string mode = "both";
  double s_max = 4.0;
  int s_steps = 81;
  double c6 = qmsim::blockade::default_params().c6;
  double linewidth = qmsim::blockade::default_params().linewidth;
  double rabi = qmsim::blockade::default_params().rabi_pump;
  bool magnitude = false;
};

struct SimulateArgs {
  std::string script;
  std::string graph;
  std::string backend = "auto";
  double tolerance = 1e-9;
};

struct ScriptArgs {
  std::string protocol = "tree7";
  double r = 1.0;
  double r_path2 = -1.0;  // < 0: same as r
  int width = 3;
  int nodes = 9;
};

std::string fmt_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

qmsim::io::Metadata metadata(const std::string& subcommand, const json& params, std::uint64_t seed) {
  qmsim::io::Metadata m{{"tool", std::string("qmsim ") + qmsim::cli::kVersion},
                        {"build", QMSIM_GIT_DESCRIBE},
                        {"subcommand", subcommand},
                        {"seed", std::to_string(seed)}};
  for (auto it = params.begin(); it != params.end(); ++it) m.emplace_back(it.key(), fmt_value(it.value()));
  return m;
}

std::string label_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

unsigned resolve_jobs(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("QMSIM_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw InvalidInput(std::string("QMSIM_JOBS must be a positive integer, got '") + env + "'");
  }
  return qmsim::hardware_jobs();
}

// ---------------------------------------------------------------- reflectivity

json reflectivity_params(const ReflectivityArgs& a) {
  return {{"nx", a.nx},
          {"ny", a.ny},
          {"spacing_lambda", a.spacing},
          {"waist_lambda", a.waist},
          {"wavelength_um", a.wavelength_um},
          {"sigma_a", a.sigma},
          {"runs", a.runs},
          {"disorder_dim", a.disorder_dim},
          {"detuning_linewidths", a.detuning},
          {"plane_z_lambda", a.plane_z},
          {"overlap_grid", a.grid},
          {"polarizability", "two-level resonant, isotropic"}};
}

void cmd_reflectivity(const ReflectivityArgs& a, const Common& c, qmsim::cli::RunOutput& out) {
  for (double s : a.sigma)
    if (!(s >= 0.0)) throw InvalidInput("sigma must be ≥ 0");
  for (std::size_t i = 1; i < a.sigma.size(); ++i)
    if (!(a.sigma[i] > a.sigma[i - 1])) throw InvalidInput("sigma values must be ascending");
  if (a.runs < 1) throw InvalidInput("runs must be ≥ 1");
  if (a.spacing <= 0.0) throw InvalidInput("spacing must be > 0");
  if (a.nx < 1 || a.ny < 1) throw InvalidInput("lattice dimensions must be ≥ 1");
  const auto dim = dp::parse_disorder_dim(a.disorder_dim);

  const json params = reflectivity_params(a);
  const auto meta = metadata("reflectivity", params, c.seed);
  const auto lattice = dp::DipoleLattice::square(a.nx, a.ny, a.spacing, dp::resonant_polarizability(a.detuning, 1.0));
  const dp::BeamSpec beam{a.wavelength_um, a.waist, dp::Vec3::UnitX()};
  beam.validate();
  dp::EnsembleOptions opt{a.plane_z, {a.grid, 4.0}, resolve_jobs(c.jobs)};

  json ensembles = json::array();
  qmsim::io::CsvTable table(meta, {"sigma_a", "mean_abs_r", "sd", "se", "runs"});
  std::vector<double> sigmas, means;
  for (double s : a.sigma) {
    const dp::DisorderSpec disorder{s, dim, c.seed};
    const auto stats = dp::disorder_ensemble(lattice, beam, disorder, a.runs, opt);

    // Quadrature self-check on the first realization.
    dp::DisorderSpec first = disorder;
    first.seed = dp::run_seed(c.seed, 0);
    const auto sol0 = dp::solve_scattering(dp::displaced(lattice, first), beam);
    const auto check = dp::reflection_with_refinement(sol0, a.plane_z, {a.grid, 4.0});
    if (!check.converged)
      throw qmsim::NumericalFailure("overlap grid too coarse: doubling it changes |r| by " +
                                    format_double(check.delta) + " (> 1e-3)");

    const std::string tag = label_double(s);
    qmsim::io::CsvTable runs(meta, {"run_index", "re_r", "im_r", "abs_r"});
    qmsim::io::CsvTable conv(meta, {"n", "mean_abs_r", "sd", "se"});
    double max_residual = 0.0, min_rcond = 1.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
      const auto& rec = stats.runs[i];
      runs.add_row({std::to_string(i), format_double(rec.r.real()), format_double(rec.r.imag()),
                    format_double(std::abs(rec.r))});
      conv.add_row({std::to_string(i + 1), format_double(stats.running_mean[i]), format_double(stats.running_sd[i]),
                    format_double(stats.running_se[i])});
      max_residual = std::max(max_residual, rec.relative_residual);
      min_rcond = std::min(min_rcond, rec.rcond);
    }
    out.write("reflectivity_sigma_" + tag + ".csv", runs.str());
    out.write("convergence_sigma_" + tag + ".csv", conv.str());
    table.add_row({format_double(s), format_double(stats.mean_abs_r()), format_double(stats.sd()),
                   format_double(stats.se()), std::to_string(stats.size())});
    sigmas.push_back(s);
    means.push_back(stats.mean_abs_r());
    ensembles.push_back({{"sigma", s},
                         {"mean_abs_r", stats.mean_abs_r()},
                         {"sd", stats.sd()},
                         {"se", stats.se()},
                         {"se_curve", stats.running_se},
                         {"grid_refinement_delta", check.delta},
                         {"max_relative_residual", max_residual},
                         {"min_rcond", min_rcond}});

    if (a.field_map && s == a.sigma.front()) {
      const auto map = dp::field_map_xz(sol0, -4.0, 4.0, 81, -6.0, 6.0, 121);
      qmsim::io::CsvTable fm(meta, {"x", "z", "re_ex", "im_ex", "re_ey", "im_ey", "re_ez", "im_ez", "abs_e"});
      for (const auto& f : map)
        fm.add_row({format_double(f.x), format_double(f.z), format_double(f.total.x().real()),
                    format_double(f.total.x().imag()), format_double(f.total.y().real()),
                    format_double(f.total.y().imag()), format_double(f.total.z().real()),
                    format_double(f.total.z().imag()), format_double(f.total.norm())});
      out.write("field_map.csv", fm.str());
    }
  }
  out.write("reflectivity_vs_sigma.csv", table.str());
  json summary{{"parameters", params}, {"ensembles", ensembles}};
  if (sigmas.size() >= 2) summary["spearman_mean_vs_sigma"] = qmsim::stats::spearman(sigmas, means);
  out.write_json("summary.json", summary);
}

// ---------------------------------------------------------------- tree-fidelity

void cmd_tree_fidelity(const TreeArgs& a, const Common& c, qmsim::cli::RunOutput& out) {
  if (a.r.empty()) throw InvalidInput("r grid is empty");
  for (double r : a.r)
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidInput("r must lie in [0, 1], got " + format_double(r));
  const json params{{"r", a.r}, {"simulated_model", "gate-level tree protocol, r_path1 = r_path2 = r"}};
  qmsim::io::CsvTable t(metadata("tree-fidelity", params, c.seed),
                        {"r", "closed_form_F", "simulated_F", "abs_closed_minus_simulated", "inner_product_F",
                         "abs_closed_minus_inner_product"});
  json diagnostics = json::array();
  for (double r : a.r) {
    const auto rep = qmsim::tree_fidelity_closed_form(r);
    const double sim = qmsim::tree_fidelity_simulated(r, r);
    t.add_row({format_double(r), format_double(rep.fidelity), format_double(sim),
               format_double(std::abs(rep.fidelity - sim)), format_double(rep.inner_product_fidelity),
               format_double(rep.discrepancy)});
    if (rep.diagnostic) diagnostics.push_back({{"r", r}, {"message", *rep.diagnostic}});
  }
  out.write("tree_fidelity.csv", t.str());
  out.write_json("tree_fidelity_diagnostics.json", {{"parameters", params}, {"diagnostics", diagnostics}});
}

// ---------------------------------------------------------------- 2d

void cmd_2d(const TwoDArgs& a, const Common& c, qmsim::cli::RunOutput& out) {
  if (a.n_min < 0 || a.n_max < a.n_min || a.n_step < 1) throw InvalidInput("invalid size range");
  if (a.scenario_r.empty()) throw InvalidInput("at least one scenario is required");
  std::vector<double> per_photon;
  if (a.per_photon_source == "path2") {
    for (double r : a.scenario_r) per_photon.push_back(qmsim::gate_fidelity_path2(r));
  } else if (a.per_photon_source == "explicit") {
    if (a.per_photon_fidelity.size() != a.scenario_r.size())
      throw InvalidInput("explicit source needs one --per-photon-fidelity per scenario");
    per_photon = a.per_photon_fidelity;
  } else {
    throw InvalidInput("per-photon source must be path2 or explicit");
  }
  const json params{{"n_min", a.n_min},
                    {"n_max", a.n_max},
                    {"n_step", a.n_step},
                    {"scenario_r", a.scenario_r},
                    {"per_photon_source", a.per_photon_source},
                    {"per_photon_fidelity", per_photon}};
  std::vector<std::string> cols{"n_photons"};
  for (double r : a.scenario_r) cols.push_back("fidelity_r" + label_double(r));
  qmsim::io::CsvTable t(metadata("2d", params, c.seed), cols);
  for (int n = a.n_min; n <= a.n_max; n += a.n_step) {
    std::vector<std::string> row{std::to_string(n)};
    for (double f : per_photon) row.push_back(format_double(qmsim::fidelity_2d_scaling(f, n)));
    t.add_row(std::move(row));
  }
  out.write("fidelity_2d.csv", t.str());
}

// ---------------------------------------------------------------- blockade

void cmd_blockade(const BlockadeArgs& a, const Common& c, qmsim::cli::RunOutput& out) {
  std::vector<qmsim::blockade::PathGeometry> modes;
  if (a.mode == "both")
    modes = {qmsim::blockade::PathGeometry::Symmetric, qmsim::blockade::PathGeometry::Path1Centered};
  else
    modes = {qmsim::blockade::parse_geometry(a.mode)};
  if (a.s_steps < 2 || !(a.s_max > 0.0)) throw InvalidInput("separation grid needs s-max > 0 and ≥ 2 steps");
  const qmsim::blockade::BlockadeParams p{a.c6, a.linewidth, a.rabi};
  const double rc = qmsim::blockade::critical_radius(p);
  std::vector<double> grid;
  for (int i = 0; i < a.s_steps; ++i) grid.push_back(rc * a.s_max * i / (a.s_steps - 1));
  for (auto mode : modes) {
    const json params{{"geometry", to_string(mode)},
                      {"c6_rad_s_um6", a.c6},
                      {"linewidth_rad_s", a.linewidth},
                      {"rabi_pump_rad_s", a.rabi},
                      {"critical_radius_um", rc},
                      {"s_max_rc", a.s_max},
                      {"s_steps", a.s_steps},
                      {"coefficients", a.magnitude ? "magnitude" : "complex"}};
    qmsim::io::CsvTable t(metadata("blockade", params, c.seed),
                          {"s_over_rc", "s_um", "re_r1", "im_r1", "re_r2", "im_r2", "fidelity", "geometry"});
    for (const auto& pt : qmsim::blockade::tree_fidelity_vs_separation(rc, mode, grid, a.magnitude))
      t.add_row({format_double(pt.s / rc), format_double(pt.s), format_double(pt.r1.real()),
                 format_double(pt.r1.imag()), format_double(pt.r2.real()), format_double(pt.r2.imag()),
                 format_double(pt.fidelity), to_string(mode)});
    out.write("blockade_" + to_string(mode) + ".csv", t.str());
  }
}

// ---------------------------------------------------------------- simulate

bool has_e_gate(const qmsim::ProtocolScript& s) {
  return std::any_of(s.ops.begin(), s.ops.end(), [](const auto& op) { return op.kind == qmsim::OpKind::E; });
}

void cmd_simulate(const SimulateArgs& a, const Common&, qmsim::cli::RunOutput& out) {
  const auto script = qmsim::io::script_from_json(qmsim::io::read_json_file(a.script));
  std::optional<qmsim::ClusterGraph> graph;
  if (!a.graph.empty()) graph = qmsim::io::graph_from_json(qmsim::io::read_json_file(a.graph));

  std::string backend = a.backend;
  const bool fits_dense = static_cast<int>(script.qubits.size()) <= qmsim::kMaxDenseQubits;
  if (backend == "auto") backend = fits_dense ? "dense" : "tableau";
  if (backend == "dense" && !fits_dense)
    throw InvalidInput("register of " + std::to_string(script.qubits.size()) +
                       " qubits is too large for the dense path; an r = 1 Clifford script can use the tableau path");
  if (backend == "tableau" && (!script.all_ideal() || has_e_gate(script)))
    throw InvalidInput("tableau path needs an ideal (r = 1) Clifford script without E gates");

  json params{{"script", a.script}, {"graph", a.graph}, {"backend", backend}, {"tolerance", a.tolerance}};
  if (backend == "dense") {
    const auto run = qmsim::run_dense(script);
    out.write_json("state.json", {{"parameters", params},
                                  {"measurement_outcomes", run.outcomes},
                                  {"measurement_probabilities", run.probabilities},
                                  {"squared_norm", run.state.squared_norm()},
                                  {"state", qmsim::io::state_to_json(run.state)}});
    if (graph) {
      auto state = run.state;
      for (const auto& q : script.qubits)
        if (!graph->contains(q)) state = qmsim::drop_qubit(state, q);
      state = qmsim::normalized(state);
      const auto report = qmsim::verify_all(state, *graph, a.tolerance);
      out.write_json("verification.json", {{"parameters", params}, {"report", qmsim::io::report_to_json(report)}});
    }
  } else if (backend == "tableau") {
    const auto t = qmsim::tableau_run(script);
    json generators = json::array();
    for (std::size_t i = 0; i < t.qubit_count(); ++i) generators.push_back(t.generator_string(i));
    const auto induced = t.induced_graph();
    json lc = json::array();
    for (const auto& op : induced.local_ops) lc.push_back(qmsim::io::op_to_json(op));
    json labels = json::array();
    for (const auto& q : t.labels()) labels.push_back(q.label());
    out.write_json("tableau_summary.json", {{"parameters", params},
                                            {"qubits", labels},
                                            {"measurement_outcomes", t.measurement_outcomes()},
                                            {"generators_commute", t.generators_commute()},
                                            {"symplectic_rank", t.symplectic_rank()},
                                            {"generators", generators},
                                            {"induced_graph", qmsim::io::graph_to_json(induced.graph)},
                                            {"local_clifford_ops", lc}});
    if (graph) {
      json values = json::object();
      bool pass = true;
      for (const auto& v : graph->vertices()) {
        const auto sign = t.stabilizer_sign(qmsim::stabilizer(*graph, v));
        values[v.label()] = sign ? *sign : 0;
        pass = pass && sign == 1;
      }
      out.write_json("verification.json",
                     {{"parameters", params}, {"report", {{"expectations", values}, {"pass", pass}}}});
    }
  } else {
    throw InvalidInput("backend must be auto, dense or tableau");
  }
}

// ---------------------------------------------------------------- script

void cmd_script(const ScriptArgs& a, const Common&, qmsim::cli::RunOutput& out) {
  const double r2 = a.r_path2 < 0.0 ? a.r : a.r_path2;
  qmsim::ProtocolScript script;
  std::optional<qmsim::ClusterGraph> graph;
  if (a.protocol == "tree7") {
    script = qmsim::script_tree7(a.r, r2);
    graph = qmsim::tree7_graph();
  } else if (a.protocol == "chain3") {
    const auto anc = qmsim::QubitId::ancilla();
    const std::array<qmsim::QubitId, 3> ph{qmsim::QubitId::photon(1), qmsim::QubitId::photon(2),
                                           qmsim::QubitId::photon(3)};
    script.qubits = {anc, ph[0], ph[1], ph[2]};
    qmsim::append_chain(script, anc, ph, a.r);
    graph = qmsim::path_graph({ph[0], ph[1], ph[2]});
  } else if (a.protocol == "2d") {
    script = qmsim::script_2d(a.width, a.nodes, a.r);
    if (a.r == 1.0) {
      // Append the local Cliffords that map the output onto its graph form.
      auto induced = qmsim::tableau_run(script).induced_graph();
      script.ops.insert(script.ops.end(), induced.local_ops.begin(), induced.local_ops.end());
      graph = std::move(induced.graph);
    }
  } else {
    throw InvalidInput("protocol must be chain3, tree7 or 2d");
  }
  out.write_json("script.json", qmsim::io::script_to_json(script));
  if (graph) out.write_json("graph.json", qmsim::io::graph_to_json(*graph));
}

// --config <file>: JSON object keyed by long flag names; flags given on the
// command line take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  const json cfg = qmsim::io::read_json_file(path);
  if (!cfg.is_object()) throw InvalidInput("config file must hold a JSON object");
  auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.starts_with(flag + "="); });
  };
  for (auto it = cfg.begin(); it != cfg.end(); ++it) {
    const std::string flag = "--" + it.key();
    if (given(flag)) continue;
    const json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string text;
    if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) text += (i ? "," : "") + fmt_value(v[i]);
    } else {
      text = fmt_value(v);
    }
    args.push_back(flag);
    args.push_back(text);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qmsim: quantum-metasurface cluster-state simulation toolkit"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_version_flag("--version", std::string(qmsim::cli::kVersion) + " (" + QMSIM_GIT_DESCRIBE + ")");

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", common.seed, "Master seed")->capture_default_str();
    sub->add_option("--jobs", common.jobs, "Worker threads (default: QMSIM_JOBS or all cores)");
  };

  ReflectivityArgs refl;
  auto* r = app.add_subcommand("reflectivity", "Disordered-array reflection ensembles");
  r->add_option("--nx", refl.nx)->capture_default_str();
  r->add_option("--ny", refl.ny)->capture_default_str();
  r->add_option("--spacing", refl.spacing, "Lattice constant in wavelengths")->capture_default_str();
  r->add_option("--waist", refl.waist, "Beam waist in wavelengths")->capture_default_str();
  r->add_option("--wavelength-um", refl.wavelength_um)->capture_default_str();
  r->add_option("--sigma", refl.sigma, "Disorder s.d. in lattice constants (comma list)")->delimiter(',');
  r->add_option("--runs", refl.runs)->capture_default_str();
  r->add_option("--disorder-dim", refl.disorder_dim, "inplane or 3d")->capture_default_str();
  r->add_option("--detuning", refl.detuning, "Detuning in single-atom linewidths")->capture_default_str();
  r->add_option("--plane-z", refl.plane_z, "Overlap plane in wavelengths (< 0)")->capture_default_str();
  r->add_option("--grid", refl.grid, "Overlap samples per axis")->capture_default_str();
  r->add_flag("--field-map", refl.field_map, "Also emit the x-z total-field map");
  add_common(r);

  TreeArgs tree;
  auto* tf = app.add_subcommand("tree-fidelity", "Closed-form and simulated tree fidelity");
  tf->add_option("--r", tree.r, "Reflection coefficients (comma list)")->delimiter(',');
  add_common(tf);

  TwoDArgs twod;
  auto* td = app.add_subcommand("2d", "2D cluster fidelity versus size");
  td->add_option("--n-min", twod.n_min)->capture_default_str();
  td->add_option("--n-max", twod.n_max)->capture_default_str();
  td->add_option("--n-step", twod.n_step)->capture_default_str();
  td->add_option("--scenario-r", twod.scenario_r)->delimiter(',');
  td->add_option("--per-photon-source", twod.per_photon_source, "path2 or explicit")->capture_default_str();
  td->add_option("--per-photon-fidelity", twod.per_photon_fidelity)->delimiter(',');
  add_common(td);

  BlockadeArgs blk;
  auto* bl = app.add_subcommand("blockade", "Tree fidelity versus optical-path separation");
  bl->add_option("--mode", blk.mode, "symmetric, path1-centered or both")->capture_default_str();
  bl->add_option("--s-max", blk.s_max, "Largest separation in units of R_c")->capture_default_str();
  bl->add_option("--s-steps", blk.s_steps)->capture_default_str();
  bl->add_option("--c6", blk.c6, "rad/s um^6")->capture_default_str();
  bl->add_option("--linewidth", blk.linewidth, "gamma + Gamma, rad/s")->capture_default_str();
  bl->add_option("--rabi", blk.rabi, "Pump Rabi frequency, rad/s")->capture_default_str();
  bl->add_flag("--magnitude", blk.magnitude, "Use |r| instead of complex r");
  add_common(bl);

  SimulateArgs sim;
  auto* sm = app.add_subcommand("simulate", "Run a protocol script and verify stabilizers");
  sm->add_option("--script", sim.script, "Protocol script JSON")->required();
  sm->add_option("--graph", sim.graph, "Cluster graph JSON to verify against");
  sm->add_option("--backend", sim.backend, "auto, dense or tableau")->capture_default_str();
  sm->add_option("--tolerance", sim.tolerance)->capture_default_str();
  add_common(sm);

  ScriptArgs scr;
  auto* sc = app.add_subcommand("script", "Emit a protocol script (and its graph) as JSON");
  sc->add_option("--protocol", scr.protocol, "chain3, tree7 or 2d")->capture_default_str();
  sc->add_option("--r", scr.r)->capture_default_str();
  sc->add_option("--r-path2", scr.r_path2, "CZ coefficient for tree7 (default: --r)");
  sc->add_option("--width", scr.width)->capture_default_str();
  sc->add_option("--nodes", scr.nodes)->capture_default_str();
  add_common(sc);

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "qmsim: " << e.what() << "\n";
    return 2;
  } catch (const InvalidInput& e) {
    std::cerr << "qmsim: " << e.what() << "\n";
    return 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  json config = json::object();
  for (const CLI::Option* opt : chosen->get_options()) {
    if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
    const auto results = opt->results();
    const std::string key = opt->get_lnames().front();
    if (results.empty())
      config[key] = opt->get_default_str();
    else if (results.size() == 1)
      config[key] = results.front();
    else
      config[key] = results;
  }
  config["jobs_resolved"] = 0;

  std::optional<qmsim::cli::RunOutput> out;
  try {
    config["jobs_resolved"] = resolve_jobs(common.jobs);
    out.emplace(common.out, chosen->get_name(), config);
    const std::string name = chosen->get_name();
    if (name == "reflectivity") cmd_reflectivity(refl, common, *out);
    else if (name == "tree-fidelity") cmd_tree_fidelity(tree, common, *out);
    else if (name == "2d") cmd_2d(twod, common, *out);
    else if (name == "blockade") cmd_blockade(blk, common, *out);
    else if (name == "simulate") cmd_simulate(sim, common, *out);
    else if (name == "script") cmd_script(scr, common, *out);
    out->finish();
  } catch (const InvalidInput& e) {
    if (out) out->discard();
    std::cerr << "qmsim: " << e.what() << "\n";
    return 2;
  } catch (const qmsim::NumericalFailure& e) {
    if (out) out->discard();
    std::cerr << "qmsim: numerical failure: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    if (out) out->discard();
    std::cerr << "qmsim: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
