// Copyright 2026 The nveng authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// nveng: command-line front end for the two-qubit NV entanglement engine.
//
// One config file (INI sections, '#' comments) plus flag overrides, flags
// winning; the fully resolved configuration is embedded into the run manifest
// of every producing command, so any run can be reproduced from its manifest
// alone.  All file outputs are plain text.

#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nv/config.hpp"
#include "nv/entanglement.hpp"
#include "nv/experiments.hpp"
#include "nv/io.hpp"
#include "nv/lindblad.hpp"
#include "nv/nvphys.hpp"
#include "nv/version.hpp"

namespace {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  int threads = 1;
  double margin = 10.0;
  bool threads_set = false;
  bool margin_set = false;
  bool out_set = false;
};

// Layered resolution: defaults < config file < command-line flags.  The
// resulting Config carries every value the run actually uses.
struct Resolved {
  nv::Config cfg;
  int threads = 1;
  double margin = 10.0;
  std::string out_dir = ".";
};

Resolved resolve(const GlobalOptions& opt) {
  Resolved r;
  if (!opt.config_path.empty()) r.cfg = nv::Config::load(opt.config_path);
  r.threads = opt.threads_set ? opt.threads : r.cfg.get_int("run.threads", 1);
  r.margin = opt.margin_set ? opt.margin : r.cfg.get_double("run.margin", 10.0);
  r.out_dir = opt.out_set ? opt.out_dir : r.cfg.get_string("run.out", ".");
  if (r.threads < 1) throw nv::ConfigError("threads must be >= 1", 0, "run.threads");
  if (!(r.margin > 0)) throw nv::ConfigError("margin must be > 0", 0, "run.margin");
  r.cfg.set("run.threads", std::to_string(r.threads));
  r.cfg.set("run.margin", nv::format_double(r.margin));
  r.cfg.set("run.out", r.out_dir);
  return r;
}

nv::TempUnit parse_temp_unit(const std::string& name) {
  if (name == "hertz" || name == "Hz" || name == "hz")
    return nv::TempUnit::hertz;
  if (name == "kelvin" || name == "K" || name == "k")
    return nv::TempUnit::kelvin;
  throw nv::ConfigError("unknown temperature unit '" + name +
                            "' (expected hertz or kelvin)",
                        0, "engine.hot_temperature_unit");
}

// Engine parameters shared by steady/evolve.  Occupations resolve in layers:
// an explicit occupation key wins over a polarization, which wins over the
// hot-bath temperature.
nv::EngineParams engine_from_config(Resolved& r) {
  const nv::PhysicalConstants c = nv::nv_carbon13_constants();
  nv::EngineParams p;
  const double eps = r.cfg.get_double("engine.qubit_energy", 1.1e6);
  p.eps_L = r.cfg.get_double("engine.eps_L", eps);
  p.eps_R = r.cfg.get_double("engine.eps_R", eps);
  p.g = r.cfg.get_double("engine.g", 60e3);
  const double abundance = r.cfg.get_double("engine.abundance", 1.1);
  const double gamma = nv::gamma1_scaled(abundance);
  p.Gamma_L = r.cfg.get_double("engine.Gamma_L", gamma);
  p.Gamma_R = r.cfg.get_double("engine.Gamma_R", gamma);
  const double t_hot = r.cfg.get_double("engine.hot_temperature", 1e9);
  const nv::TempUnit unit = parse_temp_unit(
      r.cfg.get_string("engine.hot_temperature_unit", "hertz"));
  const double p_hot =
      nv::polarization_from_temperature(p.eps_L, t_hot, unit, c);
  p.n_L = r.cfg.has("engine.hot_occupation")
              ? r.cfg.get_double("engine.hot_occupation", 0)
              : nv::occupation_from_polarization(p_hot);
  const double p_cold = r.cfg.get_double("engine.cold_polarization", 1.0);
  p.n_R = r.cfg.has("engine.cold_occupation")
              ? r.cfg.get_double("engine.cold_occupation", 0)
              : nv::occupation_from_polarization(p_cold);
  // Echo the resolved values back into the manifest config.
  r.cfg.set("engine.qubit_energy", nv::format_double(eps));
  r.cfg.set("engine.eps_L", nv::format_double(p.eps_L));
  r.cfg.set("engine.eps_R", nv::format_double(p.eps_R));
  r.cfg.set("engine.g", nv::format_double(p.g));
  r.cfg.set("engine.abundance", nv::format_double(abundance));
  r.cfg.set("engine.Gamma_L", nv::format_double(p.Gamma_L));
  r.cfg.set("engine.Gamma_R", nv::format_double(p.Gamma_R));
  r.cfg.set("engine.hot_occupation", nv::format_double(p.n_L));
  r.cfg.set("engine.cold_occupation", nv::format_double(p.n_R));
  return p;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw nv::ConfigError("grid needs >= 1 point", 0, "sweep");
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    v[static_cast<std::size_t>(i)] =
        points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return v;
}

nv::SweepSpec sweep_from_config(Resolved& r) {
  nv::SweepSpec spec = nv::default_sweep_spec();
  spec.threads = r.threads;
  spec.qubit_energy = r.cfg.get_double("engine.qubit_energy", 1.1e6);
  spec.hot_temperature = r.cfg.get_double("engine.hot_temperature", 1e9);
  spec.hot_temperature_unit = parse_temp_unit(
      r.cfg.get_string("engine.hot_temperature_unit", "hertz"));
  const double abundance = r.cfg.get_double("engine.abundance", 1.1);
  spec.concentrations[0] = abundance;
  spec.polarizations = linear_grid(
      r.cfg.get_double("sweep.polarization_min", 0.0),
      r.cfg.get_double("sweep.polarization_max", 1.0),
      r.cfg.get_int("sweep.polarization_points", 21));
  spec.g_grid = linear_grid(r.cfg.get_double("sweep.g_min", 15e3),
                            r.cfg.get_double("sweep.g_max", 300e3),
                            r.cfg.get_int("sweep.g_points", 20));
  spec.objective =
      nv::parse_objective(r.cfg.get_string("sweep.objective",
                                           nv::objective_name(spec.objective)));
  r.cfg.set("engine.qubit_energy", nv::format_double(spec.qubit_energy));
  r.cfg.set("engine.hot_temperature", nv::format_double(spec.hot_temperature));
  r.cfg.set("engine.hot_temperature_unit",
            spec.hot_temperature_unit == nv::TempUnit::hertz ? "hertz"
                                                             : "kelvin");
  r.cfg.set("engine.abundance", nv::format_double(abundance));
  r.cfg.set("sweep.polarization_min",
            nv::format_double(spec.polarizations.front()));
  r.cfg.set("sweep.polarization_max",
            nv::format_double(spec.polarizations.back()));
  r.cfg.set("sweep.polarization_points",
            std::to_string(spec.polarizations.size()));
  r.cfg.set("sweep.g_min", nv::format_double(spec.g_grid.front()));
  r.cfg.set("sweep.g_max", nv::format_double(spec.g_grid.back()));
  r.cfg.set("sweep.g_points", std::to_string(spec.g_grid.size()));
  r.cfg.set("sweep.objective", nv::objective_name(spec.objective));
  return spec;
}

void ensure_out_dir(const Resolved& r) {
  fs::create_directories(r.out_dir);
}

std::string join_out(const Resolved& r, const std::string& name) {
  return (fs::path(r.out_dir) / name).string();
}

int cmd_params(const GlobalOptions& opt, const std::string& file) {
  Resolved r = resolve(opt);
  const nv::PhysicalConstants c = nv::nv_carbon13_constants();
  nv::GeometryConfig geom;
  geom.r = r.cfg.get_double("geometry.r_nm", 10.0) * 1e-9;
  geom.theta = r.cfg.get_double("geometry.theta_rad", 0.0);
  geom.R_min = r.cfg.get_double("geometry.R_min_nm", 0.2) * 1e-9;
  geom.R_max = r.cfg.get_double("geometry.R_max_nm", 1.33) * 1e-9;
  geom.d_sep = r.cfg.get_double("geometry.d_sep_nm", 20.0) * 1e-9;
  const double abundance = r.cfg.get_double("engine.abundance", 1.1);
  geom.n_C = nv::abundance_to_density(abundance);
  nv::validate_geometry(geom);

  const double b_cr = nv::cross_relaxation_field(c);
  const double eps = nv::qubit_energy(b_cr, c);
  const double g = nv::dipolar_coupling(geom.r, geom.theta, c);
  const double gamma1 = nv::gamma1_scaled(abundance);
  const double gamma2 = nv::gamma2_scaled(abundance);
  const double brms2 = nv::b_rms_squared(geom, c);
  const double spins = nv::influence_spin_count(geom);
  const double diff_const = nv::diffusion_constant(abundance);
  const double diff_time = nv::diffusion_time(geom.d_sep * 1e9, diff_const);

  std::ostringstream os;
  os.precision(10);
  os << "derived engine parameters (abundance " << abundance << " %)\n";
  os << "  B_CR                    = " << b_cr * 1e3 << " mT\n";
  os << "  eps(B_CR)               = " << eps << " Hz\n";
  os << "  g(r, theta)             = " << g << " Hz (signed)\n";
  os << "  Gamma_1                 = " << gamma1 << " Hz\n";
  os << "  Gamma_2                 = " << gamma2 << " Hz\n";
  os << "  b_rms                   = " << std::sqrt(brms2) * 1e6 << " uT\n";
  os << "  influence spin count    = " << spins << "\n";
  os << "  diffusion constant      = " << diff_const << " nm^2/s\n";
  os << "  diffusion time (d_sep)  = " << diff_time << " s\n";
  const double g_abs = std::abs(g);
  if (g_abs > 1e-9) {  // sub-nanohertz remnants (magic angle) count as zero
    const nv::WindowVerdict v =
        nv::coupling_window_check(g_abs, eps, gamma1, r.margin);
    os << "  coupling window         : " << v.message << "\n";
  } else {
    os << "  coupling window         : no coupling (g = 0 at this geometry)\n";
  }
  os << "consistency\n";
  std::istringstream rep(nv::consistency_report(geom, c));
  for (std::string line; std::getline(rep, line);)
    os << "  " << line << "\n";
  std::cout << os.str();
  if (!file.empty()) {
    ensure_out_dir(r);
    nv::write_text_file(join_out(r, file), os.str());
  }
  return 0;
}

int cmd_steady(const GlobalOptions& opt) {
  Resolved r = resolve(opt);
  const nv::EngineParams p = engine_from_config(r);
  nv::SteadyStateInfo info;
  const nv::Matrix4cd rho = nv::steady_state<double>(p, &info);
  const auto conc = nv::concurrence_x(rho);
  const double j_l = nv::heat_current<double>(p, rho, nv::Side::L);
  const double j_r = nv::heat_current<double>(p, rho, nv::Side::R);
  ensure_out_dir(r);
  nv::write_text_file(join_out(r, "steady_state.txt"),
                      nv::density_matrix_to_text(rho));
  nv::write_manifest(join_out(r, "run_manifest.json"), r.cfg,
                     nv::sweep_spec_hash(nv::default_sweep_spec()),
                     {{"steady_state.txt", "density-grid"}});
  const double hbar = nv::nv_carbon13_constants().hbar;
  std::cout << "C = " << nv::format_double(conc.value) << "\n"
            << "J_L = " << nv::format_double(j_l) << " Hz^2 ("
            << nv::format_double(nv::heat_current_aj_per_s(j_l, hbar))
            << " aJ/s)\n"
            << "J_R = " << nv::format_double(j_r) << " Hz^2 ("
            << nv::format_double(nv::heat_current_aj_per_s(j_r, hbar))
            << " aJ/s)\n"
            << "residual_rel = " << nv::format_double(info.residual_rel)
            << "\n";
  return 0;
}

int cmd_evolve(const GlobalOptions& opt) {
  Resolved r = resolve(opt);
  const nv::EngineParams p = engine_from_config(r);
  const int points = r.cfg.get_int("evolve.points", 400);
  if (points < 2)
    throw nv::ConfigError("need >= 2 time points", 0, "evolve.points");
  r.cfg.set("evolve.points", std::to_string(points));
  const double gamma_min = std::min(p.Gamma_L, p.Gamma_R);
  if (!(gamma_min > 0))
    throw nv::ConfigError("evolve needs positive rates", 0, "engine.Gamma_L");
  std::vector<double> times(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    times[static_cast<std::size_t>(i)] =
        std::pow(10.0, -3.0 + 5.0 * i / (points - 1)) / gamma_min;
  const nv::Matrix4cd rho0 = nv::product_thermal_state<double>(p.n_L, p.n_R);
  const auto traj = nv::evolve<double>(p, rho0, times);
  nv::TraceResult trace;
  trace.times = times;
  trace.concurrence.resize(traj.size());
  trace.heat_L.resize(traj.size());
  trace.heat_R.resize(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    trace.concurrence[i] = nv::concurrence_x(traj[i]).value;
    trace.heat_L[i] = nv::heat_current<double>(p, traj[i], nv::Side::L);
    trace.heat_R[i] = nv::heat_current<double>(p, traj[i], nv::Side::R);
    if (trace.concurrence[i] > trace.peak_value) {
      trace.peak_value = trace.concurrence[i];
      trace.peak_time = times[i];
    }
  }
  ensure_out_dir(r);
  nv::write_trajectory_csv(join_out(r, "trajectory.csv"), times, traj);
  nv::write_trace_csv(join_out(r, "trace.csv"), trace);
  nv::write_manifest(join_out(r, "run_manifest.json"), r.cfg,
                     nv::sweep_spec_hash(nv::default_sweep_spec()),
                     {{"trajectory.csv", "trajectory-csv"},
                      {"trace.csv", "trace-csv"}});
  std::cout << "peak C = " << nv::format_double(trace.peak_value) << " at t = "
            << nv::format_double(trace.peak_time) << " s\n"
            << "final C = " << nv::format_double(trace.concurrence.back())
            << "\n";
  return 0;
}

int cmd_sweep(const GlobalOptions& opt) {
  Resolved r = resolve(opt);
  nv::SweepSpec spec = sweep_from_config(r);
  const nv::SweepResult res = nv::steady_contour(spec);
  ensure_out_dir(r);
  nv::write_contour_csv(join_out(r, "concurrence.csv"), res.polarizations,
                        res.g_grid, res.concurrence);
  nv::write_contour_csv(join_out(r, "heat_L.csv"), res.polarizations,
                        res.g_grid, res.heat_L);
  nv::write_contour_csv(join_out(r, "heat_R.csv"), res.polarizations,
                        res.g_grid, res.heat_R);
  nv::write_manifest(join_out(r, "run_manifest.json"), r.cfg,
                     res.provenance.params_hash,
                     {{"concurrence.csv", "contour-csv"},
                      {"heat_L.csv", "contour-csv"},
                      {"heat_R.csv", "contour-csv"}});
  Eigen::Index imax = 0, jmax = 0;
  const double cmax = res.concurrence.maxCoeff(&imax, &jmax);
  std::cout << "max C_ss = " << nv::format_double(cmax) << " at polarization "
            << nv::format_double(
                   res.polarizations[static_cast<std::size_t>(imax)])
            << ", g = "
            << nv::format_double(res.g_grid[static_cast<std::size_t>(jmax)])
            << " Hz\n";
  return 0;
}

int cmd_optimize(const GlobalOptions& opt, const std::string& objective_flag,
                 double abundance_flag) {
  Resolved r = resolve(opt);
  const double abundance = abundance_flag > 0
                               ? abundance_flag
                               : r.cfg.get_double("optimize.abundance", 1.1);
  const std::string obj_name =
      !objective_flag.empty()
          ? objective_flag
          : r.cfg.get_string("optimize.objective",
                             nv::objective_name(nv::kDefaultObjective));
  const nv::Objective objective = nv::parse_objective(obj_name);
  const double lo = r.cfg.get_double("optimize.bound_lo", 0.0);
  const double hi = r.cfg.get_double("optimize.bound_hi", 0.0);
  r.cfg.set("optimize.abundance", nv::format_double(abundance));
  r.cfg.set("optimize.objective", obj_name);
  nv::SweepSpec spec = nv::default_sweep_spec();
  spec.threads = r.threads;
  const nv::OptimalG res = nv::optimal_g(abundance, objective, lo, hi, spec);
  std::ostringstream os;
  os << "objective = " << obj_name << "\n"
     << "abundance = " << nv::format_double(abundance) << " %\n"
     << "g_star = " << nv::format_double(res.g_star) << " Hz\n"
     << "value = " << nv::format_double(res.value) << "\n";
  if (res.warning_non_unimodal)
    os << "warning = bracket not interior-unimodal; best grid point "
          "returned\n";
  std::cout << os.str();
  ensure_out_dir(r);
  nv::write_text_file(join_out(r, "optimize.txt"), os.str());
  nv::write_manifest(join_out(r, "run_manifest.json"), r.cfg,
                     nv::sweep_spec_hash(spec),
                     {{"optimize.txt", "optimize-report"}});
  return 0;
}

int cmd_feasibility(const GlobalOptions& opt) {
  Resolved r = resolve(opt);
  const double abundance = r.cfg.get_double("engine.abundance", 1.1);
  const double r_nm = r.cfg.get_double("geometry.r_nm", 10.0);
  const double theta = r.cfg.get_double("geometry.theta_rad", 0.0);
  const double d_sep_nm = r.cfg.get_double("geometry.d_sep_nm", 20.0);
  r.cfg.set("engine.abundance", nv::format_double(abundance));
  r.cfg.set("geometry.r_nm", nv::format_double(r_nm));
  r.cfg.set("geometry.theta_rad", nv::format_double(theta));
  r.cfg.set("geometry.d_sep_nm", nv::format_double(d_sep_nm));
  const nv::FeasibilityReport rep = nv::feasibility_report(
      abundance, r_nm * 1e-9, theta, d_sep_nm * 1e-9, r.margin);
  std::cout << rep.text;
  ensure_out_dir(r);
  nv::write_text_file(join_out(r, "feasibility.txt"), rep.text);
  nv::write_manifest(join_out(r, "run_manifest.json"), r.cfg,
                     nv::sweep_spec_hash(nv::default_sweep_spec()),
                     {{"feasibility.txt", "feasibility-report"}});
  return rep.all_pass ? 0 : 0;  // warnings are reported, never fatal
}

int cmd_registry(const GlobalOptions& opt, const std::string& file,
                 const std::string& load_path) {
  const auto records = load_path.empty() ? nv::builtin_registry()
                                         : nv::load_registry(load_path);
  const std::string text = nv::registry_to_text(records);
  std::cout << text;
  if (!file.empty()) {
    Resolved r = resolve(opt);
    ensure_out_dir(r);
    nv::write_text_file(join_out(r, file), text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "nveng: deterministic simulator of a two-qubit dissipation-driven "
      "entanglement engine on NV centers"};
  app.set_version_flag("--version", nv::kVersion);
  app.require_subcommand(1);

  GlobalOptions opt;
  app.add_option("--config", opt.config_path,
                 "INI config file; flags override config values");
  app.add_option("--out", opt.out_dir, "output directory (default '.')")
      ->each([&](const std::string&) { opt.out_set = true; });
  app.add_option("--threads", opt.threads,
                 "worker threads for grid evaluation (default 1; results are "
                 "identical for any value)")
      ->each([&](const std::string&) { opt.threads_set = true; });
  app.add_option("--margin", opt.margin,
                 "the 'much less than' factor in the coupling window check "
                 "(default 10)")
      ->each([&](const std::string&) { opt.margin_set = true; });

  std::string params_file;
  auto* sc_params = app.add_subcommand(
      "params", "derive and print the physical parameter table");
  sc_params->add_option("--file", params_file,
                        "also write the table to this file in --out");

  auto* sc_steady = app.add_subcommand(
      "steady", "solve one steady state; writes the density grid + manifest");
  auto* sc_evolve = app.add_subcommand(
      "evolve", "propagate one trajectory; writes trajectory/trace CSVs");
  auto* sc_sweep = app.add_subcommand(
      "sweep", "steady-state contour over (polarization, g); writes CSVs");

  std::string objective_flag;
  double abundance_flag = 0;
  auto* sc_optimize = app.add_subcommand(
      "optimize", "golden-section search for the optimal coupling");
  sc_optimize->add_option("--objective", objective_flag,
                          "steady or transient_peak (default from config, "
                          "else steady)");
  sc_optimize->add_option("--abundance", abundance_flag,
                          "carbon-13 abundance in percent");

  auto* sc_feasibility = app.add_subcommand(
      "feasibility", "check geometry against the operating requirements");

  std::string registry_file, registry_load;
  auto* sc_registry = app.add_subcommand(
      "registry", "dump the nuclear-species table");
  sc_registry->add_option("--file", registry_file,
                          "also write the table to this file in --out");
  sc_registry->add_option("--load", registry_load,
                          "parse and validate this registry file, then dump "
                          "it instead of the builtin table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sc_params->parsed()) return cmd_params(opt, params_file);
    if (sc_steady->parsed()) return cmd_steady(opt);
    if (sc_evolve->parsed()) return cmd_evolve(opt);
    if (sc_sweep->parsed()) return cmd_sweep(opt);
    if (sc_optimize->parsed())
      return cmd_optimize(opt, objective_flag, abundance_flag);
    if (sc_feasibility->parsed()) return cmd_feasibility(opt);
    if (sc_registry->parsed())
      return cmd_registry(opt, registry_file, registry_load);
  } catch (const nv::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
