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

#include "nv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "nv/entanglement.hpp"
#include "nv/lindblad.hpp"
#include "nv/version.hpp"

namespace nv {

const char* objective_name(Objective obj) {
  return obj == Objective::steady ? "steady" : "transient_peak";
}

Objective parse_objective(const std::string& name) {
  if (name == "steady") return Objective::steady;
  if (name == "transient_peak") return Objective::transient_peak;
  throw std::invalid_argument("unknown objective '" + name +
                              "' (expected steady or transient_peak)");
}

SweepSpec default_sweep_spec() {
  SweepSpec spec;
  spec.polarizations.resize(21);
  for (int i = 0; i < 21; ++i) spec.polarizations[static_cast<std::size_t>(i)] = i * 0.05;
  spec.g_grid.resize(20);
  for (int i = 0; i < 20; ++i)
    spec.g_grid[static_cast<std::size_t>(i)] = 15e3 * (i + 1);
  spec.concentrations = {1.1, 3.0, 10.0, 30.0};
  spec.hot_temperature = 1e9;
  spec.hot_temperature_unit = TempUnit::hertz;
  spec.qubit_energy = 1.1e6;
  spec.objective = kDefaultObjective;
  spec.threads = 1;
  return spec;
}

std::string sweep_spec_error(const SweepSpec& spec) {
  auto ascending_in = [](const std::vector<double>& v, double lo, double hi,
                         bool open_lo) {
    if (v.empty()) return false;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!(v[i] >= lo) || !(v[i] <= hi)) return false;
      if (open_lo && !(v[i] > lo)) return false;
      if (i > 0 && !(v[i] > v[i - 1])) return false;
    }
    return true;
  };
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (!ascending_in(spec.polarizations, 0.0, 1.0, false))
    return "polarization grid must be nonempty, ascending, within [0,1]";
  if (!ascending_in(spec.g_grid, 0.0, inf, true))
    return "g grid must be nonempty, ascending, positive";
  if (spec.concentrations.empty()) return "concentration list must be nonempty";
  for (double cpc : spec.concentrations)
    if (!(cpc > 0)) return "concentrations must be positive percents";
  if (!(spec.qubit_energy > 0)) return "qubit energy must be positive";
  if (spec.hot_temperature < 0) return "hot temperature must be nonnegative";
  if (!spec.time_grid.empty() &&
      !ascending_in(spec.time_grid, 0.0, inf, false))
    return "time grid must be ascending and nonnegative";
  if (spec.threads < 1) return "threads must be >= 1";
  return {};
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body) {
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(n ? n : 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> default_time_grid(double Gamma) {
  if (!(Gamma > 0))
    throw std::invalid_argument("default_time_grid: Gamma must be positive");
  constexpr int points = 400;
  std::vector<double> t(points);
  for (int i = 0; i < points; ++i) {
    const double expo = -3.0 + 5.0 * i / (points - 1);
    t[static_cast<std::size_t>(i)] = std::pow(10.0, expo) / Gamma;
  }
  return t;
}

std::string canonical_spec_text(const SweepSpec& spec) {
  std::ostringstream os;
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf << ' ';
  };
  os << "polarizations: ";
  for (double p : spec.polarizations) put(p);
  os << "\ng_grid: ";
  for (double g : spec.g_grid) put(g);
  os << "\nconcentrations: ";
  for (double cpc : spec.concentrations) put(cpc);
  os << "\nhot_temperature: ";
  put(spec.hot_temperature);
  os << (spec.hot_temperature_unit == TempUnit::hertz ? "Hz" : "K");
  os << "\nqubit_energy: ";
  put(spec.qubit_energy);
  os << "\ntime_grid: ";
  for (double t : spec.time_grid) put(t);
  os << "\nobjective: " << objective_name(spec.objective) << '\n';
  return os.str();
}

std::string sweep_spec_hash(const SweepSpec& spec) {
  const std::string text = canonical_spec_text(spec);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64 offset basis
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char out[19];
  std::snprintf(out, sizeof out, "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(out);
}

namespace {

EngineParams grid_point_params(const SweepSpec& spec, double polarization,
                               double g, const PhysicalConstants& c) {
  EngineParams p;
  p.eps_L = spec.qubit_energy;
  p.eps_R = spec.qubit_energy;
  p.g = g;
  const double Gamma = gamma1_scaled(spec.concentrations.front());
  p.Gamma_L = Gamma;
  p.Gamma_R = Gamma;
  const double p_hot = polarization_from_temperature(
      spec.qubit_energy, spec.hot_temperature, spec.hot_temperature_unit, c);
  p.n_L = occupation_from_polarization(p_hot);
  p.n_R = occupation_from_polarization(polarization);
  return p;
}

struct TransientSetup {
  EngineParams params;  // with params.g to be filled per evaluation
  std::vector<double> times;
};

TransientSetup transient_setup(const SweepSpec& spec, double concentration,
                               const PhysicalConstants& c) {
  TransientSetup setup;
  const double Gamma = gamma1_scaled(concentration);
  setup.params.eps_L = spec.qubit_energy;
  setup.params.eps_R = spec.qubit_energy;
  setup.params.Gamma_L = Gamma;
  setup.params.Gamma_R = Gamma;
  const double p_hot = polarization_from_temperature(
      spec.qubit_energy, spec.hot_temperature, spec.hot_temperature_unit, c);
  setup.params.n_L = occupation_from_polarization(p_hot);
  setup.params.n_R = 0.0;  // cold bath fully polarized
  setup.times =
      spec.time_grid.empty() ? default_time_grid(Gamma) : spec.time_grid;
  return setup;
}

double transient_peak_value(const TransientSetup& setup, double g) {
  EngineParams p = setup.params;
  p.g = g;
  const Matrix4cd rho0 =
      product_thermal_state<double>(p.n_L, p.n_R);
  const auto traj = evolve<double>(p, rho0, setup.times);
  double peak = 0;
  for (const auto& rho : traj)
    peak = std::max(peak, concurrence_x(rho).value);
  return peak;
}

double steady_value(const TransientSetup& setup, double g) {
  EngineParams p = setup.params;
  p.g = g;
  return concurrence_x(steady_state<double>(p)).value;
}

}  // namespace

SweepResult steady_contour(const SweepSpec& spec) {
  if (auto err = sweep_spec_error(spec); !err.empty())
    throw std::invalid_argument("steady_contour: " + err);
  const PhysicalConstants c = nv_carbon13_constants();
  const auto rows = spec.polarizations.size();
  const auto cols = spec.g_grid.size();
  SweepResult res;
  res.polarizations = spec.polarizations;
  res.g_grid = spec.g_grid;
  res.concurrence.resize(static_cast<Eigen::Index>(rows),
                         static_cast<Eigen::Index>(cols));
  res.heat_L.resize(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  res.heat_R.resize(static_cast<Eigen::Index>(rows),
                    static_cast<Eigen::Index>(cols));
  parallel_for(rows * cols, spec.threads, [&](std::size_t k) {
    const auto i = static_cast<Eigen::Index>(k / cols);
    const auto j = static_cast<Eigen::Index>(k % cols);
    const double polarization = spec.polarizations[static_cast<std::size_t>(i)];
    const double g = spec.g_grid[static_cast<std::size_t>(j)];
    const EngineParams p = grid_point_params(spec, polarization, g, c);
    SteadyStateInfo info;
    Matrix4cd rho;
    try {
      rho = steady_state<double>(p, &info);
    } catch (const std::exception& e) {
      throw std::runtime_error(
          "steady_contour: solver failure at grid point (polarization = " +
          std::to_string(polarization) + ", g = " + std::to_string(g) +
          " Hz): " + e.what());
    }
    res.concurrence(i, j) = concurrence_x(rho).value;
    res.heat_L(i, j) = heat_current<double>(p, rho, Side::L);
    res.heat_R(i, j) = heat_current<double>(p, rho, Side::R);
  });
  res.optimal_g_per_row.resize(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    Eigen::Index jmax = 0;
    res.concurrence.row(static_cast<Eigen::Index>(i)).maxCoeff(&jmax);
    res.optimal_g_per_row[i] = spec.g_grid[static_cast<std::size_t>(jmax)];
  }
  res.provenance.params_hash = sweep_spec_hash(spec);
  res.provenance.code_version = kVersion;
  return res;
}

OptimalG optimal_g(double concentration_pct, Objective objective, double lo,
                   double hi, const SweepSpec& spec) {
  if (!(concentration_pct > 0))
    throw std::invalid_argument("optimal_g: concentration must be positive");
  const double Gamma = gamma1_scaled(concentration_pct);
  if (lo == 0 && hi == 0) {
    lo = 0.01 * Gamma;
    hi = 2.0 * Gamma;
  }
  if (!(lo > 0) || !(hi > lo))
    throw std::invalid_argument("optimal_g: need 0 < lo < hi");
  const PhysicalConstants c = nv_carbon13_constants();
  const TransientSetup setup = transient_setup(spec, concentration_pct, c);
  auto value_at = [&](double g) {
    return objective == Objective::steady ? steady_value(setup, g)
                                          : transient_peak_value(setup, g);
  };

  constexpr int coarse_points = 25;
  std::array<double, coarse_points> gs{}, vals{};
  for (int i = 0; i < coarse_points; ++i) {
    gs[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * i / (coarse_points - 1);
    vals[static_cast<std::size_t>(i)] =
        value_at(gs[static_cast<std::size_t>(i)]);
  }
  int best = 0;
  for (int i = 1; i < coarse_points; ++i)
    if (vals[static_cast<std::size_t>(i)] >
        vals[static_cast<std::size_t>(best)])
      best = i;

  OptimalG result;
  result.bound_lo = lo;
  result.bound_hi = hi;
  if (best == 0 || best == coarse_points - 1) {
    // Maximum on the bracket edge: the objective is not interior-unimodal on
    // [lo, hi].  Report the best grid point honestly instead of refining a
    // non-existent interior optimum.
    result.g_star = gs[static_cast<std::size_t>(best)];
    result.value = vals[static_cast<std::size_t>(best)];
    result.warning_non_unimodal = true;
    return result;
  }

  // Golden-section refinement inside the bracketing coarse cells.
  double a = gs[static_cast<std::size_t>(best - 1)];
  double b = gs[static_cast<std::size_t>(best + 1)];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = value_at(x1);
  double f2 = value_at(x2);
  while (b - a > 1e-10 * std::max(std::abs(a), std::abs(b))) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = value_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = value_at(x2);
    }
  }
  result.g_star = 0.5 * (a + b);
  result.value = value_at(result.g_star);
  result.warning_non_unimodal = false;
  return result;
}

std::vector<TraceResult> transient_traces(
    const std::vector<double>& concentrations, Objective objective,
    const SweepSpec& spec) {
  if (concentrations.empty())
    throw std::invalid_argument("transient_traces: empty concentration list");
  const PhysicalConstants c = nv_carbon13_constants();
  std::vector<TraceResult> out(concentrations.size());
  parallel_for(concentrations.size(), spec.threads, [&](std::size_t k) {
    const double conc = concentrations[k];
    const OptimalG opt = optimal_g(conc, objective, 0, 0, spec);
    const TransientSetup setup = transient_setup(spec, conc, c);
    EngineParams p = setup.params;
    p.g = opt.g_star;
    const Matrix4cd rho0 = product_thermal_state<double>(p.n_L, p.n_R);
    const auto traj = evolve<double>(p, rho0, setup.times);
    TraceResult trace;
    trace.concentration = conc;
    trace.Gamma = p.Gamma_L;
    trace.g_star = opt.g_star;
    trace.g_warning = opt.warning_non_unimodal;
    trace.times = setup.times;
    trace.concurrence.resize(traj.size());
    trace.heat_L.resize(traj.size());
    trace.heat_R.resize(traj.size());
    for (std::size_t i = 0; i < traj.size(); ++i) {
      trace.concurrence[i] = concurrence_x(traj[i]).value;
      trace.heat_L[i] = heat_current<double>(p, traj[i], Side::L);
      trace.heat_R[i] = heat_current<double>(p, traj[i], Side::R);
      if (trace.concurrence[i] > trace.peak_value) {
        trace.peak_value = trace.concurrence[i];
        trace.peak_time = setup.times[i];
      }
    }
    trace.long_time_value = trace.concurrence.back();
    out[k] = std::move(trace);
  });
  return out;
}

FeasibilityReport feasibility_report(double concentration_pct, double r,
                                     double theta, double d_sep, double margin,
                                     const PhysicalConstants& c) {
  FeasibilityReport rep;
  rep.concentration = concentration_pct;
  rep.B_cr = cross_relaxation_field(c);
  rep.eps = qubit_energy(rep.B_cr, c);
  rep.g = std::abs(dipolar_coupling(r, theta, c));
  rep.Gamma = gamma1_scaled(concentration_pct);
  rep.engine_time_s = 100.0 / rep.Gamma;
  const double diff_const = diffusion_constant(concentration_pct);
  rep.diffusion_time_s = diffusion_time(d_sep * 1e9, diff_const);
  const auto& nat = builtin_registry().front();
  rep.spin_lattice_rate = nat.spin_lattice_rate.value_or(150.0);

  FeasibilityCriterion window;
  window.name = "coupling window";
  // The magic angle never yields an exact floating-point zero, just a
  // rounding-level remnant; anything below a nanohertz is operationally no
  // coupling at all.
  if (rep.g < 1e-9) {
    window.pass = false;
    window.detail =
        "no coupling: g = 0 at this geometry (magic angle or infinite "
        "separation)";
  } else {
    const WindowVerdict v =
        coupling_window_check(rep.g, rep.eps, rep.Gamma, margin);
    window.pass = v.pass;
    window.detail = v.message;
  }
  rep.criteria.push_back(window);

  FeasibilityCriterion diffusion;
  diffusion.name = "diffusion timescale";
  {
    std::ostringstream os;
    os.precision(4);
    const double factor = rep.diffusion_time_s / rep.engine_time_s;
    diffusion.pass = factor >= 100.0;
    os << "polarization diffusion time " << rep.diffusion_time_s
       << " s vs engine settling time " << rep.engine_time_s << " s (factor "
       << factor << ", require >= 100)";
    diffusion.detail = os.str();
  }
  rep.criteria.push_back(diffusion);

  FeasibilityCriterion spin_lattice;
  spin_lattice.name = "spin-lattice relaxation";
  {
    std::ostringstream os;
    os.precision(4);
    const double factor = rep.Gamma / rep.spin_lattice_rate;
    spin_lattice.pass = factor >= 100.0;
    os << "bath coupling " << rep.Gamma << " Hz vs spin-lattice rate "
       << rep.spin_lattice_rate << " Hz (factor " << factor
       << ", require >= 100)";
    spin_lattice.detail = os.str();
  }
  rep.criteria.push_back(spin_lattice);

  rep.all_pass = true;
  std::ostringstream os;
  os.precision(6);
  os << "feasibility report: concentration " << concentration_pct
     << " %, r = " << r * 1e9 << " nm, theta = " << theta
     << " rad, d_sep = " << d_sep * 1e9 << " nm\n";
  os << "  B_cr = " << rep.B_cr * 1e3 << " mT, eps = " << rep.eps
     << " Hz, |g| = " << rep.g << " Hz, Gamma = " << rep.Gamma << " Hz\n";
  for (const auto& crit : rep.criteria) {
    rep.all_pass = rep.all_pass && crit.pass;
    os << "  [" << (crit.pass ? "pass" : "warn") << "] " << crit.name << ": "
       << crit.detail << '\n';
  }
  rep.text = os.str();
  return rep;
}

}  // namespace nv
