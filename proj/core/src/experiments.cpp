#include "staqst/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "staqst/error.hpp"
#include "staqst/invariant.hpp"

namespace staqst {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kUnitConvention = "time=us; rates and couplings=rad/us (X MHz_2pi = 2*pi*X rad/us)";

void add_sta(Provenance& p, const StaParams& sta) {
  p.emplace_back("sta.epsilon", format_number(sta.epsilon));
  p.emplace_back("sta.t_f_us", format_number(sta.t_f));
  p.emplace_back("sta.delta_t_us", format_number(sta.delta_t));
}

void add_gauss(Provenance& p, const GaussianParams& g) {
  p.emplace_back("gaussian.eps_prime_rad_per_us", format_number(g.eps_prime));
  p.emplace_back("gaussian.sigma_us", format_number(g.sigma));
  p.emplace_back("gaussian.delta_t_us", format_number(g.delta_t));
}

void add_stirap(Provenance& p, const StirapParams& s) {
  p.emplace_back("stirap.t_a_us", format_number(s.t_a));
  p.emplace_back("stirap.w_c_us", format_number(s.w_c));
  p.emplace_back("stirap.w_l_us", format_number(s.w_l));
  p.emplace_back("stirap.g_peak_rad_per_us", format_number(s.g_peak));
  p.emplace_back("stirap.omega_peak_rad_per_us", format_number(s.omega_peak));
  p.emplace_back("stirap.d_us", format_number(s.d));
}

void add_integrator(Provenance& p, const PropagatorConfig& cfg) {
  p.emplace_back("integrator.method", std::string(to_string(cfg.method)));
  if (cfg.method == IntegratorMethod::rk4) {
    p.emplace_back("integrator.step_us", format_number(cfg.step));
  } else {
    p.emplace_back("integrator.tolerance", format_number(cfg.tolerance));
  }
}

void add_fixed_steps(Provenance& p, int steps) {
  p.emplace_back("integrator.method", "rk4");
  p.emplace_back("integrator.steps_per_window", std::to_string(steps));
}

void copy_provenance(Summary& s, const Provenance& p) {
  for (const auto& [k, v] : p) s.set("meta." + k, v);
}

std::size_t nearest_index(const std::vector<double>& v, double target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i] - target) < std::abs(v[best] - target)) best = i;
  }
  return best;
}

PropagatorConfig open_config(const PulseSet& pulses, int steps, int samples) {
  if (steps < 1) throw DomainError("open-system step count must be >= 1");
  return PropagatorConfig::fixed((pulses.t_end() - pulses.t_start()) / steps, samples);
}

}  // namespace

double SweepResult::at(std::size_t i, std::size_t j) const {
  if (axes.size() != 2) throw DomainError("two-index access on a non-2D sweep");
  return values.at(i * axes[1].values.size() + j);
}

double SweepResult::min_value() const {
  return values.empty() ? kNaN : *std::min_element(values.begin(), values.end());
}

std::vector<Extremum> refined_local_maxima(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("axis and values differ in length");
  std::vector<Extremum> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
    const double dx = x[i + 1] - x[i];
    const double curvature = y[i - 1] - 2.0 * y[i] + y[i + 1];
    Extremum e{x[i], y[i], i};
    if (curvature < 0.0) {
      const double offset = 0.5 * (y[i - 1] - y[i + 1]) / curvature;
      e.argument = x[i] + offset * dx;
      e.value = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * offset;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<double> symmetric_axis(double range, int steps) {
  if (steps < 2) throw DomainError("axis needs at least 2 steps");
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    v[static_cast<std::size_t>(i)] = range * (2.0 * i - (steps - 1)) / (steps - 1);
  }
  return v;
}

std::vector<double> linear_axis(double lo, double hi, int steps) {
  if (steps < 2) throw DomainError("axis needs at least 2 steps");
  std::vector<double> v(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) {
    v[static_cast<std::size_t>(i)] = (i == steps - 1) ? hi : lo + (hi - lo) * i / (steps - 1);
  }
  return v;
}

double closed_transfer_fidelity(const PulseSet& pulses, const PropagatorConfig& cfg) {
  const Basis basis(2, 1);
  const HamiltonianTerms terms(basis);
  const auto traj = propagate_schrodinger(driven_hamiltonian(terms, pulses),
                                          StateVector::basis_state(basis, BasisState::parse("fs,0")),
                                          pulses.t_start(), pulses.t_end(), cfg);
  return std::norm(traj.final_state()(static_cast<Eigen::Index>(basis.index("sf,0"))));
}

double open_transfer_fidelity(const PulseSet& pulses, const DecoherenceParams& dec, int steps) {
  const Basis basis(2, 1);
  const HamiltonianTerms terms(basis);
  const auto ops = collapse_operators(basis, dec);
  const auto rho0 =
      DensityMatrixState::pure(StateVector::basis_state(basis, BasisState::parse("fs,0")));
  const auto traj = propagate_lindblad(driven_hamiltonian(terms, pulses), ops, rho0,
                                       pulses.t_start(), pulses.t_end(),
                                       open_config(pulses, steps, 2));
  const auto k = static_cast<Eigen::Index>(basis.index("sf,0"));
  return traj.final_state()(k, k).real();
}

// ---------------------------------------------------------------------------

SweepResult scan_epsilon(const ScanOptions& opts) {
  if (!(opts.eps_lo > 0.0 && opts.eps_lo < opts.eps_hi && opts.eps_hi < std::numbers::pi / 2)) {
    throw DomainError("epsilon range must satisfy 0 < lo < hi < pi/2");
  }
  if (opts.samples < 50) throw DomainError("epsilon scan needs at least 50 samples");

  SweepResult r;
  r.axes.push_back({"epsilon", "rad", linear_axis(opts.eps_lo, opts.eps_hi, opts.samples)});
  const auto& eps = r.axes[0].values;
  r.values.assign(eps.size(), 0.0);
  parallel_for(eps.size(), opts.threads, [&](std::size_t i) {
    const StaParams sta{eps[i], opts.t_f, opts.delta_t};
    r.values[i] = closed_transfer_fidelity(PulseSet::sta_sinusoidal(sta), opts.integrator);
  });
  r.maxima = refined_local_maxima(eps, r.values);

  r.provenance.emplace_back("pulse_family", "sta_sinusoidal");
  r.provenance.emplace_back("sta.t_f_us", format_number(opts.t_f));
  r.provenance.emplace_back("sta.delta_t_us", format_number(opts.delta_t));
  add_integrator(r.provenance, opts.integrator);
  r.provenance.emplace_back("initial_state", "fs,0");
  r.provenance.emplace_back("target_state", "sf,0");
  r.provenance.emplace_back("units", kUnitConvention);
  return r;
}

std::vector<Extremum> high_fidelity_peaks(const SweepResult& scan, double threshold) {
  std::vector<Extremum> out;
  for (const auto& m : scan.maxima) {
    if (m.value >= threshold) out.push_back(m);
  }
  std::sort(out.begin(), out.end(),
            [](const Extremum& a, const Extremum& b) { return a.argument > b.argument; });
  return out;
}

Summary summarize_scan(const SweepResult& scan) {
  Summary s;
  s.experiment = "scan-epsilon";
  const auto peaks = high_fidelity_peaks(scan);
  s.set("interior_maxima", static_cast<long>(scan.maxima.size()));
  s.set("high_fidelity_peaks", static_cast<long>(peaks.size()));
  for (std::size_t k = 0; k < scan.maxima.size(); ++k) {
    const std::string key = "maximum." + std::to_string(k + 1);
    s.set(key + ".epsilon", scan.maxima[k].argument);
    s.set(key + ".fidelity", scan.maxima[k].value);
  }
  const double e1 = peaks.size() > 0 ? peaks[0].argument : kNaN;
  const double f1 = peaks.size() > 0 ? peaks[0].value : kNaN;
  const double e2 = peaks.size() > 1 ? peaks[1].argument : kNaN;
  const double f2 = peaks.size() > 1 ? peaks[1].value : kNaN;
  s.set("peak1_epsilon", e1);
  s.set("peak1_fidelity", f1);
  s.set("peak2_epsilon", e2);
  s.set("peak2_fidelity", f2);
  copy_provenance(s, scan.provenance);
  s.checks.push_back(check_within("peak1_location", e1, 0.1152, 0.002));
  s.checks.push_back(check_within("peak2_location", e2, 0.0651, 0.002));
  s.checks.push_back(check_at_least("peak1_fidelity", f1, 0.995));
  s.checks.push_back(check_at_least("peak2_fidelity", f2, 0.995));
  s.checks.push_back(
      check_at_least("interior_maxima", static_cast<double>(scan.maxima.size()), 2.0));
  return s;
}

CsvTable scan_table(const SweepResult& scan) {
  CsvTable t({"epsilon", "fidelity"});
  for (std::size_t i = 0; i < scan.values.size(); ++i) {
    t.add_row(std::vector<double>{scan.axes[0].values[i], scan.values[i]});
  }
  return t;
}

// ---------------------------------------------------------------------------

PulseSet make_pulse_set(PulseFamily family, const StaParams& sta, const GaussianParams& gauss,
                        const StirapParams& stirap) {
  switch (family) {
    case PulseFamily::sta_sinusoidal: return PulseSet::sta_sinusoidal(sta);
    case PulseFamily::sta_gaussian: return PulseSet::sta_gaussian(sta, gauss);
    case PulseFamily::stirap: return PulseSet::stirap(stirap);
  }
  throw DomainError("unknown pulse family");
}

std::size_t PopulationRun::peak_p3_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < reports.size(); ++i) {
    if (reports[i].populations[2] > reports[best].populations[2]) best = i;
  }
  return best;
}

PopulationRun run_populations(const PopulationOptions& opts) {
  opts.dec.validate();
  const PulseSet pulses = make_pulse_set(opts.family, opts.sta, opts.gauss, opts.stirap);
  const Basis basis(2, 1);
  const HamiltonianTerms terms(basis);
  const auto h = driven_hamiltonian(terms, pulses);
  const auto chain = transfer_chain();
  const BasisState target = BasisState::parse("sf,0");
  const auto psi0 = StateVector::basis_state(basis, chain.front());

  PopulationRun run;
  run.family = opts.family;
  run.dec = opts.dec;
  run.sta_window = opts.sta.t_f;
  run.provenance.emplace_back("pulse_family", std::string(to_string(opts.family)));
  if (opts.family == PulseFamily::stirap) {
    add_stirap(run.provenance, opts.stirap);
  } else {
    add_sta(run.provenance, opts.sta);
    if (opts.family == PulseFamily::sta_gaussian) add_gauss(run.provenance, opts.gauss);
  }
  run.provenance.emplace_back("decoherence.kappa_rad_per_us", format_number(opts.dec.kappa));
  run.provenance.emplace_back("decoherence.gamma_rad_per_us", format_number(opts.dec.gamma));

  if (opts.dec.closed()) {
    const auto cfg = PropagatorConfig::adaptive(opts.tolerance, opts.samples);
    add_integrator(run.provenance, cfg);
    const auto traj = propagate_schrodinger(h, psi0, pulses.t_start(), pulses.t_end(), cfg);
    run.times = traj.times;
    run.meta = traj.meta;
    for (const auto& psi : traj.states) run.reports.push_back(observables(psi, basis, chain, target));
  } else {
    const auto cfg = open_config(pulses, opts.open_steps, opts.samples);
    add_fixed_steps(run.provenance, opts.open_steps);
    const auto ops = collapse_operators(basis, opts.dec);
    const auto traj = propagate_lindblad(h, ops, DensityMatrixState::pure(psi0), pulses.t_start(),
                                         pulses.t_end(), cfg);
    run.times = traj.times;
    run.meta = traj.meta;
    const std::optional<BasisState> sink = BasisState::parse("ss,0");
    for (const auto& rho : traj.states) {
      run.reports.push_back(observables(rho, basis, chain, target, sink));
    }
  }
  run.provenance.emplace_back("units", kUnitConvention);
  return run;
}

Summary summarize_populations(const PopulationRun& run, std::optional<double> sinusoidal_reference) {
  Summary s;
  s.experiment = "populations";
  const auto& fin = run.final_report();
  s.set("family", std::string(to_string(run.family)));
  s.set("open_system", !run.dec.closed());
  s.set("window_us", run.times.back() - run.times.front());
  for (std::size_t k = 0; k < fin.populations.size(); ++k) {
    s.set("final.P" + std::to_string(k + 1), fin.populations[k]);
  }
  s.set("final.P_ss0", fin.sink_population);
  s.set("final.leakage", fin.leakage);
  s.set("fidelity", fin.fidelity);

  double max_leak = 0.0;
  for (const auto& r : run.reports) max_leak = std::max(max_leak, std::abs(r.leakage));
  const std::size_t ip = run.peak_p3_index();
  const auto& at_peak = run.reports[ip];
  const double side = at_peak.populations[1] + at_peak.populations[3];
  const double ratio = side > 0.0 ? at_peak.populations[2] / side
                                  : std::numeric_limits<double>::infinity();
  s.set("max_leakage", max_leak);
  s.set("peak_P3.time_us", run.times[ip]);
  s.set("peak_P3.value", at_peak.populations[2]);
  s.set("peak_P3.P2_plus_P4", side);
  s.set("peak_P3.ratio", ratio);
  s.set("max_norm_drift", run.meta.max_norm_drift);
  if (!run.dec.closed()) s.set("min_eigenvalue", run.meta.min_eigenvalue);
  copy_provenance(s, run.provenance);

  if (run.dec.closed()) {
    switch (run.family) {
      case PulseFamily::sta_sinusoidal:
        s.checks.push_back(check_at_least("final_P5", fin.fidelity, 0.995));
        s.checks.push_back(check_at_most("max_leakage", max_leak, 1e-10));
        s.checks.push_back(check_at_least("P3_over_P2_plus_P4", ratio, 5.0));
        break;
      case PulseFamily::sta_gaussian:
        if (sinusoidal_reference) {
          s.set("sinusoidal_reference_P5", *sinusoidal_reference);
          s.checks.push_back(check_within("final_P5_vs_sinusoidal", fin.fidelity,
                                          *sinusoidal_reference, 0.02));
        }
        break;
      case PulseFamily::stirap:
        s.checks.push_back(check_below("final_P5", fin.fidelity, 0.90));
        s.set("sta_window_us", run.sta_window);
        s.checks.push_back(check_at_least("window_over_sta", (run.times.back() - run.times.front()) / run.sta_window, 20.0));
        break;
    }
  }
  return s;
}

CsvTable population_table(const PopulationRun& run) {
  CsvTable t({"t_us", "P1", "P2", "P3", "P4", "P5", "P_ss0", "leakage", "fidelity"});
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    const auto& r = run.reports[i];
    std::vector<double> row{run.times[i]};
    row.insert(row.end(), r.populations.begin(), r.populations.end());
    row.push_back(r.sink_population);
    row.push_back(r.leakage);
    row.push_back(r.fidelity);
    t.add_row(row);
  }
  return t;
}

// ---------------------------------------------------------------------------

GaussianFit run_gaussian_fit(const FitOptions& opts) {
  if (opts.samples < 100) throw DomainError("Gaussian refit needs at least 100 samples");
  GaussianFit out;
  out.target = sample_sinusoidal_coupling(opts.sta, opts.samples);
  out.fit = fit_gaussian(out.target, opts.seed);
  add_sta(out.provenance, opts.sta);
  out.provenance.emplace_back("fit.samples", std::to_string(opts.samples));
  out.provenance.emplace_back("fit.seed_eps_prime_rad_per_us", format_number(opts.seed.eps_prime));
  out.provenance.emplace_back("fit.seed_sigma_us", format_number(opts.seed.sigma));
  out.provenance.emplace_back("units", kUnitConvention);
  return out;
}

Summary summarize_fit(const GaussianFit& fit) {
  Summary s;
  s.experiment = "fit-gaussian";
  s.set("eps_prime_rad_per_us", fit.fit.eps_prime);
  s.set("eps_prime_MHz_2pi", fit.fit.eps_prime / units::kTwoPi);
  s.set("sigma_us", fit.fit.sigma);
  s.set("sigma_squared_us2", fit.fit.sigma * fit.fit.sigma);
  s.set("rss", fit.fit.rss);
  s.set("iterations", static_cast<long>(fit.fit.iterations));
  s.set("converged", fit.fit.converged);
  copy_provenance(s, fit.provenance);
  const double eps_ref = units::mhz_2pi(4.5);
  const double sigma_ref = std::sqrt(0.14);
  s.checks.push_back(check_within("eps_prime", fit.fit.eps_prime, eps_ref, 0.1 * eps_ref));
  s.checks.push_back(check_within("sigma", fit.fit.sigma, sigma_ref, 0.1 * sigma_ref));
  s.checks.push_back(check_at_least("converged", fit.fit.converged ? 1.0 : 0.0, 1.0));
  return s;
}

CsvTable fit_table(const GaussianFit& fit) {
  CsvTable t({"t_us", "g1_sinusoidal", "G1_fitted"});
  for (const auto& p : fit.target) {
    const double model =
        fit.fit.eps_prime * std::exp(-p.t * p.t / (fit.fit.sigma * fit.fit.sigma));
    t.add_row(std::vector<double>{p.t, p.value, model});
  }
  return t;
}

// ---------------------------------------------------------------------------

SweepResult robustness_grid(const RobustnessOptions& opts) {
  if (!(std::abs(opts.amp_range) <= 0.2) || !(std::abs(opts.width_range) <= 0.2)) {
    throw DomainError("fluctuation ranges must lie within +-0.2");
  }
  if (opts.steps < 5) throw DomainError("robustness grid needs at least 5 steps per axis");

  SweepResult r;
  r.axes.push_back({"delta_eps_prime_rel", "1", symmetric_axis(opts.amp_range, opts.steps)});
  r.axes.push_back({"delta_sigma_rel", "1", symmetric_axis(opts.width_range, opts.steps)});
  const auto& amp = r.axes[0].values;
  const auto& wid = r.axes[1].values;
  r.values.assign(amp.size() * wid.size(), 0.0);
  parallel_for(r.values.size(), opts.threads, [&](std::size_t k) {
    const auto g = perturb(opts.gauss, amp[k / wid.size()], wid[k % wid.size()]);
    r.values[k] = closed_transfer_fidelity(PulseSet::sta_gaussian(opts.sta, g), opts.integrator);
  });

  r.provenance.emplace_back("pulse_family", "sta_gaussian");
  add_sta(r.provenance, opts.sta);
  add_gauss(r.provenance, opts.gauss);
  r.provenance.emplace_back("fluctuation", "static, common to both atoms");
  add_integrator(r.provenance, opts.integrator);
  r.provenance.emplace_back("units", kUnitConvention);
  return r;
}

Summary summarize_robustness(const SweepResult& grid) {
  Summary s;
  s.experiment = "robustness";
  const std::size_t n0 = grid.axes[0].values.size(), n1 = grid.axes[1].values.size();
  const double min_f = grid.min_value();
  s.set("min_fidelity", min_f);
  s.set("max_fidelity", *std::max_element(grid.values.begin(), grid.values.end()));
  s.set("center_fidelity", grid.at(n0 / 2, n1 / 2));
  s.set("corner_plus_plus", grid.at(n0 - 1, n1 - 1));
  s.set("corner_minus_minus", grid.at(0, 0));
  s.set("amp_range", grid.axes[0].values.back());
  s.set("width_range", grid.axes[1].values.back());
  copy_provenance(s, grid.provenance);
  s.checks.push_back(check_at_least("min_fidelity", min_f, 0.97));
  return s;
}

CsvTable grid_table(const SweepResult& grid, const std::string& value_name) {
  if (grid.axes.size() != 2) throw DomainError("grid table needs a 2D sweep");
  CsvTable t({grid.axes[0].name, grid.axes[1].name, value_name});
  const auto& a = grid.axes[0].values;
  const auto& b = grid.axes[1].values;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      t.add_row(std::vector<double>{a[i], b[j], grid.at(i, j)});
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

SweepResult decoherence_grid(const DecoherenceGridOptions& opts) {
  if (!(opts.gamma_max >= 0.0 && opts.gamma_max <= 0.2) ||
      !(opts.kappa_max >= 0.0 && opts.kappa_max <= 0.2)) {
    throw DomainError("decoherence axes must lie within [0, 0.2]");
  }
  if (opts.steps < 2) throw DomainError("decoherence grid needs at least 2 steps per axis");

  SweepResult r;
  r.axes.push_back({"gamma_over_g", "1", linear_axis(0.0, opts.gamma_max, opts.steps)});
  r.axes.push_back({"kappa_over_g", "1", linear_axis(0.0, opts.kappa_max, opts.steps)});
  const auto& gam = r.axes[0].values;
  const auto& kap = r.axes[1].values;
  const double g_norm = opts.gauss.eps_prime;
  const PulseSet pulses = PulseSet::sta_gaussian(opts.sta, opts.gauss);
  r.values.assign(gam.size() * kap.size(), 0.0);
  parallel_for(r.values.size(), opts.threads, [&](std::size_t k) {
    const DecoherenceParams dec{kap[k % kap.size()] * g_norm, gam[k / kap.size()] * g_norm};
    r.values[k] = open_transfer_fidelity(pulses, dec, opts.open_steps);
  });

  r.provenance.emplace_back("pulse_family", "sta_gaussian");
  add_sta(r.provenance, opts.sta);
  add_gauss(r.provenance, opts.gauss);
  r.provenance.emplace_back("rate_normalization", "g = eps_prime (Gaussian peak coupling)");
  r.provenance.emplace_back("g_rad_per_us", format_number(g_norm));
  add_fixed_steps(r.provenance, opts.open_steps);
  r.provenance.emplace_back("units", kUnitConvention);
  return r;
}

Summary summarize_decoherence(const SweepResult& grid, double closed_fidelity) {
  Summary s;
  s.experiment = "decoherence";
  const auto& gam = grid.axes[0].values;
  const auto& kap = grid.axes[1].values;
  const double corner = grid.at(0, 0);
  const std::size_t ig = nearest_index(gam, 0.1), ik = nearest_index(kap, 0.1);
  const double leak_only = grid.at(0, ik);
  const double emit_only = grid.at(ig, 0);

  bool monotone = true;
  for (std::size_t i = 1; i < gam.size(); ++i) monotone &= grid.at(i, 0) <= grid.at(i - 1, 0) + 1e-6;
  for (std::size_t j = 1; j < kap.size(); ++j) monotone &= grid.at(0, j) <= grid.at(0, j - 1) + 1e-6;
  const double max_f = *std::max_element(grid.values.begin(), grid.values.end());

  s.set("closed_fidelity", closed_fidelity);
  s.set("corner_fidelity", corner);
  s.set("min_fidelity", grid.min_value());
  s.set("F_gamma0_kappa", leak_only);
  s.set("F_gamma_kappa0", emit_only);
  s.set("ordering_point_gamma_over_g", gam[ig]);
  s.set("ordering_point_kappa_over_g", kap[ik]);
  s.set("monotone_axes", monotone);
  copy_provenance(s, grid.provenance);
  s.checks.push_back(check_within("zero_rate_corner", corner, closed_fidelity, 1e-6));
  s.checks.push_back(check_below("leakage_dominates", leak_only, emit_only));
  s.checks.push_back(check_at_most("monotone_harm", max_f, closed_fidelity + 1e-6));
  s.checks.push_back(check_at_least("monotone_axes", monotone ? 1.0 : 0.0, 1.0));
  return s;
}

// ---------------------------------------------------------------------------

CesiumResult cesium_check(const CesiumOptions& opts) {
  if (!(opts.g_reference > 0.0)) throw DomainError("g_reference must be > 0");
  const double scale = opts.gauss.eps_prime / opts.g_reference;
  CesiumResult out;
  out.effective = {opts.kappa * scale, opts.gamma * scale};

  PopulationOptions p;
  p.family = PulseFamily::sta_gaussian;
  p.sta = opts.sta;
  p.gauss = opts.gauss;
  p.dec = out.effective;
  p.samples = opts.samples;
  p.open_steps = opts.open_steps;
  out.run = run_populations(p);
  out.run.provenance.emplace_back("cesium.kappa_rad_per_us", format_number(opts.kappa));
  out.run.provenance.emplace_back("cesium.gamma_rad_per_us", format_number(opts.gamma));
  out.run.provenance.emplace_back("cesium.g_reference_rad_per_us", format_number(opts.g_reference));
  out.run.provenance.emplace_back("rate_normalization",
                                  "rates scaled by eps_prime / g_reference");
  out.fidelity = out.run.final_report().fidelity;

  const PulseSet pulses = PulseSet::sta_gaussian(opts.sta, opts.gauss);
  out.closed_fidelity = closed_transfer_fidelity(pulses, PropagatorConfig::adaptive(1e-10, 2));
  out.literal_fidelity =
      open_transfer_fidelity(pulses, DecoherenceParams{opts.kappa, opts.gamma}, opts.open_steps);
  return out;
}

Summary summarize_cesium(const CesiumResult& result) {
  Summary s;
  s.experiment = "cesium-check";
  s.set("fidelity", result.fidelity);
  s.set("closed_fidelity", result.closed_fidelity);
  s.set("literal_rate_fidelity", result.literal_fidelity);
  s.set("kappa_effective_rad_per_us", result.effective.kappa);
  s.set("gamma_effective_rad_per_us", result.effective.gamma);
  s.set("branch_rate_rad_per_us", result.effective.branch_rate());
  s.set("max_trace_drift", result.run.meta.max_norm_drift);
  s.set("min_eigenvalue", result.run.meta.min_eigenvalue);
  copy_provenance(s, result.run.provenance);
  s.checks.push_back(check_at_least("fidelity", result.fidelity, 0.9885));
  return s;
}

// ---------------------------------------------------------------------------

std::vector<InvariantVerifyRow> verify_invariant(const StaParams& sta, int points, double mu,
                                                 double h) {
  sta.validate();
  if (points < 2) throw DomainError("verify_invariant needs at least 2 points");
  const InvariantSpec spec{mu, AuxAngles::sta_ansatz(sta.epsilon, sta.t_f)};
  const SingleAtomHamiltonian ham = [&sta](double t) {
    return single_atom_hamiltonian(sta_single(sta, t));
  };
  std::vector<InvariantVerifyRow> rows;
  for (double t : linear_axis(0.0, sta.t_f, points)) {
    const AtomControls c = sta_single(sta, t);
    const auto aux = auxiliary_residual(spec.angles, c.omega, c.g, t);
    rows.push_back({t, invariance_residual(ham, spec, t, h), ham(t).cwiseAbs().maxCoeff(),
                    aux.r_gamma, aux.r_beta});
  }
  return rows;
}

Summary summarize_invariant(const std::vector<InvariantVerifyRow>& rows) {
  Summary s;
  s.experiment = "verify-invariant";
  double worst_rel = 0.0, worst_aux = 0.0;
  for (const auto& r : rows) {
    worst_rel = std::max(worst_rel, r.invariance_residual / std::max(1.0, r.hamiltonian_norm));
    worst_aux = std::max({worst_aux, std::abs(r.r_gamma), std::abs(r.r_beta)});
  }
  s.set("points", static_cast<long>(rows.size()));
  s.set("max_relative_invariance_residual", worst_rel);
  s.set("max_auxiliary_residual", worst_aux);
  s.checks.push_back(check_at_most("invariance_residual", worst_rel, 1e-6));
  s.checks.push_back(check_at_most("auxiliary_residual", worst_aux, 1e-10));
  return s;
}

CsvTable invariant_table(const std::vector<InvariantVerifyRow>& rows) {
  CsvTable t({"t_us", "invariance_residual", "hamiltonian_max_abs", "r_gamma", "r_beta"});
  for (const auto& r : rows) {
    t.add_row(std::vector<double>{r.t, r.invariance_residual, r.hamiltonian_norm, r.r_gamma,
                                  r.r_beta});
  }
  return t;
}

}  // namespace staqst
