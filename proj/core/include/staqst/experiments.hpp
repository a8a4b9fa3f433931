#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "staqst/dynamics.hpp"
#include "staqst/fitting.hpp"
#include "staqst/pulses.hpp"
#include "staqst/report.hpp"

namespace staqst {

using Provenance = std::vector<std::pair<std::string, std::string>>;

struct SweepAxis {
  std::string name;
  std::string units;
  std::vector<double> values;
};

struct Extremum {
  double argument = 0.0;  ///< parabolically refined location
  double value = 0.0;     ///< refined value
  std::size_t index = 0;  ///< grid index of the sampled maximum
};

/// Grid of outputs over one or two axes, row-major with the first axis
/// varying slowest.
struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<double> values;
  std::vector<Extremum> maxima;
  Provenance provenance;

  double at(std::size_t i) const { return values.at(i); }
  double at(std::size_t i, std::size_t j) const;
  double min_value() const;
};

/// Interior local maxima of y(x) refined by a parabola through the three
/// neighbouring samples. Requires evenly spaced x.
std::vector<Extremum> refined_local_maxima(const std::vector<double>& x,
                                           const std::vector<double>& y);

/// Evenly spaced values over [-range, range]; the center is exactly 0 for an
/// odd count.
std::vector<double> symmetric_axis(double range, int steps);
std::vector<double> linear_axis(double lo, double hi, int steps);

/// Runs fn(i) for i in [0, n) on `threads` workers. Output must be written by
/// index for determinism.
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn);

// ---------------------------------------------------------------------------
// Fidelity versus epsilon

struct ScanOptions {
  double eps_lo = 0.03;
  double eps_hi = 0.20;
  int samples = 400;
  double t_f = 0.5;
  double delta_t = 0.5;
  PropagatorConfig integrator = PropagatorConfig::adaptive(1e-10, 2);
  int threads = 1;
};

/// Final |<sf,0|psi(t_f)>|^2 from |fs,0> under the sinusoidal shortcut
/// pulses for each epsilon; all interior maxima refined.
SweepResult scan_epsilon(const ScanOptions& opts);

/// Maxima with value >= threshold ordered by decreasing epsilon; element
/// N-1 is the N-th high-fidelity peak.
std::vector<Extremum> high_fidelity_peaks(const SweepResult& scan, double threshold = 0.995);

Summary summarize_scan(const SweepResult& scan);
CsvTable scan_table(const SweepResult& scan);

// ---------------------------------------------------------------------------
// Population dynamics

struct PopulationOptions {
  PulseFamily family = PulseFamily::sta_sinusoidal;
  StaParams sta;
  GaussianParams gauss;
  StirapParams stirap;
  DecoherenceParams dec;
  int samples = 501;
  double tolerance = 1e-10;      ///< closed runs (adaptive)
  int open_steps = 4000;         ///< open runs: fixed steps per window
};

struct PopulationRun {
  PulseFamily family = PulseFamily::sta_sinusoidal;
  DecoherenceParams dec;
  double sta_window = 0.0;  ///< shortcut t_f, for comparing window lengths
  std::vector<double> times;
  std::vector<ObservableReport> reports;  ///< tracked = five-state chain
  TrajectoryMeta meta;
  Provenance provenance;

  const ObservableReport& final_report() const { return reports.back(); }
  /// Sample index of the largest |ss,1> population.
  std::size_t peak_p3_index() const;
};

PulseSet make_pulse_set(PulseFamily family, const StaParams& sta, const GaussianParams& gauss,
                        const StirapParams& stirap);

PopulationRun run_populations(const PopulationOptions& opts);

Summary summarize_populations(const PopulationRun& run,
                              std::optional<double> sinusoidal_reference = std::nullopt);
/// Columns t_us, P1..P5, P_ss0, leakage, fidelity.
CsvTable population_table(const PopulationRun& run);

// ---------------------------------------------------------------------------
// Gaussian refit

struct FitOptions {
  StaParams sta;
  int samples = 201;
  FitResult seed{units::mhz_2pi(4.0), 0.3, 0.0, 0, false};
};

struct GaussianFit {
  FitResult fit;
  std::vector<CurveSample> target;
  Provenance provenance;
};

GaussianFit run_gaussian_fit(const FitOptions& opts);
Summary summarize_fit(const GaussianFit& fit);
CsvTable fit_table(const GaussianFit& fit);

// ---------------------------------------------------------------------------
// Robustness of the Gaussian refit

struct RobustnessOptions {
  double amp_range = 0.1;
  double width_range = 0.1;
  int steps = 11;
  StaParams sta;
  GaussianParams gauss;
  PropagatorConfig integrator = PropagatorConfig::adaptive(1e-10, 2);
  int threads = 1;
};

/// Closed-system fidelity over common-mode relative fluctuations of eps'
/// (first axis) and sigma (second axis).
SweepResult robustness_grid(const RobustnessOptions& opts);
Summary summarize_robustness(const SweepResult& grid);
CsvTable grid_table(const SweepResult& grid, const std::string& value_name);

// ---------------------------------------------------------------------------
// Decoherence

struct DecoherenceGridOptions {
  double gamma_max = 0.1;  ///< Gamma / g
  double kappa_max = 0.1;  ///< kappa / g
  int steps = 11;
  StaParams sta;
  GaussianParams gauss;
  int open_steps = 4000;
  int threads = 1;
};

/// Open-system fidelity of the Gaussian pulse set over Gamma/g (first axis)
/// and kappa/g (second axis), with g = eps'.
SweepResult decoherence_grid(const DecoherenceGridOptions& opts);
Summary summarize_decoherence(const SweepResult& grid, double closed_fidelity);

struct CesiumOptions {
  double kappa = units::mhz_2pi(3.5);
  double gamma = units::mhz_2pi(2.62);
  /// Physical coupling the rates are quoted against; rates enter the
  /// simulation as ratios to it, rescaled onto eps'.
  double g_reference = units::mhz_2pi(750.0);
  StaParams sta;
  GaussianParams gauss;
  int open_steps = 4000;
  int samples = 501;
};

struct CesiumResult {
  DecoherenceParams effective;  ///< rates used in the simulation, rad/us
  double fidelity = 0.0;
  double closed_fidelity = 0.0;
  double literal_fidelity = 0.0;  ///< rates used unscaled, for reference
  PopulationRun run;
};

/// Open-system QST fidelity of the Gaussian pulse set at the published
/// cesium cavity parameters.
CesiumResult cesium_check(const CesiumOptions& opts);
Summary summarize_cesium(const CesiumResult& result);

/// Closed-system transfer fidelity of a pulse set from |fs,0> to |sf,0>.
double closed_transfer_fidelity(const PulseSet& pulses, const PropagatorConfig& cfg);
/// Open-system counterpart with fixed-step RK4, `steps` steps over the window.
double open_transfer_fidelity(const PulseSet& pulses, const DecoherenceParams& dec, int steps);

// ---------------------------------------------------------------------------
// Invariant diagnostics

struct InvariantVerifyRow {
  double t = 0.0;
  double invariance_residual = 0.0;
  double hamiltonian_norm = 0.0;
  double r_gamma = 0.0;
  double r_beta = 0.0;
};

/// Residual table along the shortcut ansatz at `points` evenly spaced times.
std::vector<InvariantVerifyRow> verify_invariant(const StaParams& sta, int points,
                                                 double mu = 1.0, double h = 1e-5);
Summary summarize_invariant(const std::vector<InvariantVerifyRow>& rows);
CsvTable invariant_table(const std::vector<InvariantVerifyRow>& rows);

}  // namespace staqst

#include "staqst/detail/parallel.hpp"
