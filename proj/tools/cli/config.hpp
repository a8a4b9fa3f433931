#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "staqst/experiments.hpp"

namespace staqst::cli {

/// Malformed, unknown or out-of-range configuration. Maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Experiment identifiers accepted by `run.experiment` and as subcommands.
inline constexpr std::string_view kExperiments[] = {
    "scan-epsilon", "populations",      "fit-gaussian", "robustness",
    "decoherence",  "cesium-check",     "verify-invariant", "pulses-dump"};

bool is_experiment(std::string_view id);

struct RunConfig {
  std::string experiment;  ///< empty until chosen by config or command line

  StaParams sta;
  GaussianParams gauss;
  StirapParams stirap;

  std::optional<double> kappa;        ///< rad/us
  std::optional<double> gamma;        ///< rad/us
  std::optional<double> g_reference;  ///< rad/us

  IntegratorMethod method = IntegratorMethod::dopri5;
  double tolerance = 1e-10;
  int open_steps = 4000;
  int samples = 501;

  double scan_lo = 0.03;
  double scan_hi = 0.20;
  int scan_samples = 400;

  PulseFamily family = PulseFamily::sta_sinusoidal;

  int fit_samples = 201;

  double amp_range = 0.1;
  double width_range = 0.1;
  int robustness_steps = 11;

  double grid_gamma_max = 0.1;
  double grid_kappa_max = 0.1;
  int grid_steps = 11;

  int verify_points = 21;
  double verify_mu = 1.0;
  double verify_h = 1e-5;

  PulseFamily dump_family = PulseFamily::sta_sinusoidal;
  int dump_samples = 601;
  std::optional<double> dump_t_start;
  std::optional<double> dump_t_end;

  std::filesystem::path out_dir = "out";
  int threads = 1;

  /// Decoherence rates actually simulated (ratio-scaled when g_reference is
  /// set). Cesium defaults apply to `cesium-check` when rates are unset.
  DecoherenceParams decoherence() const;

  /// Checks every physical parameter; throws ConfigError.
  void validate() const;
};

/// Parses `section.key = value` lines. `#` starts a comment. Dimensionful
/// values need a unit suffix: us, ns, ms for times; MHz_2pi, kHz_2pi,
/// rad_per_us for rates. Unknown keys are errors.
RunConfig parse_config_text(std::string_view text, const std::string& source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);

/// Parses one value with an optional unit suffix into internal units.
double parse_time(std::string_view value);
double parse_rate(std::string_view value);

ScanOptions scan_options(const RunConfig& cfg);
PopulationOptions population_options(const RunConfig& cfg);
FitOptions fit_options(const RunConfig& cfg);
RobustnessOptions robustness_options(const RunConfig& cfg);
DecoherenceGridOptions decoherence_grid_options(const RunConfig& cfg);
CesiumOptions cesium_options(const RunConfig& cfg);

}  // namespace staqst::cli
