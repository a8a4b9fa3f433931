#include "cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace staqst::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Quantity {
  double number = 0.0;
  std::string_view unit;
};

Quantity split_quantity(std::string_view value) {
  value = trim(value);
  Quantity q;
  const auto* end = value.data() + value.size();
  const auto res = std::from_chars(value.data(), end, q.number);
  if (res.ec != std::errc() || !std::isfinite(q.number)) {
    throw ConfigError("'" + std::string(value) + "' is not a number");
  }
  q.unit = trim(std::string_view(res.ptr, static_cast<std::size_t>(end - res.ptr)));
  return q;
}

double parse_dimensionless(std::string_view value) {
  const auto q = split_quantity(value);
  if (!q.unit.empty() && q.unit != "rad") {
    throw ConfigError("unexpected unit '" + std::string(q.unit) + "' on a dimensionless value");
  }
  return q.number;
}

int parse_int(std::string_view value) {
  value = trim(value);
  int v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw ConfigError("'" + std::string(value) + "' is not an integer");
  }
  return v;
}

using Setter = std::function<void(RunConfig&, std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"run.experiment",
       [](RunConfig& c, std::string_view v) {
         if (!is_experiment(v)) throw ConfigError("unknown experiment '" + std::string(v) + "'");
         c.experiment = std::string(v);
       }},
      {"pulses.epsilon", [](RunConfig& c, std::string_view v) { c.sta.epsilon = parse_dimensionless(v); }},
      {"pulses.t_f", [](RunConfig& c, std::string_view v) { c.sta.t_f = parse_time(v); }},
      {"pulses.delta_t",
       [](RunConfig& c, std::string_view v) {
         c.sta.delta_t = parse_time(v);
         c.gauss.delta_t = c.sta.delta_t;
       }},
      {"gaussian.eps_prime", [](RunConfig& c, std::string_view v) { c.gauss.eps_prime = parse_rate(v); }},
      {"gaussian.sigma", [](RunConfig& c, std::string_view v) { c.gauss.sigma = parse_time(v); }},
      {"stirap.t_a",
       [](RunConfig& c, std::string_view v) {
         const auto keep = c.stirap;
         c.stirap = StirapParams::with_window(parse_time(v));
         c.stirap.g_peak = keep.g_peak;
         c.stirap.omega_peak = keep.omega_peak;
       }},
      {"stirap.w_c", [](RunConfig& c, std::string_view v) { c.stirap.w_c = parse_time(v); }},
      {"stirap.w_l", [](RunConfig& c, std::string_view v) { c.stirap.w_l = parse_time(v); }},
      {"stirap.d", [](RunConfig& c, std::string_view v) { c.stirap.d = parse_time(v); }},
      {"stirap.g_peak",
       [](RunConfig& c, std::string_view v) {
         const double ratio = c.stirap.omega_peak / c.stirap.g_peak;
         c.stirap.g_peak = parse_rate(v);
         c.stirap.omega_peak = ratio * c.stirap.g_peak;
       }},
      {"stirap.omega_ratio",
       [](RunConfig& c, std::string_view v) {
         c.stirap.omega_peak = parse_dimensionless(v) * c.stirap.g_peak;
       }},
      {"decoherence.kappa", [](RunConfig& c, std::string_view v) { c.kappa = parse_rate(v); }},
      {"decoherence.gamma", [](RunConfig& c, std::string_view v) { c.gamma = parse_rate(v); }},
      {"decoherence.g_reference", [](RunConfig& c, std::string_view v) { c.g_reference = parse_rate(v); }},
      {"integrator.method",
       [](RunConfig& c, std::string_view v) {
         try {
           c.method = parse_integrator_method(v);
         } catch (const DomainError& e) {
           throw ConfigError(e.what());
         }
       }},
      {"integrator.tolerance", [](RunConfig& c, std::string_view v) { c.tolerance = parse_dimensionless(v); }},
      {"integrator.steps", [](RunConfig& c, std::string_view v) { c.open_steps = parse_int(v); }},
      {"integrator.samples", [](RunConfig& c, std::string_view v) { c.samples = parse_int(v); }},
      {"scan.eps_lo", [](RunConfig& c, std::string_view v) { c.scan_lo = parse_dimensionless(v); }},
      {"scan.eps_hi", [](RunConfig& c, std::string_view v) { c.scan_hi = parse_dimensionless(v); }},
      {"scan.samples", [](RunConfig& c, std::string_view v) { c.scan_samples = parse_int(v); }},
      {"populations.family",
       [](RunConfig& c, std::string_view v) {
         try {
           c.family = parse_pulse_family(v);
         } catch (const DomainError& e) {
           throw ConfigError(e.what());
         }
       }},
      {"fit.samples", [](RunConfig& c, std::string_view v) { c.fit_samples = parse_int(v); }},
      {"robustness.amp_range", [](RunConfig& c, std::string_view v) { c.amp_range = parse_dimensionless(v); }},
      {"robustness.width_range", [](RunConfig& c, std::string_view v) { c.width_range = parse_dimensionless(v); }},
      {"robustness.steps", [](RunConfig& c, std::string_view v) { c.robustness_steps = parse_int(v); }},
      {"grid.gamma_max", [](RunConfig& c, std::string_view v) { c.grid_gamma_max = parse_dimensionless(v); }},
      {"grid.kappa_max", [](RunConfig& c, std::string_view v) { c.grid_kappa_max = parse_dimensionless(v); }},
      {"grid.steps", [](RunConfig& c, std::string_view v) { c.grid_steps = parse_int(v); }},
      {"verify.points", [](RunConfig& c, std::string_view v) { c.verify_points = parse_int(v); }},
      {"verify.mu", [](RunConfig& c, std::string_view v) { c.verify_mu = parse_rate(v); }},
      {"verify.h", [](RunConfig& c, std::string_view v) { c.verify_h = parse_time(v); }},
      {"dump.family",
       [](RunConfig& c, std::string_view v) {
         try {
           c.dump_family = parse_pulse_family(v);
         } catch (const DomainError& e) {
           throw ConfigError(e.what());
         }
       }},
      {"dump.samples", [](RunConfig& c, std::string_view v) { c.dump_samples = parse_int(v); }},
      {"dump.t_start", [](RunConfig& c, std::string_view v) { c.dump_t_start = parse_time(v); }},
      {"dump.t_end", [](RunConfig& c, std::string_view v) { c.dump_t_end = parse_time(v); }},
  };
  return table;
}

}  // namespace

bool is_experiment(std::string_view id) {
  return std::find(std::begin(kExperiments), std::end(kExperiments), id) != std::end(kExperiments);
}

double parse_time(std::string_view value) {
  const auto q = split_quantity(value);
  if (q.unit == "us") return q.number;
  if (q.unit == "ns") return q.number * 1e-3;
  if (q.unit == "ms") return q.number * 1e3;
  if (q.unit.empty()) throw ConfigError("time value '" + std::string(trim(value)) + "' needs a unit (us, ns, ms)");
  throw ConfigError("unknown time unit '" + std::string(q.unit) + "'");
}

double parse_rate(std::string_view value) {
  const auto q = split_quantity(value);
  if (q.unit == "MHz_2pi") return units::mhz_2pi(q.number);
  if (q.unit == "kHz_2pi") return units::mhz_2pi(q.number * 1e-3);
  if (q.unit == "rad_per_us") return q.number;
  if (q.unit.empty()) {
    throw ConfigError("rate value '" + std::string(trim(value)) +
                      "' needs a unit (MHz_2pi, kHz_2pi, rad_per_us)");
  }
  throw ConfigError("unknown rate unit '" + std::string(q.unit) + "'");
}

DecoherenceParams RunConfig::decoherence() const {
  const bool cesium = experiment == "cesium-check";
  const CesiumOptions defaults;
  DecoherenceParams d{kappa.value_or(cesium ? defaults.kappa : 0.0),
                      gamma.value_or(cesium ? defaults.gamma : 0.0)};
  const std::optional<double> gref = g_reference ? g_reference
                                     : cesium    ? std::optional<double>(defaults.g_reference)
                                                 : std::nullopt;
  if (gref) {
    const double scale = gauss.eps_prime / *gref;
    d.kappa *= scale;
    d.gamma *= scale;
  }
  return d;
}

void RunConfig::validate() const {
  try {
    sta.validate();
    gauss.validate();
    stirap.validate();
    decoherence().validate();
    if (g_reference && !(*g_reference > 0.0)) throw DomainError("decoherence.g_reference must be > 0");
    PropagatorConfig pc;
    pc.method = method;
    pc.tolerance = tolerance;
    pc.step = sta.t_f / std::max(open_steps, 1);
    pc.samples = samples;
    pc.validate();
    if (open_steps < 1) throw DomainError("integrator.steps must be >= 1");
    if (!(scan_lo > 0.0 && scan_lo < scan_hi && scan_hi < std::numbers::pi / 2)) {
      throw DomainError("scan range must satisfy 0 < eps_lo < eps_hi < pi/2");
    }
    if (scan_samples < 50) throw DomainError("scan.samples must be >= 50");
    if (fit_samples < 100) throw DomainError("fit.samples must be >= 100");
    if (!(std::abs(amp_range) <= 0.2 && std::abs(width_range) <= 0.2)) {
      throw DomainError("robustness ranges must lie within +-0.2");
    }
    if (robustness_steps < 5) throw DomainError("robustness.steps must be >= 5");
    if (!(grid_gamma_max >= 0.0 && grid_gamma_max <= 0.2 && grid_kappa_max >= 0.0 &&
          grid_kappa_max <= 0.2)) {
      throw DomainError("grid axes must lie within [0, 0.2]");
    }
    if (grid_steps < 2) throw DomainError("grid.steps must be >= 2");
    if (verify_points < 2) throw DomainError("verify.points must be >= 2");
    if (!(verify_mu > 0.0)) throw DomainError("verify.mu must be > 0");
    if (!(verify_h > 0.0)) throw DomainError("verify.h must be > 0");
    if (dump_samples < 2) throw DomainError("dump.samples must be >= 2");
    if (threads < 1) throw DomainError("--threads must be >= 1");
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

RunConfig parse_config_text(std::string_view text, const std::string& source) {
  RunConfig cfg;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'section.key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.find('.') == std::string_view::npos) {
      throw ConfigError(where + "key '" + std::string(key) + "' must have the form section.key");
    }
    if (value.empty()) throw ConfigError(where + "missing value for '" + std::string(key) + "'");
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + std::string(key) + "'");
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + std::string(key) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

ScanOptions scan_options(const RunConfig& cfg) {
  ScanOptions o;
  o.eps_lo = cfg.scan_lo;
  o.eps_hi = cfg.scan_hi;
  o.samples = cfg.scan_samples;
  o.t_f = cfg.sta.t_f;
  o.delta_t = cfg.sta.delta_t;
  o.integrator = cfg.method == IntegratorMethod::dopri5
                     ? PropagatorConfig::adaptive(cfg.tolerance, 2)
                     : PropagatorConfig::fixed(cfg.sta.t_f / cfg.open_steps, 2);
  o.threads = cfg.threads;
  return o;
}

PopulationOptions population_options(const RunConfig& cfg) {
  PopulationOptions o;
  o.family = cfg.family;
  o.sta = cfg.sta;
  o.gauss = cfg.gauss;
  o.stirap = cfg.stirap;
  o.dec = cfg.decoherence();
  o.samples = cfg.samples;
  o.tolerance = cfg.tolerance;
  o.open_steps = cfg.open_steps;
  return o;
}

FitOptions fit_options(const RunConfig& cfg) {
  FitOptions o;
  o.sta = cfg.sta;
  o.samples = cfg.fit_samples;
  return o;
}

RobustnessOptions robustness_options(const RunConfig& cfg) {
  RobustnessOptions o;
  o.amp_range = cfg.amp_range;
  o.width_range = cfg.width_range;
  o.steps = cfg.robustness_steps;
  o.sta = cfg.sta;
  o.gauss = cfg.gauss;
  o.integrator = scan_options(cfg).integrator;
  o.threads = cfg.threads;
  return o;
}

DecoherenceGridOptions decoherence_grid_options(const RunConfig& cfg) {
  DecoherenceGridOptions o;
  o.gamma_max = cfg.grid_gamma_max;
  o.kappa_max = cfg.grid_kappa_max;
  o.steps = cfg.grid_steps;
  o.sta = cfg.sta;
  o.gauss = cfg.gauss;
  o.open_steps = cfg.open_steps;
  o.threads = cfg.threads;
  return o;
}

CesiumOptions cesium_options(const RunConfig& cfg) {
  CesiumOptions o;
  if (cfg.kappa) o.kappa = *cfg.kappa;
  if (cfg.gamma) o.gamma = *cfg.gamma;
  if (cfg.g_reference) o.g_reference = *cfg.g_reference;
  o.sta = cfg.sta;
  o.gauss = cfg.gauss;
  o.open_steps = cfg.open_steps;
  o.samples = cfg.samples;
  return o;
}

}  // namespace staqst::cli
