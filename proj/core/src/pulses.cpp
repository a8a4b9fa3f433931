#include "staqst/pulses.hpp"

#include <numbers>
#include <string>

#include "staqst/error.hpp"

namespace staqst {

namespace {

constexpr double kPi = std::numbers::pi;

bool in_window(double t, double lo, double hi) { return t >= lo && t <= hi; }

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be finite and > 0");
  }
}

}  // namespace

void StaParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < kPi / 2.0)) {
    throw DomainError("epsilon must lie in (0, pi/2), got " + std::to_string(epsilon));
  }
  require_positive(t_f, "t_f");
  if (!(delta_t >= 0.0) || !std::isfinite(delta_t)) {
    throw DomainError("delta_t must be finite and >= 0");
  }
}

double StaParams::amplitude() const { return kPi / (2.0 * t_f) / std::tan(epsilon); }

void GaussianParams::validate() const {
  require_positive(eps_prime, "eps_prime");
  require_positive(sigma, "sigma");
  if (!std::isfinite(delta_t)) throw DomainError("delta_t must be finite");
}

StirapParams StirapParams::with_window(double t_a) {
  StirapParams p;
  p.t_a = t_a;
  p.w_c = t_a / 6.0;
  p.w_l = t_a / 12.0;
  p.d = t_a / 40.0;
  return p;
}

void StirapParams::validate() const {
  require_positive(t_a, "t_a");
  require_positive(w_c, "w_c");
  require_positive(w_l, "w_l");
  require_positive(g_peak, "g_peak");
  require_positive(omega_peak, "omega_peak");
  require_positive(d, "d");
}

AtomControls sta_single(const StaParams& p, double t) {
  if (!in_window(t, 0.0, p.t_f)) return {};
  const double a = p.amplitude();
  const double beta = kPi * t / (2.0 * p.t_f);
  return {a * std::sin(beta), a * std::cos(beta)};
}

ControlSample sta_pair(const StaParams& p, double t) {
  if (!in_window(t, 0.0, p.t_f)) return {};
  const double a = p.amplitude();
  const double k = kPi / (2.0 * p.t_f);
  ControlSample c;
  c.g1 = a * std::cos(k * t);
  c.omega1 = a * std::sin(k * t);
  c.g2 = a * std::cos(k * (t - p.delta_t));
  c.omega2 = a * std::sin(k * (t + p.delta_t));
  return c;
}

GaussianCouplings gaussian_pair(const GaussianParams& p, double t) {
  const double s2 = p.sigma * p.sigma;
  const double u = t - p.delta_t;
  return {p.eps_prime * std::exp(-t * t / s2), p.eps_prime * std::exp(-u * u / s2)};
}

StirapSample stirap_set(const StirapParams& p, double t) {
  if (!in_window(t, 0.0, p.t_a)) return {};
  const double c = t - p.t_a / 2.0;
  const double wl2 = p.w_l * p.w_l;
  StirapSample s;
  s.g = p.g_peak * std::exp(-c * c / (p.w_c * p.w_c));
  s.omega1 = p.omega_peak * std::exp(-(c - p.d) * (c - p.d) / wl2);
  s.omega2 = p.omega_peak * std::exp(-(c + p.d) * (c + p.d) / wl2);
  return s;
}

GaussianParams perturb(const GaussianParams& base, double rel_amp, double rel_width) {
  if (!(std::abs(rel_amp) <= 0.5) || !(std::abs(rel_width) <= 0.5)) {
    throw DomainError("relative perturbations must satisfy |delta| <= 0.5");
  }
  GaussianParams out = base;
  out.eps_prime = base.eps_prime * (1.0 + rel_amp);
  out.sigma = base.sigma * (1.0 + rel_width);
  return out;
}

std::string_view to_string(PulseFamily family) {
  switch (family) {
    case PulseFamily::sta_sinusoidal: return "sta_sinusoidal";
    case PulseFamily::sta_gaussian: return "sta_gaussian";
    case PulseFamily::stirap: return "stirap";
  }
  return "unknown";
}

PulseFamily parse_pulse_family(std::string_view name) {
  if (name == "sta_sinusoidal") return PulseFamily::sta_sinusoidal;
  if (name == "sta_gaussian") return PulseFamily::sta_gaussian;
  if (name == "stirap") return PulseFamily::stirap;
  throw DomainError("unknown pulse family '" + std::string(name) +
                    "' (expected sta_sinusoidal, sta_gaussian or stirap)");
}

PulseSet::PulseSet(PulseFamily family, Params params, double t_start, double t_end)
    : family_(family), params_(std::move(params)), t_start_(t_start), t_end_(t_end) {}

PulseSet PulseSet::sta_sinusoidal(const StaParams& sta) {
  sta.validate();
  return PulseSet(PulseFamily::sta_sinusoidal, sta, 0.0, sta.t_f);
}

PulseSet PulseSet::sta_gaussian(const StaParams& sta, const GaussianParams& gauss) {
  sta.validate();
  gauss.validate();
  return PulseSet(PulseFamily::sta_gaussian, Gaussian{sta, gauss}, 0.0, sta.t_f);
}

PulseSet PulseSet::stirap(const StirapParams& stirap) {
  stirap.validate();
  return PulseSet(PulseFamily::stirap, stirap, 0.0, stirap.t_a);
}

ControlSample PulseSet::operator()(double t) const {
  if (!in_window(t, t_start_, t_end_)) return {};
  if (const auto* sta = std::get_if<StaParams>(&params_)) return sta_pair(*sta, t);
  if (const auto* g = std::get_if<Gaussian>(&params_)) {
    ControlSample c = sta_pair(g->sta, t);
    const auto gc = gaussian_pair(g->gauss, t);
    c.g1 = gc.g1;
    c.g2 = gc.g2;
    return c;
  }
  const auto s = stirap_set(std::get<StirapParams>(params_), t);
  return {s.omega1, s.g, s.omega2, s.g};
}

double PulseSet::coupling_scale() const {
  if (const auto* sta = std::get_if<StaParams>(&params_)) return sta->amplitude();
  if (const auto* g = std::get_if<Gaussian>(&params_)) return g->gauss.eps_prime;
  return std::get<StirapParams>(params_).g_peak;
}

std::vector<PulseSample> sample_pulses(const PulseSet& pulses, double from, double to,
                                       int count) {
  if (count < 2 || !(to > from)) {
    throw DomainError("pulse sampling needs count >= 2 and to > from");
  }
  std::vector<PulseSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = (i == count - 1) ? to : from + (to - from) * i / (count - 1);
    out.push_back({t, pulses(t)});
  }
  return out;
}

}  // namespace staqst
