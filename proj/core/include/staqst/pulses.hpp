#pragma once

#include <array>
#include <cmath>
#include <string_view>
#include <variant>
#include <vector>

#include "staqst/hilbert.hpp"
#include "staqst/units.hpp"

namespace staqst {

/// Sinusoidal shortcut pulses built from the constant-angle ansatz
/// gamma(t) = epsilon, beta(t) = pi t / (2 t_f).
struct StaParams {
  double epsilon = 0.1152;  ///< rad, 0 < epsilon < pi/2
  double t_f = 0.5;         ///< us
  double delta_t = 0.5;     ///< inter-atom delay, us

  void validate() const;
  /// Common pulse amplitude (pi / 2 t_f) cot(epsilon), rad/us.
  double amplitude() const;
};

/// Gaussian refit of the cavity couplings.
struct GaussianParams {
  double eps_prime = units::mhz_2pi(4.5);  ///< peak, rad/us
  double sigma = std::sqrt(0.14);          ///< width, us
  double delta_t = 0.5;                    ///< us

  void validate() const;
};

/// Conventional adiabatic-passage pulse train used as the baseline.
struct StirapParams {
  double t_a = 10.0;                          ///< total window, us
  double w_c = 10.0 / 6.0;                    ///< cavity width, us
  double w_l = 10.0 / 12.0;                   ///< laser width, us
  double g_peak = units::mhz_2pi(4.5);        ///< rad/us
  double omega_peak = 0.3 * units::mhz_2pi(4.5);  ///< rad/us
  double d = 10.0 / 40.0;                     ///< laser offset, us

  /// Widths and offsets scaled from the window length.
  static StirapParams with_window(double t_a);
  void validate() const;
};

/// The four controls of the two-atom scheme at one instant, rad/us.
struct ControlSample {
  double omega1 = 0.0;
  double g1 = 0.0;
  double omega2 = 0.0;
  double g2 = 0.0;

  std::array<AtomControls, 2> atoms() const { return {{{omega1, g1}, {omega2, g2}}}; }
};

/// Single-atom shortcut pulses on [0, t_f]:
///   Omega = A sin(pi t / 2 t_f), g = A cos(pi t / 2 t_f).
/// Zero outside the window.
AtomControls sta_single(const StaParams& p, double t);

/// Two-atom shortcut pulses on [0, t_f]; atom 2 is delayed by delta_t.
ControlSample sta_pair(const StaParams& p, double t);

struct GaussianCouplings {
  double g1 = 0.0;
  double g2 = 0.0;
};

/// G1 = eps' exp(-t^2/sigma^2), G2 = eps' exp(-(t - dT)^2/sigma^2).
GaussianCouplings gaussian_pair(const GaussianParams& p, double t);

struct StirapSample {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double g = 0.0;  ///< common cavity coupling for both atoms
};

StirapSample stirap_set(const StirapParams& p, double t);

/// Static relative fluctuation of the Gaussian refit:
/// eps' -> eps' (1 + rel_amp), sigma -> sigma (1 + rel_width).
GaussianParams perturb(const GaussianParams& base, double rel_amp, double rel_width);

enum class PulseFamily { sta_sinusoidal, sta_gaussian, stirap };

std::string_view to_string(PulseFamily family);
PulseFamily parse_pulse_family(std::string_view name);

/// Time-dependent controls {Omega1, g1, Omega2, g2} over a schedule window.
/// Outside [t_start, t_end] every control is exactly zero.
class PulseSet {
 public:
  static PulseSet sta_sinusoidal(const StaParams& sta);
  static PulseSet sta_gaussian(const StaParams& sta, const GaussianParams& gauss);
  static PulseSet stirap(const StirapParams& stirap);

  ControlSample operator()(double t) const;

  double t_start() const { return t_start_; }
  double t_end() const { return t_end_; }
  PulseFamily family() const { return family_; }

  /// Peak coupling used to express decay rates as ratios (the Gaussian
  /// peak for the refit family, the shortcut amplitude otherwise).
  double coupling_scale() const;

 private:
  struct Gaussian {
    StaParams sta;
    GaussianParams gauss;
  };
  using Params = std::variant<StaParams, Gaussian, StirapParams>;

  PulseSet(PulseFamily family, Params params, double t_start, double t_end);

  PulseFamily family_;
  Params params_;
  double t_start_;
  double t_end_;
};

struct PulseSample {
  double t = 0.0;
  ControlSample controls;
};

/// `count` evenly spaced samples over [from, to], endpoints included.
std::vector<PulseSample> sample_pulses(const PulseSet& pulses, double from, double to,
                                       int count);

}  // namespace staqst
