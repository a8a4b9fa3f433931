#include "staqst/fitting.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "staqst/error.hpp"

namespace staqst {

namespace {

constexpr int kMaxIterations = 200;
constexpr double kRelativeUpdateTol = 1e-10;

std::vector<double> quadrature_weights(std::size_t n, double h) {
  std::vector<double> w(n, h);
  if (n % 2 == 1 && n >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = (i == 0 || i == n - 1) ? h / 3.0 : (i % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    }
  } else {
    w.front() = w.back() = h / 2.0;
  }
  return w;
}

double weighted_rss(std::span<const CurveSample> s, const std::vector<double>& w, double amp,
                    double sigma) {
  double rss = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r = amp * std::exp(-s[i].t * s[i].t / (sigma * sigma)) - s[i].value;
    rss += w[i] * r * r;
  }
  return rss;
}

}  // namespace

std::vector<CurveSample> sample_sinusoidal_coupling(const StaParams& sta, int count) {
  sta.validate();
  if (count < 2) throw DomainError("need at least 2 samples");
  std::vector<CurveSample> out;
  out.reserve(static_cast<std::size_t>(count));
  const double a = sta.amplitude();
  for (int i = 0; i < count; ++i) {
    const double t = (i == count - 1) ? sta.t_f : sta.t_f * i / (count - 1);
    out.push_back({t, a * std::cos(std::numbers::pi * t / (2.0 * sta.t_f))});
  }
  return out;
}

FitResult fit_gaussian(std::span<const CurveSample> target, const FitResult& seed) {
  if (target.size() < 3) throw DomainError("Gaussian fit needs at least 3 samples");
  if (!(seed.eps_prime > 0.0) || !(seed.sigma > 0.0)) {
    throw DomainError("Gaussian fit seed must have eps' > 0 and sigma > 0");
  }
  const double h = (target.back().t - target.front().t) / static_cast<double>(target.size() - 1);
  const auto w = quadrature_weights(target.size(), h);

  double amp = seed.eps_prime;
  double sigma = seed.sigma;
  double rss = weighted_rss(target, w, amp, sigma);

  for (int it = 1; it <= kMaxIterations; ++it) {
    // Normal equations of the weighted linearized problem.
    double jaa = 0.0, jas = 0.0, jss = 0.0, ga = 0.0, gs = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      const double t2 = target[i].t * target[i].t;
      const double e = std::exp(-t2 / (sigma * sigma));
      const double r = amp * e - target[i].value;
      const double da = e;
      const double ds = amp * e * 2.0 * t2 / (sigma * sigma * sigma);
      jaa += w[i] * da * da;
      jas += w[i] * da * ds;
      jss += w[i] * ds * ds;
      ga += w[i] * da * r;
      gs += w[i] * ds * r;
    }
    const double det = jaa * jss - jas * jas;
    if (!(std::abs(det) > 0.0) || !std::isfinite(det)) {
      throw NumericalError("Gaussian fit: singular normal equations at iteration " +
                           std::to_string(it));
    }
    const double step_a = -(jss * ga - jas * gs) / det;
    const double step_s = -(jaa * gs - jas * ga) / det;

    const double rel = std::max(std::abs(step_a) / std::abs(amp), std::abs(step_s) / sigma);
    if (rel < kRelativeUpdateTol) {
      amp += step_a;
      sigma += step_s;
      return {amp, sigma, weighted_rss(target, w, amp, sigma), it, true};
    }

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, lambda *= 0.5) {
      const double a2 = amp + lambda * step_a;
      const double s2 = sigma + lambda * step_s;
      if (!(a2 > 0.0) || !(s2 > 0.0)) continue;
      const double r2 = weighted_rss(target, w, a2, s2);
      if (r2 < rss) {
        amp = a2;
        sigma = s2;
        rss = r2;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // No descent along the Gauss-Newton direction: at the floating-point
      // floor of the objective.
      return {amp, sigma, rss, it, rel < 1e-6};
    }
  }
  throw NumericalError("Gaussian fit did not converge in " + std::to_string(kMaxIterations) +
                       " iterations (eps' = " + std::to_string(amp) + ", sigma = " +
                       std::to_string(sigma) + ", rss = " + std::to_string(rss) + ")");
}

}  // namespace staqst
