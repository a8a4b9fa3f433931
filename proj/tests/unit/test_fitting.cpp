#include <gtest/gtest.h>

#include <cmath>

#include "staqst/error.hpp"
#include "staqst/fitting.hpp"

using namespace staqst;

namespace {

std::vector<CurveSample> gaussian_samples(double amp, double sigma, double t_end, int n) {
  std::vector<CurveSample> out;
  for (int i = 0; i < n; ++i) {
    const double t = t_end * i / (n - 1);
    out.push_back({t, amp * std::exp(-t * t / (sigma * sigma))});
  }
  return out;
}

}  // namespace

TEST(GaussianFit, RecoversExactGaussian) {
  const auto data = gaussian_samples(20.0, 0.4, 0.5, 201);
  const auto r = fit_gaussian(data, {25.0, 0.3, 0.0, 0, false});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.eps_prime, 20.0, 1e-8);
  EXPECT_NEAR(r.sigma, 0.4, 1e-9);
  EXPECT_LT(r.rss, 1e-18);
}

TEST(GaussianFit, SinusoidalCouplingWithinTenPercent) {
  const StaParams sta;
  const auto samples = sample_sinusoidal_coupling(sta, 201);
  ASSERT_EQ(samples.size(), 201u);
  EXPECT_DOUBLE_EQ(samples.front().t, 0.0);
  EXPECT_DOUBLE_EQ(samples.back().t, sta.t_f);
  EXPECT_NEAR(samples.front().value, sta.amplitude(), 1e-12);

  const auto r = fit_gaussian(samples, {units::mhz_2pi(4.0), 0.3, 0.0, 0, false});
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.eps_prime, units::mhz_2pi(4.5), 0.1 * units::mhz_2pi(4.5));
  EXPECT_NEAR(r.sigma, std::sqrt(0.14), 0.1 * std::sqrt(0.14));
}

TEST(GaussianFit, StableUnderSampleRefinement) {
  const StaParams sta;
  const FitResult seed{units::mhz_2pi(4.0), 0.3, 0.0, 0, false};
  const auto a = fit_gaussian(sample_sinusoidal_coupling(sta, 201), seed);
  const auto b = fit_gaussian(sample_sinusoidal_coupling(sta, 401), seed);
  EXPECT_NEAR(a.eps_prime / b.eps_prime, 1.0, 1e-6);
  EXPECT_NEAR(a.sigma / b.sigma, 1.0, 1e-6);
}

TEST(GaussianFit, RejectsBadInput) {
  const auto data = gaussian_samples(1.0, 1.0, 1.0, 2);
  EXPECT_THROW(fit_gaussian(data, {1.0, 1.0, 0.0, 0, false}), DomainError);
  const auto ok = gaussian_samples(1.0, 1.0, 1.0, 11);
  EXPECT_THROW(fit_gaussian(ok, {-1.0, 1.0, 0.0, 0, false}), DomainError);
}
