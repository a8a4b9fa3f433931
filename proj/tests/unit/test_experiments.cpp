#include <gtest/gtest.h>

#include <cmath>

#include "staqst/error.hpp"
#include "staqst/experiments.hpp"

using namespace staqst;

TEST(Sweep, ParabolicRefinement) {
  const auto x = linear_axis(0.0, 1.0, 41);
  std::vector<double> y;
  for (double v : x) y.push_back(1.0 - (v - 0.3137) * (v - 0.3137));
  const auto m = refined_local_maxima(x, y);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_NEAR(m[0].argument, 0.3137, 1e-12);
  EXPECT_NEAR(m[0].value, 1.0, 1e-12);
}

TEST(Sweep, Axes) {
  const auto s = symmetric_axis(0.1, 11);
  ASSERT_EQ(s.size(), 11u);
  EXPECT_EQ(s[5], 0.0);
  EXPECT_DOUBLE_EQ(s.front(), -0.1);
  EXPECT_DOUBLE_EQ(s.back(), 0.1);
  const auto l = linear_axis(0.03, 0.2, 400);
  EXPECT_DOUBLE_EQ(l.back(), 0.2);
}

TEST(Sweep, PeakOrdering) {
  SweepResult r;
  r.maxima = {{0.03, 0.999, 1}, {0.06, 0.990, 2}, {0.07, 0.998, 3}, {0.11, 0.997, 4}};
  const auto p = high_fidelity_peaks(r);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_DOUBLE_EQ(p[0].argument, 0.11);
  EXPECT_DOUBLE_EQ(p[1].argument, 0.07);
}

TEST(Scan, PeaksAndOffPeakMargin) {
  ScanOptions o;
  const auto scan = scan_epsilon(o);
  ASSERT_EQ(scan.values.size(), 400u);
  const auto peaks = high_fidelity_peaks(scan);
  ASSERT_GE(peaks.size(), 2u);
  EXPECT_NEAR(peaks[0].argument, 0.1152, 0.002);
  EXPECT_NEAR(peaks[1].argument, 0.0651, 0.002);
  EXPECT_GE(scan.maxima.size(), 2u);
  EXPECT_TRUE(summarize_scan(scan).all_passed());

  // Off-peak contrast at eps = 0.09. The simulated margin is about 0.019.
  const double off = closed_transfer_fidelity(PulseSet::sta_sinusoidal({0.09, 0.5, 0.5}),
                                              PropagatorConfig::adaptive(1e-10, 2));
  EXPECT_NEAR(off, 0.97852, 1e-4);
  EXPECT_GE(peaks[0].value - off, 0.015);
}

TEST(Populations, FamiliesAgainstReferenceValues) {
  PopulationOptions o;
  const auto sin = run_populations(o);
  EXPECT_NEAR(sin.final_report().fidelity, 0.997863, 2e-6);
  const auto s1 = summarize_populations(sin);
  EXPECT_TRUE(s1.all_passed());

  o.family = PulseFamily::sta_gaussian;
  const auto gauss = run_populations(o);
  EXPECT_NEAR(gauss.final_report().fidelity, 0.999912, 2e-6);
  EXPECT_TRUE(summarize_populations(gauss, sin.final_report().fidelity).all_passed());

  o.family = PulseFamily::stirap;
  const auto stirap = run_populations(o);
  EXPECT_NEAR(stirap.final_report().fidelity, 0.86893, 2e-5);
  EXPECT_DOUBLE_EQ(stirap.times.back() - stirap.times.front(), 10.0);
  EXPECT_TRUE(summarize_populations(stirap).all_passed());

  const auto table = population_table(sin);
  EXPECT_EQ(table.rows(), 501u);
  EXPECT_EQ(table.header().front(), "t_us");
  EXPECT_EQ(table.header().back(), "fidelity");
}

TEST(Fit, SummaryPasses) {
  const auto fit = run_gaussian_fit(FitOptions{});
  EXPECT_TRUE(fit.fit.converged);
  EXPECT_TRUE(summarize_fit(fit).all_passed());
}

TEST(Robustness, GridIsDeterministicAcrossThreads) {
  RobustnessOptions o;
  o.steps = 5;
  const auto a = robustness_grid(o);
  o.threads = 3;
  const auto b = robustness_grid(o);
  ASSERT_EQ(a.values.size(), 25u);
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(a.at(2, 2), a.values[12]);
  EXPECT_NEAR(a.at(2, 2), 0.999912, 2e-6);
}

TEST(Robustness, FullGridMinimum) {
  const auto grid = robustness_grid(RobustnessOptions{});
  EXPECT_NEAR(grid.min_value(), 0.97514, 1e-5);
  EXPECT_TRUE(summarize_robustness(grid).all_passed());
}

TEST(Decoherence, SmallGridStructure) {
  DecoherenceGridOptions o;
  o.steps = 2;
  o.open_steps = 2000;
  const auto grid = decoherence_grid(o);
  ASSERT_EQ(grid.values.size(), 4u);
  const double closed = closed_transfer_fidelity(PulseSet::sta_gaussian(o.sta, o.gauss),
                                                 PropagatorConfig::adaptive(1e-10, 2));
  EXPECT_NEAR(grid.at(0, 0), closed, 1e-6);
  EXPECT_NEAR(grid.at(0, 1), 0.81258, 1e-4);  // kappa/g = 0.1
  EXPECT_NEAR(grid.at(1, 0), 0.95526, 1e-4);  // Gamma/g = 0.1
  EXPECT_TRUE(summarize_decoherence(grid, closed).all_passed());
}

TEST(Cesium, RatioScaledRates) {
  const auto r = cesium_check(CesiumOptions{});
  EXPECT_NEAR(r.effective.kappa, units::mhz_2pi(4.5) * 3.5 / 750.0, 1e-12);
  EXPECT_NEAR(r.fidelity, 0.98859, 1e-5);
  EXPECT_NEAR(r.literal_fidelity, 0.19528, 1e-4);
  EXPECT_TRUE(summarize_cesium(r).all_passed());
}

TEST(Invariant, VerificationTable) {
  const auto rows = verify_invariant(StaParams{}, 11);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_TRUE(summarize_invariant(rows).all_passed());
  EXPECT_THROW(verify_invariant(StaParams{}, 1), DomainError);
}
