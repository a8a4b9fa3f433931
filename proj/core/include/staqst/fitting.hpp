#pragma once

#include <span>
#include <vector>

#include "staqst/pulses.hpp"

namespace staqst {

struct CurveSample {
  double t = 0.0;
  double value = 0.0;
};

struct FitResult {
  double eps_prime = 0.0;  ///< rad/us
  double sigma = 0.0;      ///< us
  double rss = 0.0;        ///< weighted residual sum of squares
  int iterations = 0;
  bool converged = false;
};

/// Samples of the sinusoidal cavity coupling g1(t) = A cos(pi t / 2 t_f) on
/// [0, t_f], `count` evenly spaced points including both ends.
std::vector<CurveSample> sample_sinusoidal_coupling(const StaParams& sta, int count);

/// Least-squares fit of eps' exp(-t^2 / sigma^2) to evenly spaced samples.
/// Residuals are weighted with composite Simpson weights (trapezoid for an
/// even sample count), so the objective approximates the L2 distance on the
/// sampled interval. Gauss-Newton with backtracking; converged when the
/// relative parameter update drops below 1e-10, or below 1e-6 once no step
/// strictly lowers the objective. Throws NumericalError after 200 iterations
/// without convergence.
FitResult fit_gaussian(std::span<const CurveSample> target, const FitResult& seed);

}  // namespace staqst
