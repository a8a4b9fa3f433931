#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "staqst/error.hpp"

namespace staqst {

enum class IntegratorMethod { rk4, dopri5 };

std::string_view to_string(IntegratorMethod m);
IntegratorMethod parse_integrator_method(std::string_view name);

struct PropagatorConfig {
  IntegratorMethod method = IntegratorMethod::dopri5;
  double step = 0.0;        ///< fixed step, us (rk4 only)
  double tolerance = 1e-10; ///< relative and absolute tolerance (dopri5 only)
  int samples = 501;        ///< trajectory samples, endpoints included

  static PropagatorConfig adaptive(double tolerance = 1e-10, int samples = 501);
  static PropagatorConfig fixed(double step, int samples = 501);

  void validate() const;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
};

/// Classical fourth-order Runge-Kutta step. `State` is any Eigen dense type;
/// `rhs(t, y, dy)` writes dy/dt.
template <class State, class Rhs>
class Rk4Stepper {
 public:
  explicit Rk4Stepper(Rhs rhs) : rhs_(std::forward<Rhs>(rhs)) {}

  void step(double t, double h, State& y) {
    rhs_(t, y, k1_);
    tmp_ = y + (0.5 * h) * k1_;
    rhs_(t + 0.5 * h, tmp_, k2_);
    tmp_ = y + (0.5 * h) * k2_;
    rhs_(t + 0.5 * h, tmp_, k3_);
    tmp_ = y + h * k3_;
    rhs_(t + h, tmp_, k4_);
    y += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  Rhs rhs_;
  State k1_, k2_, k3_, k4_, tmp_;
};

/// Dormand-Prince 5(4) embedded pair with FSAL and standard step control.
template <class State, class Rhs>
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, double tolerance) : rhs_(std::forward<Rhs>(rhs)), tol_(tolerance) {}

  /// Advances y from t0 to t1 (t1 > t0), landing exactly on t1.
  void advance(double t0, double t1, State& y) {
    double t = t0;
    if (h_ <= 0.0) h_ = initial_step(t0, t1, y);
    bool have_k1 = false;
    while (t < t1) {
      const bool last = t + h_ >= t1;
      const double h = last ? (t1 - t) : h_;
      if (!have_k1 || !fsal_valid_) rhs_(t, y, k1_);
      have_k1 = true;

      tmp_ = y + h * (a21 * k1_);
      rhs_(t + c2 * h, tmp_, k2_);
      tmp_ = y + h * (a31 * k1_ + a32 * k2_);
      rhs_(t + c3 * h, tmp_, k3_);
      tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
      rhs_(t + c4 * h, tmp_, k4_);
      tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
      rhs_(t + c5 * h, tmp_, k5_);
      tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
      rhs_(t + h, tmp_, k6_);
      ynew_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
      rhs_(t + h, ynew_, k7_);
      err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);

      const double scale_floor = tol_;
      double err = 0.0;
      for (Eigen::Index i = 0; i < err_.size(); ++i) {
        const double sc =
            scale_floor + tol_ * std::max(std::abs(y.data()[i]), std::abs(ynew_.data()[i]));
        err = std::max(err, std::abs(err_.data()[i]) / sc);
      }
      if (!std::isfinite(err)) {
        throw NumericalError("adaptive integrator produced a non-finite error estimate");
      }

      if (err <= 1.0) {
        t = last ? t1 : t + h;
        y = ynew_;
        k1_ = k7_;
        fsal_valid_ = true;
        ++stats_.accepted;
        const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        if (!last) h_ = h * grow;
        else h_ = std::max(h_, h * grow);
      } else {
        ++stats_.rejected;
        fsal_valid_ = true;  // k1 still belongs to (t, y)
        h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        if (h_ < 1e-14 * std::max(1.0, std::abs(t))) {
          throw NumericalError("adaptive step size underflow at t = " + std::to_string(t));
        }
      }
    }
  }

  const IntegrationStats& stats() const { return stats_; }

 private:
  double initial_step(double t0, double t1, const State& y) {
    rhs_(t0, y, k1_);
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1_.cwiseAbs().maxCoeff();
    double h = (d0 > 1e-12 && d1 > 1e-12) ? 0.01 * d0 / d1 : 1e-6;
    return std::min(h, t1 - t0);
  }

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  Rhs rhs_;
  double tol_;
  double h_ = 0.0;
  bool fsal_valid_ = false;
  IntegrationStats stats_;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, ynew_, err_;
};

}  // namespace staqst
