#pragma once

#include <numbers>

// Internal units: time in microseconds, every rate and coupling in rad/us.
namespace staqst::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A frequency quoted as "X x 2pi MHz" in rad/us.
constexpr double mhz_2pi(double x) { return kTwoPi * x; }

}  // namespace staqst::units
