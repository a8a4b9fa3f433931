#include "staqst/integrators.hpp"

#include <string>

namespace staqst {

std::string_view to_string(IntegratorMethod m) {
  return m == IntegratorMethod::rk4 ? "rk4" : "dopri5";
}

IntegratorMethod parse_integrator_method(std::string_view name) {
  if (name == "rk4") return IntegratorMethod::rk4;
  if (name == "dopri5") return IntegratorMethod::dopri5;
  throw DomainError("unknown integrator '" + std::string(name) + "' (expected rk4 or dopri5)");
}

PropagatorConfig PropagatorConfig::adaptive(double tolerance, int samples) {
  PropagatorConfig c;
  c.method = IntegratorMethod::dopri5;
  c.tolerance = tolerance;
  c.samples = samples;
  return c;
}

PropagatorConfig PropagatorConfig::fixed(double step, int samples) {
  PropagatorConfig c;
  c.method = IntegratorMethod::rk4;
  c.step = step;
  c.samples = samples;
  return c;
}

void PropagatorConfig::validate() const {
  if (samples < 2) throw DomainError("trajectory needs at least 2 samples");
  if (method == IntegratorMethod::rk4) {
    if (!(step > 0.0) || !std::isfinite(step)) {
      throw DomainError("fixed-step integrator needs step > 0");
    }
  } else if (!(tolerance > 1e-14 && tolerance < 1e-4)) {
    throw DomainError("adaptive tolerance must lie in (1e-14, 1e-4)");
  }
}

}  // namespace staqst
