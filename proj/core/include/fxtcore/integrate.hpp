#pragma once

#include <Eigen/Core>
#include <functional>

#include "fxtcore/errors.hpp"

namespace fxt {

using DerivFn = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

/// Classical fourth-order Runge-Kutta step.
inline Eigen::VectorXd rk4_step(const DerivFn& deriv, const Eigen::VectorXd& state,
                                double t, double dt) {
  if (dt <= 0.0) throw ConfigError("rk4_step: dt must be positive");
  const Eigen::VectorXd k1 = deriv(t, state);
  const Eigen::VectorXd k2 = deriv(t + 0.5 * dt, state + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = deriv(t + 0.5 * dt, state + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = deriv(t + dt, state + dt * k3);
  Eigen::VectorXd next = state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw NonFiniteOutput("rk4_step: non-finite state");
  return next;
}

}  // namespace fxt
