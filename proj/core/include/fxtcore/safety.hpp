#pragma once

#include <Eigen/Core>
#include <functional>

#include "fxtcore/estimation.hpp"
#include "fxtcore/systems.hpp"

namespace fxt {

/// Control barrier function h with safe set {x : h(x) >= 0}.
struct BarrierFunction {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::RowVectorXd(const Eigen::VectorXd&)> gradient;
  std::function<double(double)> alpha = [](double s) { return s; };
};

/// h_r(x, t) = h(x) - (1/2) eta(t)^2 Tr(Gamma^-1).
struct ShrunkenBarrier {
  BarrierFunction base;
  Eigen::VectorXd gamma_diag;
  ErrorEnvelope envelope;
};

/// FxT-CLF with rates for the QP convergence row.
struct ClfSpec {
  std::function<double(const Eigen::VectorXd&)> value;
  std::function<Eigen::RowVectorXd(const Eigen::VectorXd&)> gradient;
  double c1 = 0.0;
  double c2 = 0.0;
  double gamma1 = 0.0;  // > 1
  double gamma2 = 0.0;  // in (0, 1)
};

BarrierFunction ellipse_cbf(const Eigen::Vector2d& center,
                            const Eigen::Vector2d& semi_axes);

BarrierFunction altitude_cbf(double c_z, double p_z, int n_z);

BarrierFunction attitude_cbf(double alpha_max);

double shrunken_value(const ShrunkenBarrier& sb, const Eigen::VectorXd& x, double t);

/// nu = sum_i min{C_i clamp(theta_hat_i - eta), C_i clamp(theta_hat_i + eta)}
/// lower-bounding C . theta over the eta-box intersected with Theta.
double nu_projection(const Eigen::RowVectorXd& C, const Eigen::VectorXd& theta_hat,
                     double eta, const Box& theta_box);

/// Box-maximum counterpart of nu_projection (used on the CLF row).
double nu_projection_max(const Eigen::RowVectorXd& C, const Eigen::VectorXd& theta_hat,
                         double eta, const Box& theta_box);

/// r(t, theta_hat) = Tr(Gamma^-1) eta etadot + nu, with C the row
/// L_Delta h_r(x) = grad h(x) * Delta(x).
double racbf_margin(const ShrunkenBarrier& sb, const SystemModel& model,
                    const Eigen::VectorXd& x, double t,
                    const Eigen::VectorXd& theta_hat);

/// Nagumo boundary diagnostic: L_f h + L_g h u + L_Delta h theta >= 0.
bool nagumo_check(const BarrierFunction& h, const SystemModel& model,
                  const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& theta);

}  // namespace fxt
