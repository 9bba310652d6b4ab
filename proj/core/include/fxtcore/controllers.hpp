#pragma once

#include <Eigen/Core>
#include <vector>

#include "fxtcore/qp.hpp"
#include "fxtcore/quadrotor.hpp"
#include "fxtcore/safety.hpp"
#include "fxtcore/systems.hpp"

namespace fxt {

struct GapQpWeights {
  Eigen::MatrixXd Q;       // control cost, m x m
  double q0 = 10.0;        // CLF slack penalty
  double p_i = 10.0;       // CBF slack penalty
  double delta_lb = 1.0;   // lower bound on delta_i
};

/// CLF-CBF-QP for the gap scenario. Decision vars (u, delta0, delta1..q).
/// Barrier rows carry the raCBF margin; the CLF row carries the worst-case
/// drift term over the current admissible parameter box.
QuadraticProgram build_gap_qp(const SystemModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& theta_hat, double t,
                              const std::vector<ShrunkenBarrier>& cbfs,
                              const ClfSpec& clf, const GapQpWeights& weights);

struct TrackingQpWeights {
  double p1 = 100.0;
  double p2 = 100.0;
  double delta_lb = 1e-3;
};

/// Safety filter for the quadrotor. Decision vars (F, tau_phi, tau_theta,
/// tau_psi, delta1, delta2); minimizes deviation from u_nom.
QuadraticProgram build_tracking_qp(const SystemModel& model, const Eigen::VectorXd& chi,
                                   const Eigen::VectorXd& u_nom,
                                   const std::vector<ShrunkenBarrier>& cbfs, double t,
                                   const Eigen::VectorXd& theta_hat,
                                   const TrackingQpWeights& weights);

struct ReferencePoint {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // inertial frame
  double yaw = 0.0;
};

struct TrackingGains {
  double kp_pos = 4.0;
  double kd_pos = 3.5;
  double kp_att = 60.0;
  double kd_att = 12.0;
  double kp_yaw = 10.0;
  double kd_yaw = 4.0;
  double tilt_max = 0.9;  // rad, commanded roll/pitch clamp
};

/// Cascaded tracking controller: outer-loop PD on position produces a
/// desired acceleration (compensating the estimated drag), converted to
/// thrust and attitude setpoints, tracked by an inner-loop PD on attitude.
Eigen::Vector4d nominal_tracking_control(const Eigen::VectorXd& chi,
                                         const ReferencePoint& ref, double mass_kg,
                                         const Eigen::Vector3d& J_kgm2,
                                         const TrackingGains& gains,
                                         const Eigen::Vector3d& drag_accel_body,
                                         const Box& input_bounds);

}  // namespace fxt
