#pragma once

#include <Eigen/Core>

#include "fxtcore/systems.hpp"

namespace fxt {

/// 12-state rigid-body quadrotor state
///   chi = [x y z u v w phi theta psi p q r]
/// with position in the inertial frame, translational velocity in the
/// body-fixed frame, ZYX Euler angles, and body rates.
struct QuadrotorState {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();   // x, y, z (m)
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();   // u, v, w (m/s, body)
  Eigen::Vector3d angles = Eigen::Vector3d::Zero();     // phi, theta, psi (rad)
  Eigen::Vector3d rates = Eigen::Vector3d::Zero();      // p, q, r (rad/s)

  static QuadrotorState from_vector(const Eigen::VectorXd& chi);
  Eigen::VectorXd to_vector() const;
};

inline constexpr double kGravity = 9.81;          // m/s^2
inline constexpr double kPitchGuard = 1e-3;       // rad inside pi/2

/// Velocity kinematics matrix mapping body velocity to inertial position
/// rates, per the ZYX Euler convention used throughout.
Eigen::Matrix3d velocity_kinematics(double phi, double theta, double psi);

/// Proper ZYX rotation taking inertial-frame vectors to the body-fixed
/// frame; used for the relative-wind vector v_r = R v_w - v_q.
Eigen::Matrix3d world_to_body(double phi, double theta, double psi);

/// Euler-rate kinematics matrix; throws PitchSingularity near |theta| = pi/2.
Eigen::Matrix3d euler_rate_matrix(double phi, double theta);

/// Relative wind velocity in the body frame at time t (steady + gust).
Eigen::Vector3d relative_wind(const Eigen::VectorXd& chi, const WindField& wind,
                              double t = 0.0, bool include_gust = false);

/// Drag regressor block Delta_a = K_Delta ||v_r|| / M * diag(v_r).
Eigen::Matrix3d drag_regressor_block(const Eigen::Vector3d& v_r, double K_delta,
                                     double mass);

/// Full 12x4 / 12x3 quadrotor model with drag regressor driven by the
/// steady wind. u = [F, tau_phi, tau_theta, tau_psi].
SystemModel quadrotor_model(double mass_kg, const Eigen::Vector3d& J_kgm2,
                            double K_delta, const WindField& wind,
                            const Eigen::Vector3d& C_d_true, const Box& theta_box,
                            const Box& input_bounds);

/// Gust disturbance d_a(t, chi) = Delta(chi; v_r*) C_d - Delta(chi; v_r) C_d
/// as a full 12-vector (nonzero only in the body-velocity rows).
Eigen::VectorXd gust_disturbance(double t, const Eigen::VectorXd& chi,
                                 const WindField& wind, double K_delta,
                                 double mass_kg, const Eigen::Vector3d& C_d_true);

}  // namespace fxt
