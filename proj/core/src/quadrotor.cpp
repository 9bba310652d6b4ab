#include "fxtcore/quadrotor.hpp"

#include <cmath>
#include <numbers>

namespace fxt {

QuadrotorState QuadrotorState::from_vector(const Eigen::VectorXd& chi) {
  if (chi.size() != 12)
    throw DimensionMismatch("QuadrotorState: expected 12 components");
  QuadrotorState st;
  st.position = chi.segment<3>(0);
  st.velocity = chi.segment<3>(3);
  st.angles = chi.segment<3>(6);
  st.rates = chi.segment<3>(9);
  return st;
}

Eigen::VectorXd QuadrotorState::to_vector() const {
  Eigen::VectorXd chi(12);
  chi << position, velocity, angles, rates;
  return chi;
}

Eigen::Matrix3d velocity_kinematics(double phi, double theta, double psi) {
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double cth = std::cos(theta), sth = std::sin(theta);
  const double cpsi = std::cos(psi), spsi = std::sin(psi);
  Eigen::Matrix3d C;
  C << cth * cpsi, sphi * sth * cpsi - cphi * spsi, cphi * sth * cpsi + sphi * spsi,
       cth * spsi, sphi * sth * spsi + cphi * cpsi, cphi * sth * spsi - sphi * cpsi,
       sth,        -sphi * cth,                     -cphi * cth;
  return C;
}

Eigen::Matrix3d world_to_body(double phi, double theta, double psi) {
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double cth = std::cos(theta), sth = std::sin(theta);
  const double cpsi = std::cos(psi), spsi = std::sin(psi);
  Eigen::Matrix3d R;
  R << cth * cpsi,                       cth * spsi,                       -sth,
       sphi * sth * cpsi - cphi * spsi,  sphi * sth * spsi + cphi * cpsi,  sphi * cth,
       cphi * sth * cpsi + sphi * spsi,  cphi * sth * spsi - sphi * cpsi,  cphi * cth;
  return R;
}

Eigen::Matrix3d euler_rate_matrix(double phi, double theta) {
  if (std::abs(theta) >= std::numbers::pi / 2.0 - kPitchGuard)
    throw PitchSingularity("euler_rate_matrix: pitch near +/- pi/2");
  const double cphi = std::cos(phi), sphi = std::sin(phi);
  const double cth = std::cos(theta), tth = std::tan(theta);
  Eigen::Matrix3d E;
  E << 1.0, sphi * tth,  cphi * tth,
       0.0, cphi,        -sphi,
       0.0, sphi / cth,  cphi / cth;
  return E;
}

Eigen::Vector3d relative_wind(const Eigen::VectorXd& chi, const WindField& wind,
                              double t, bool include_gust) {
  const Eigen::Vector3d v_q = chi.segment<3>(3);
  Eigen::Vector3d v_w = wind.steady;
  if (include_gust) v_w += wind_gust(t, wind);
  const Eigen::Matrix3d R = world_to_body(chi(6), chi(7), chi(8));
  return R * v_w - v_q;
}

Eigen::Matrix3d drag_regressor_block(const Eigen::Vector3d& v_r, double K_delta,
                                     double mass) {
  return (K_delta * v_r.norm() / mass) * v_r.asDiagonal();
}

SystemModel quadrotor_model(double mass_kg, const Eigen::Vector3d& J_kgm2,
                            double K_delta, const WindField& wind,
                            const Eigen::Vector3d& C_d_true, const Box& theta_box,
                            const Box& input_bounds) {
  if (mass_kg <= 0.0 || (J_kgm2.array() <= 0.0).any())
    throw ConfigError("quadrotor_model: mass and inertia must be positive");
  if (theta_box.dim() != 3 || input_bounds.dim() != 4)
    throw DimensionMismatch("quadrotor_model: theta_box 3-D, input_bounds 4-D");

  SystemModel model;
  model.n = 12;
  model.m = 4;
  model.p = 3;

  model.drift = [J_kgm2](const Eigen::VectorXd& chi) {
    const Eigen::Vector3d v = chi.segment<3>(3);
    const double phi = chi(6), theta = chi(7), psi = chi(8);
    const double p = chi(9), q = chi(10), r = chi(11);
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    const double cth = std::cos(theta), sth = std::sin(theta);

    Eigen::VectorXd xdot(12);
    xdot.segment<3>(0) = velocity_kinematics(phi, theta, psi) * v;
    xdot(3) = r * v(1) - q * v(2) - kGravity * sth;
    xdot(4) = p * v(2) - r * v(0) + kGravity * cth * sphi;
    xdot(5) = q * v(0) - p * v(1) + kGravity * cth * cphi;
    xdot.segment<3>(6) = euler_rate_matrix(phi, theta) * chi.segment<3>(9);
    xdot(9) = (J_kgm2(1) - J_kgm2(2)) / J_kgm2(0) * q * r;
    xdot(10) = (J_kgm2(2) - J_kgm2(0)) / J_kgm2(1) * p * r;
    xdot(11) = (J_kgm2(0) - J_kgm2(1)) / J_kgm2(2) * p * q;
    return xdot;
  };

  model.control_matrix = [mass_kg, J_kgm2](const Eigen::VectorXd&) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(12, 4);
    g(5, 0) = -1.0 / mass_kg;
    g(9, 1) = 1.0 / J_kgm2(0);
    g(10, 2) = 1.0 / J_kgm2(1);
    g(11, 3) = 1.0 / J_kgm2(2);
    return g;
  };

  model.regressor = [K_delta, mass_kg, wind](const Eigen::VectorXd& chi) {
    const Eigen::Vector3d v_r = relative_wind(chi, wind);
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(12, 3);
    D.block<3, 3>(3, 0) = drag_regressor_block(v_r, K_delta, mass_kg);
    return D;
  };

  model.input_bounds = input_bounds;
  model.param_box = theta_box;
  model.true_params = C_d_true;
  return model;
}

Eigen::VectorXd gust_disturbance(double t, const Eigen::VectorXd& chi,
                                 const WindField& wind, double K_delta,
                                 double mass_kg, const Eigen::Vector3d& C_d_true) {
  const Eigen::Vector3d v_r = relative_wind(chi, wind, t, false);
  const Eigen::Vector3d v_r_star = relative_wind(chi, wind, t, true);
  const Eigen::Vector3d d_a =
      (drag_regressor_block(v_r_star, K_delta, mass_kg) -
       drag_regressor_block(v_r, K_delta, mass_kg)) *
      C_d_true;
  Eigen::VectorXd d = Eigen::VectorXd::Zero(12);
  d.segment<3>(3) = d_a;
  return d;
}

}  // namespace fxt
