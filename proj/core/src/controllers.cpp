#include "fxtcore/controllers.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace fxt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_angle(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a < -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

QuadraticProgram build_gap_qp(const SystemModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& theta_hat, double t,
                              const std::vector<ShrunkenBarrier>& cbfs,
                              const ClfSpec& clf, const GapQpWeights& weights) {
  if (cbfs.empty()) throw ConfigError("build_gap_qp: at least one CBF required");
  const int m = model.m;
  const int q = static_cast<int>(cbfs.size());
  const int nv = m + 1 + q;  // u, delta0, delta1..q

  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Zero(nv, nv);
  qp.H.topLeftCorner(m, m) = weights.Q;
  qp.H(m, m) = 2.0 * weights.q0;
  for (int i = 0; i < q; ++i) qp.H(m + 1 + i, m + 1 + i) = 2.0 * weights.p_i;
  qp.c = Eigen::VectorXd::Zero(nv);

  qp.lb = Eigen::VectorXd::Constant(nv, -kInf);
  qp.ub = Eigen::VectorXd::Constant(nv, kInf);
  qp.lb.head(m) = model.input_bounds.lo;
  qp.ub.head(m) = model.input_bounds.hi;
  for (int i = 0; i < q; ++i) qp.lb(m + 1 + i) = weights.delta_lb;

  qp.A_ineq = Eigen::MatrixXd::Zero(1 + q, nv);
  qp.b_ineq = Eigen::VectorXd::Zero(1 + q);

  const Eigen::VectorXd f = model.drift(x);
  const Eigen::MatrixXd g = model.control_matrix(x);
  const Eigen::MatrixXd Delta = model.regressor(x);
  const double eta = error_envelope(t, cbfs.front().envelope);

  // CLF row: L_fV + L_gV u + phi_V <= delta0 - c1 V^g1 - c2 V^g2, with
  // phi_V the worst case of L_DeltaV theta over the admissible box.
  const double V = clf.value(x);
  const Eigen::RowVectorXd gradV = clf.gradient(x);
  const double phi_V =
      nu_projection_max(gradV * Delta, theta_hat, eta, model.param_box);
  qp.A_ineq.block(0, 0, 1, m) = gradV * g;
  qp.A_ineq(0, m) = -1.0;
  qp.b_ineq(0) = -gradV.dot(f) - phi_V - clf.c1 * std::pow(V, clf.gamma1) -
                 clf.c2 * std::pow(V, clf.gamma2);

  // Barrier rows: L_f h_r + L_g h_r u + r + delta_i h_r >= 0.
  for (int i = 0; i < q; ++i) {
    const auto& sb = cbfs[i];
    const double hr = shrunken_value(sb, x, t);
    const Eigen::RowVectorXd grad = sb.base.gradient(x);
    const double r = racbf_margin(sb, model, x, t, theta_hat);
    qp.A_ineq.block(1 + i, 0, 1, m) = -(grad * g);
    qp.A_ineq(1 + i, m + 1 + i) = -hr;
    qp.b_ineq(1 + i) = grad.dot(f) + r;
  }
  return qp;
}

QuadraticProgram build_tracking_qp(const SystemModel& model, const Eigen::VectorXd& chi,
                                   const Eigen::VectorXd& u_nom,
                                   const std::vector<ShrunkenBarrier>& cbfs, double t,
                                   const Eigen::VectorXd& theta_hat,
                                   const TrackingQpWeights& weights) {
  if (cbfs.size() != 2)
    throw ConfigError("build_tracking_qp: expects altitude and attitude CBFs");
  const int m = model.m;
  const int nv = m + 2;

  QuadraticProgram qp;
  qp.H = Eigen::MatrixXd::Identity(nv, nv);
  qp.H(m, m) = 2.0 * weights.p1;
  qp.H(m + 1, m + 1) = 2.0 * weights.p2;
  qp.c = Eigen::VectorXd::Zero(nv);
  qp.c.head(m) = -u_nom;

  qp.lb = Eigen::VectorXd::Constant(nv, -kInf);
  qp.ub = Eigen::VectorXd::Constant(nv, kInf);
  qp.lb.head(m) = model.input_bounds.lo;
  qp.ub.head(m) = model.input_bounds.hi;
  qp.lb(m) = weights.delta_lb;
  qp.lb(m + 1) = weights.delta_lb;

  qp.A_ineq = Eigen::MatrixXd::Zero(2, nv);
  qp.b_ineq = Eigen::VectorXd::Zero(2);

  const Eigen::VectorXd f = model.drift(chi);
  const Eigen::MatrixXd g = model.control_matrix(chi);

  // Rows: L_f h_i + L_g h_i u >= -delta_i h_i - r(t, theta_hat).
  for (int i = 0; i < 2; ++i) {
    const auto& sb = cbfs[i];
    const double hr = shrunken_value(sb, chi, t);
    const Eigen::RowVectorXd grad = sb.base.gradient(chi);
    const double r = racbf_margin(sb, model, chi, t, theta_hat);
    qp.A_ineq.block(i, 0, 1, m) = -(grad * g);
    qp.A_ineq(i, m + i) = -hr;
    qp.b_ineq(i) = grad.dot(f) + r;
  }
  return qp;
}

Eigen::Vector4d nominal_tracking_control(const Eigen::VectorXd& chi,
                                         const ReferencePoint& ref, double mass_kg,
                                         const Eigen::Vector3d& J_kgm2,
                                         const TrackingGains& gains,
                                         const Eigen::Vector3d& drag_accel_body,
                                         const Box& input_bounds) {
  const double phi = chi(6), theta = chi(7), psi = chi(8);
  if (std::abs(theta) >= std::numbers::pi / 2.0 - kPitchGuard)
    throw PitchSingularity("nominal_tracking_control: pitch near +/- pi/2");

  const Eigen::Matrix3d C = velocity_kinematics(phi, theta, psi);
  const Eigen::Vector3d v_inertial = C * chi.segment<3>(3);
  const Eigen::Vector3d e_p = ref.position - chi.segment<3>(0);
  const Eigen::Vector3d e_v = ref.velocity - v_inertial;

  // Desired specific force in the inertial frame: PD acceleration plus
  // gravity cancellation minus the estimated drag acceleration.
  Eigen::Vector3d f_des = gains.kp_pos * e_p + gains.kd_pos * e_v;
  f_des(2) += kGravity;
  f_des -= C * drag_accel_body;
  if (f_des(2) < 0.1 * kGravity) f_des(2) = 0.1 * kGravity;

  const double F = mass_kg * f_des.norm();

  // Attitude setpoints from the thrust direction at the reference yaw.
  // With this kinematics convention the inertial thrust direction is
  // approximately (-theta cpsi - phi spsi, -theta spsi + phi cpsi, 1).
  const double cpsi = std::cos(psi), spsi = std::sin(psi);
  const double fx = f_des(0) / f_des(2);
  const double fy = f_des(1) / f_des(2);
  double theta_d = -(cpsi * fx + spsi * fy);
  double phi_d = -spsi * fx + cpsi * fy;
  theta_d = std::clamp(theta_d, -gains.tilt_max, gains.tilt_max);
  phi_d = std::clamp(phi_d, -gains.tilt_max, gains.tilt_max);

  const double p = chi(9), q = chi(10), r = chi(11);
  const double tau_phi = J_kgm2(0) * (gains.kp_att * (phi_d - phi) - gains.kd_att * p);
  const double tau_theta =
      J_kgm2(1) * (gains.kp_att * (theta_d - theta) - gains.kd_att * q);
  const double tau_psi =
      J_kgm2(2) * (gains.kp_yaw * wrap_angle(ref.yaw - psi) - gains.kd_yaw * r);

  Eigen::Vector4d u(F, tau_phi, tau_theta, tau_psi);
  for (int i = 0; i < 4; ++i) u(i) = input_bounds.clamp(i, u(i));
  return u;
}

}  // namespace fxt
