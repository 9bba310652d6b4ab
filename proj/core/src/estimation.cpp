#include "fxtcore/estimation.hpp"

#include <cmath>
#include <numbers>

namespace fxt {

void AdaptationGains::validate() const {
  if (gamma_diag.size() == 0 || (gamma_diag.array() <= 0.0).any())
    throw ConfigError("AdaptationGains: Gamma diagonal must be strictly positive");
  if (mu <= 2.0) throw ConfigError("AdaptationGains: mu must exceed 2");
  if (a <= 0.0 || b <= 0.0 || k_e <= 0.0)
    throw ConfigError("AdaptationGains: a, b, k_e must be positive");
  if (warmup_s < 0.0) throw ConfigError("AdaptationGains: warmup must be >= 0");
}

MeasurementPair rate_measurement(const SystemModel& model, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& xdot_measured,
                                 const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& theta_hat) {
  if (xdot_measured.size() != model.n)
    throw DimensionMismatch("rate_measurement: xdot size");
  MeasurementPair pair;
  pair.M = model.regressor(x);
  pair.v = xdot_measured - model.drift(x) - model.control_matrix(x) * u -
           pair.M * theta_hat;
  return pair;
}

EstimatorState predictor_step(const EstimatorState& st, const SystemModel& model,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& theta_hat_dot,
                              const AdaptationGains& gains, double dt) {
  if (dt <= 0.0) throw ConfigError("predictor_step: dt must be positive");
  const Eigen::MatrixXd Delta = model.regressor(x);
  const Eigen::VectorXd e = x - st.z;
  const Eigen::VectorXd zdot = model.drift(x) + model.control_matrix(x) * u +
                               Delta * st.theta_hat + gains.k_e * e +
                               st.W * theta_hat_dot;
  EstimatorState out = st;
  out.z = st.z + dt * zdot;
  out.W = st.W + dt * (-gains.k_e * st.W + Delta);
  out.e = x - out.z;
  out.clock = st.clock + dt;
  if (!out.z.allFinite() || !out.W.allFinite())
    throw NonFiniteOutput("predictor_step: non-finite predictor state");
  return out;
}

MeasurementPair predictor_measurement(const EstimatorState& st) {
  return MeasurementPair{st.W, st.e};
}

Eigen::VectorXd fxt_update(const MeasurementPair& pair, const AdaptationGains& gains) {
  gains.validate();
  if (pair.M.rows() != pair.v.size())
    throw DimensionMismatch("fxt_update: rows(M) != rows(v)");
  const double vn = pair.v.norm();
  if (vn < kVelocityGuard)
    return Eigen::VectorXd::Zero(pair.M.cols());
  const double scale = gains.a * std::pow(vn, 2.0 / gains.mu) +
                       gains.b / std::pow(vn, 2.0 / gains.mu);
  return gains.gamma_diag.asDiagonal() * (pair.M.transpose() * pair.v) * scale;
}

Eigen::VectorXd es_update(const MeasurementPair& pair,
                          const Eigen::VectorXd& gamma_diag) {
  if (pair.M.rows() != pair.v.size())
    throw DimensionMismatch("es_update: rows(M) != rows(v)");
  return gamma_diag.asDiagonal() * (pair.M.transpose() * pair.v);
}

double k_V_gain(double sigma_lb, const AdaptationGains& gains) {
  if (sigma_lb <= 0.0) throw NonPositiveSigma("k_V_gain: sigma_lb <= 0");
  return sigma_lb * std::sqrt(2.0 * gains.lambda_max());
}

double settling_time_nominal(const AdaptationGains& gains, double sigma_lb) {
  gains.validate();
  const double kV = k_V_gain(sigma_lb, gains);
  return gains.mu * std::numbers::pi / (2.0 * kV * kV * std::sqrt(gains.a * gains.b));
}

ErrorEnvelope make_error_envelope(const AdaptationGains& gains, double sigma_lb,
                                  double theta_bound, int p) {
  gains.validate();
  const double kV = k_V_gain(sigma_lb, gains);
  ErrorEnvelope env;
  env.theta_bound = theta_bound;
  env.mu = gains.mu;
  env.c1 = gains.a * std::pow(kV, 2.0 + 2.0 / gains.mu);
  env.c2 = gains.b * std::pow(kV, 2.0 - 2.0 / gains.mu);
  env.lambda_max_gamma = gains.lambda_max();
  // V0 bound from eta(0) = theta_bound * 1_p: (1/2) eta0^T Gamma^-1 eta0.
  const double V0 = 0.5 * theta_bound * theta_bound * gains.trace_gamma_inv();
  (void)p;
  env.Xi = std::atan(std::sqrt(env.c2 / env.c1) * std::pow(V0, 1.0 / gains.mu));
  return env;
}

double envelope_phase(double t, const ErrorEnvelope& env) {
  const double tau = std::max(t - env.t_offset, 0.0);
  return std::max(env.Xi - std::sqrt(env.c1 * env.c2) / env.mu * tau, 0.0);
}

namespace {

double envelope_raw(double A, const ErrorEnvelope& env) {
  if (A == 0.0) return 0.0;
  const double base = std::sqrt(env.c1 / env.c2) * std::tan(A);
  return std::sqrt(2.0 * env.lambda_max_gamma * std::pow(base, env.mu));
}

}  // namespace

double error_envelope(double t, const ErrorEnvelope& env) {
  return std::min(envelope_raw(envelope_phase(t, env), env), env.eta_cap);
}

double error_envelope_rate(double t, const ErrorEnvelope& env) {
  const double A = envelope_phase(t, env);
  if (A == 0.0) return 0.0;
  if (envelope_raw(A, env) > env.eta_cap) return 0.0;  // cap active, flat
  const double base = std::sqrt(env.c1 / env.c2) * std::tan(A);
  const double sec = 1.0 / std::cos(A);
  return -env.c1 * std::sqrt(env.lambda_max_gamma / 2.0) *
         std::pow(base, env.mu / 2.0 - 1.0) * sec * sec;
}

namespace {

// Case split of the settling-time integral bound: c3 below or above the
// discriminant threshold 2 sqrt(c1 c2).
double lemma2_case_i(double c1, double c2, double c3, double mu) {
  const double disc = 4.0 * c1 * c2 - c3 * c3;
  const double k1 = std::sqrt(disc / (4.0 * c1 * c1));
  const double k2 = (2.0 * c1 - c3) / std::sqrt(disc);
  return mu / (c1 * k1) * (std::numbers::pi / 2.0 - std::atan(k2));
}

}  // namespace

double lemma2_bound(double c1, double c2, double c3, double mu, double k,
                    double V0) {
  if (c1 <= 0.0 || c2 <= 0.0) throw ConfigError("lemma2_bound: c1, c2 > 0 required");
  if (k <= 0.0 || k >= 1.0) throw InvalidK("lemma2_bound: k must lie in (0,1)");
  const double threshold = 2.0 * std::sqrt(c1 * c2);
  if (c3 < threshold) return lemma2_case_i(c1, c2, c3, mu);
  const double root = (c3 - std::sqrt(c3 * c3 - 4.0 * c1 * c2)) / (2.0 * c1);
  if (std::pow(V0, 1.0 / mu) > k * root)
    throw PreconditionViolated("lemma2_bound: V0 outside case (ii) region");
  return mu * k / ((1.0 - k) * std::sqrt(c1 * c2));
}

RobustBounds robust_bounds(const AdaptationGains& gains, double sigma_lb,
                           double upsilon, double k) {
  gains.validate();
  if (upsilon < 0.0) throw ConfigError("robust_bounds: Upsilon must be >= 0");
  if (k <= 0.0 || k >= 1.0) throw InvalidK("robust_bounds: k must lie in (0,1)");
  const double kV = k_V_gain(sigma_lb, gains);
  const double mu = gains.mu;
  const double two_p = std::pow(2.0, 2.0 / mu);
  const double two_m = std::pow(2.0, -2.0 / mu);

  RobustBounds out;
  out.alpha1 = two_m * gains.a * std::pow(kV, 2.0 + 2.0 / mu);
  out.alpha2 = two_p * gains.b * std::pow(kV, 2.0 - 2.0 / mu);
  out.alpha3 = gains.a * upsilon * std::pow(kV, 1.0 + 2.0 / mu) +
               two_p * gains.b * upsilon * std::pow(kV, 1.0 - 2.0 / mu);
  out.Y = 2.0 * kV * kV * std::sqrt(gains.a * gains.b) /
          (gains.a * std::pow(kV, 1.0 + 2.0 / mu) +
           two_p * gains.b * std::pow(kV, 1.0 - 2.0 / mu));

  if (upsilon < out.Y) {
    out.regime = RobustBounds::Regime::small_disturbance;
    out.T = lemma2_case_i(out.alpha1, out.alpha2, out.alpha3, mu);
  } else {
    out.regime = RobustBounds::Regime::large_disturbance;
    const double root =
        (out.alpha3 - std::sqrt(out.alpha3 * out.alpha3 - 4.0 * out.alpha1 * out.alpha2)) /
        (2.0 * out.alpha1);
    out.D0_level = std::pow(k * root, mu);
    out.T = mu * k / ((1.0 - k) * std::sqrt(out.alpha1 * out.alpha2));
  }
  return out;
}

bool robust_gain_check(const Eigen::VectorXd& gamma_diag, double upsilon,
                       double sigma_lb) {
  if (sigma_lb <= 0.0) throw NonPositiveSigma("robust_gain_check: sigma_lb <= 0");
  const double ratio = upsilon / sigma_lb;
  return gamma_diag.minCoeff() >= 2.0 * ratio * ratio;
}

LemmaPBound lemma_P_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          double a, double b, double m, double B_y) {
  if (m <= 2.0 || a <= 0.0 || b <= 0.0)
    throw ConfigError("lemma_P_bound: need a, b > 0 and m > 2");
  const double xn = x.norm();
  const double yn = y.norm();
  if (yn > B_y + 1e-12)
    throw PreconditionViolated("lemma_P_bound: ||y|| exceeds B_y");
  if (xn <= 2.0 * B_y)
    throw PreconditionViolated("lemma_P_bound: ||x|| must exceed 2 B_y");
  const double sn = (x + y).norm();
  LemmaPBound out;
  out.P = x.dot(y) * (a * std::pow(sn, 2.0 / m) + b / std::pow(sn, 2.0 / m));
  out.bound = -B_y * (a * std::pow(xn, 1.0 + 2.0 / m) +
                      std::pow(2.0, 2.0 / m) * b * std::pow(xn, 1.0 - 2.0 / m));
  return out;
}

AdmissibleSet admissible_set(const Eigen::VectorXd& theta_hat, double eta,
                             const Box& theta_box, const Eigen::MatrixXd& Delta,
                             RankTolerance tol) {
  if (eta < 0.0) throw ConfigError("admissible_set: eta must be >= 0");
  AdmissibleSet out;
  out.theta_hat = theta_hat;
  out.eta = eta;
  out.theta_box = theta_box;
  out.free_directions = nullspace_basis(Delta, tol);
  out.singleton = (eta == 0.0 && out.free_directions.cols() == 0);
  return out;
}

}  // namespace fxt
