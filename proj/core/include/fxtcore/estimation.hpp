#pragma once

#include <Eigen/Core>
#include <limits>
#include <optional>

#include "fxtcore/box.hpp"
#include "fxtcore/matrix_analysis.hpp"
#include "fxtcore/systems.hpp"

namespace fxt {

/// Measurement pair (M, v) feeding the adaptation laws; ideally v = M theta~.
struct MeasurementPair {
  Eigen::MatrixXd M;
  Eigen::VectorXd v;
};

struct AdaptationGains {
  Eigen::VectorXd gamma_diag;  // diagonal of Gamma, strictly positive
  double a = 1.0;
  double b = 1.0;
  double mu = 5.0;   // must be > 2
  double k_e = 10.0;
  double warmup_s = 0.0;

  Eigen::MatrixXd Gamma() const {
    return Eigen::MatrixXd(gamma_diag.asDiagonal());
  }
  double lambda_max() const { return gamma_diag.maxCoeff(); }
  double lambda_min() const { return gamma_diag.minCoeff(); }
  double trace_gamma_inv() const { return gamma_diag.cwiseInverse().sum(); }
  void validate() const;
};

/// State-predictor internals plus bookkeeping shared by both schemes.
struct EstimatorState {
  Eigen::VectorXd theta_hat;
  Eigen::VectorXd z;   // predicted state
  Eigen::MatrixXd W;
  Eigen::VectorXd e;   // x - z at the last update
  double clock = 0.0;
  double eta = 0.0;
  double sigma_lb = 0.0;  // running min of sigma_min_nonzero(M) after warmup
  bool sigma_seen = false;
};

/// Closed-form error envelope eta(t) with its phase constant. t_offset
/// freezes the phase clock until the predictor warmup ends; eta_cap keeps
/// the reported bound monotone across warmup and sigma re-estimates (the
/// rate is zero wherever the cap is active).
struct ErrorEnvelope {
  double theta_bound = 0.0;  // a priori sup-norm error bound (box diameter)
  double c1 = 0.0;
  double c2 = 0.0;
  double mu = 0.0;
  double Xi = 0.0;
  double lambda_max_gamma = 0.0;
  double t_offset = 0.0;
  double eta_cap = std::numeric_limits<double>::infinity();
};

struct RobustBounds {
  enum class Regime { small_disturbance, large_disturbance };
  Regime regime = Regime::small_disturbance;
  double Y = 0.0;
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  std::optional<double> D0_level;  // absent in the small regime (all of R^p)
  double T = 0.0;
};

// -- measurement schemes ----------------------------------------------------

MeasurementPair rate_measurement(const SystemModel& model, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& xdot_measured,
                                 const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& theta_hat);

/// One explicit Euler step of the predictor dynamics
///   zdot = f + g u + Delta theta_hat + k_e (x - z) + W theta_hat_dot
///   Wdot = -k_e W + Delta(x).
EstimatorState predictor_step(const EstimatorState& st, const SystemModel& model,
                              const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                              const Eigen::VectorXd& theta_hat_dot,
                              const AdaptationGains& gains, double dt);

MeasurementPair predictor_measurement(const EstimatorState& st);

// -- adaptation laws --------------------------------------------------------

inline constexpr double kVelocityGuard = 1e-12;

/// Fixed-time law: Gamma M^T v (a ||v||^{2/mu} + b ||v||^{-2/mu}); exact
/// zero below the ||v|| guard.
Eigen::VectorXd fxt_update(const MeasurementPair& pair, const AdaptationGains& gains);

/// Exponential law in gradient form, Gamma M^T v.
Eigen::VectorXd es_update(const MeasurementPair& pair, const Eigen::VectorXd& gamma_diag);

// -- settling time and envelope ---------------------------------------------

double k_V_gain(double sigma_lb, const AdaptationGains& gains);

/// T = mu pi / (2 k_V^2 sqrt(a b)); warmup is added by callers.
double settling_time_nominal(const AdaptationGains& gains, double sigma_lb);

/// Envelope constructed from gains and the sigma lower bound; theta_bound
/// is the a priori sup-norm error bound (sup-norm diameter of Theta).
ErrorEnvelope make_error_envelope(const AdaptationGains& gains, double sigma_lb,
                                  double theta_bound, int p);

double envelope_phase(double t, const ErrorEnvelope& env);  // A(t)
double error_envelope(double t, const ErrorEnvelope& env);
double error_envelope_rate(double t, const ErrorEnvelope& env);

// -- robustness --------------------------------------------------------------

RobustBounds robust_bounds(const AdaptationGains& gains, double sigma_lb,
                           double upsilon, double k);

bool robust_gain_check(const Eigen::VectorXd& gamma_diag, double upsilon,
                       double sigma_lb);

struct LemmaPBound {
  double P = 0.0;
  double bound = 0.0;
};

/// Lemma bounding P = x^T y (a||x+y||^{2/m} + b||x+y||^{-2/m}) from below
/// when ||y|| <= B_y and ||x|| > 2 B_y.
LemmaPBound lemma_P_bound(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                          double a, double b, double m, double B_y);

/// Closed-form upper bound on I = int_{V0}^{1} dV / (-c1 V^{1+1/mu}
/// - c2 V^{1-1/mu} + c3 V), per the two-regime lemma.
double lemma2_bound(double c1, double c2, double c3, double mu, double k,
                    double V0);

// -- admissible set ----------------------------------------------------------

struct AdmissibleSet {
  Eigen::VectorXd theta_hat;
  double eta = 0.0;
  Box theta_box;
  Eigen::MatrixXd free_directions;  // nullspace basis of the regressor
  bool singleton = false;
};

AdmissibleSet admissible_set(const Eigen::VectorXd& theta_hat, double eta,
                             const Box& theta_box, const Eigen::MatrixXd& Delta,
                             RankTolerance tol = {});

}  // namespace fxt
