#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

namespace fxt {

enum class ScenarioKind { gap, quadrotor };
enum class EstimatorScheme { rate, predictor, none };
enum class WindKind { none, constant_wind, gusty_wind };

/// Full declarative description of one closed-loop run. Key names in the
/// serialized form carry units (dt_s, mass_kg, ...).
struct ScenarioConfig {
  std::string name;
  ScenarioKind kind = ScenarioKind::gap;

  // time grid
  double dt_s = 5e-3;
  double horizon_s = 8.0;
  int log_every = 1;
  int substeps = 1;  // plant/estimator RK4 substeps per control period

  // estimator
  EstimatorScheme scheme = EstimatorScheme::rate;
  Eigen::VectorXd gamma_diag;
  double gain_a = 1.0;
  double gain_b = 1.0;
  double gain_mu = 5.0;
  double gain_ke = 10.0;
  double warmup_s = 0.0;
  double sigma_lb_config = 1.0;  // a priori lower bound for rate scheme
  bool exact_rate = true;        // exact xdot vs finite differencing
  double robust_k = 0.9;

  // parameters
  Eigen::VectorXd theta_true;
  Eigen::VectorXd theta_lo;
  Eigen::VectorXd theta_hi;
  Eigen::VectorXd theta_hat0;

  // gap scenario
  bool full_rank = true;
  double K_delta = 1.0;
  double f1_hz = 0.05;
  double f2_hz = 0.05;
  double rd_a = 0.5;
  Eigen::Vector2d start = Eigen::Vector2d(-6.0, 0.0);
  double u_bar = 10.0;
  double clf_KV = 1.0;
  double clf_c1 = 1.0;
  double clf_c2 = 1.0;
  double clf_mu = 5.0;
  double gap_q0 = 10.0;
  double gap_pi = 10.0;
  double gap_delta_lb = 1.0;
  Eigen::Vector2d ellipse1_center = Eigen::Vector2d(-2.5, 1.0);
  Eigen::Vector2d ellipse2_center = Eigen::Vector2d(-2.5, -1.0);
  Eigen::Vector2d ellipse_axes = Eigen::Vector2d(1.0, 0.8);
  double goal_tol_m = 0.1;

  // quadrotor scenario
  double mass_kg = 1.0;
  Eigen::Vector3d J_kgm2 = Eigen::Vector3d(0.25e-2, 0.25e-2, 0.5e-2);
  WindKind wind = WindKind::none;
  Eigen::Vector3d wind_mps = Eigen::Vector3d::Zero();
  double gust_tau_s = 1.0;
  double gust_sigma_mps = 0.0;
  std::uint64_t seed = 0;
  double cz_m = 2.5;
  double pz_m = 2.5;
  int nz = 2;
  double alpha_max_rad = 1.5707963267948966;
  double track_p1 = 100.0;
  double track_p2 = 100.0;
  double track_delta_lb = 1e-3;
  double lemniscate_amp_m = 2.0;
  double lemniscate_period_s = 12.0;
  double lemniscate_alt_m = 2.5;
  Eigen::Vector4d u_max = Eigen::Vector4d(40.0, 2.0, 2.0, 2.0);

  double conv_tol = 1e-3;

  void validate() const;
};

std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const std::string& text);
void save_config(const ScenarioConfig& cfg, const std::string& path);
ScenarioConfig load_config(const std::string& path);

}  // namespace fxt
