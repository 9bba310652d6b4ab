#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fxtcore/box.hpp"
#include "fxtcore/errors.hpp"

namespace fxt {

/// Control- and parameter-affine system
///   xdot = f(x) + g(x) u + Delta(x) theta.
/// true_params is simulation-only ground truth; controllers and estimators
/// never read it.
struct SystemModel {
  int n = 0;  // state dimension
  int m = 0;  // input dimension
  int p = 0;  // parameter dimension
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> drift;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> control_matrix;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> regressor;
  Box input_bounds;
  Box param_box;
  Eigen::VectorXd true_params;
};

/// Additive bounded disturbance d(x, t) with known sup-norm bound.
struct DisturbanceSignal {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> eval;
  double sup_bound = 0.0;  // Upsilon
};

/// xdot = f + g u + Delta theta (+ d). Throws NonFiniteOutput on NaN/Inf.
Eigen::VectorXd eval_dynamics(const SystemModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u, const Eigen::VectorXd& theta,
                              const DisturbanceSignal* d = nullptr, double t = 0.0);

enum class IntegratorVariant { full_rank, rank_deficient };

/// 2-D single integrator with either the full-rank sinusoidal regressor or
/// the rank-deficient one (both rows proportional to the x coordinate).
SystemModel single_integrator_model(IntegratorVariant variant, double K_delta,
                                    double f1_hz, double f2_hz, double a,
                                    const Eigen::Vector2d& theta_true,
                                    const Box& theta_box,
                                    double u_bar = 10.0);

// ---------------------------------------------------------------------------
// Wind field with optional seeded gust process
// ---------------------------------------------------------------------------

/// Seeded per-axis colored-noise (OU) gust, sampled on a fixed grid so that
/// lookups are deterministic and independent of query order.
class GustProcess {
 public:
  GustProcess(double tau_s, double sigma_mps, std::uint64_t seed,
              double grid_dt_s = 1e-3);

  /// Gust velocity at time t (zero-order hold on the sample grid).
  Eigen::Vector3d at(double t) const;

 private:
  void extend(std::size_t idx) const;

  double tau_;
  double sigma_;
  double grid_dt_;
  mutable std::vector<Eigen::Vector3d> samples_;
  mutable std::shared_ptr<void> rng_;  // concrete type lives in the .cpp
};

struct WindField {
  Eigen::Vector3d steady = Eigen::Vector3d::Zero();  // inertial frame, m/s
  bool gust_enabled = false;
  double gust_tau_s = 1.0;
  double gust_sigma_mps = 0.0;
  std::uint64_t seed = 0;

  std::shared_ptr<GustProcess> gust_process() const;

 private:
  mutable std::shared_ptr<GustProcess> process_;
};

/// Gust velocity v_G(t); zero when the gust is disabled.
Eigen::Vector3d wind_gust(double t, const WindField& field);

}  // namespace fxt
