#include "fxtcore/systems.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace fxt {

Eigen::VectorXd eval_dynamics(const SystemModel& model, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u, const Eigen::VectorXd& theta,
                              const DisturbanceSignal* d, double t) {
  if (x.size() != model.n || u.size() != model.m || theta.size() != model.p)
    throw DimensionMismatch("eval_dynamics: argument dimensions do not match model");
  Eigen::VectorXd xdot = model.drift(x) + model.control_matrix(x) * u +
                         model.regressor(x) * theta;
  if (d && d->eval) xdot += d->eval(t, x);
  if (!xdot.allFinite()) throw NonFiniteOutput("eval_dynamics: non-finite derivative");
  return xdot;
}

SystemModel single_integrator_model(IntegratorVariant variant, double K_delta,
                                    double f1_hz, double f2_hz, double a,
                                    const Eigen::Vector2d& theta_true,
                                    const Box& theta_box, double u_bar) {
  if (variant == IntegratorVariant::full_rank && K_delta <= 0.0)
    throw BadVariantParams("single_integrator_model: full_rank needs K_delta > 0");
  if (variant == IntegratorVariant::rank_deficient && a == 0.0)
    throw BadVariantParams("single_integrator_model: rank_deficient needs a != 0");
  if (theta_box.dim() != 2)
    throw DimensionMismatch("single_integrator_model: theta_box must be 2-D");

  SystemModel model;
  model.n = model.m = model.p = 2;
  model.drift = [](const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Zero(x.size()).eval();
  };
  model.control_matrix = [](const Eigen::VectorXd&) {
    return Eigen::MatrixXd::Identity(2, 2).eval();
  };
  if (variant == IntegratorVariant::full_rank) {
    const double w1 = 2.0 * std::numbers::pi * f1_hz;
    const double w2 = 2.0 * std::numbers::pi * f2_hz;
    model.regressor = [K_delta, w1, w2](const Eigen::VectorXd& z) {
      const double s = std::sin(w1 * z(0));
      const double c = std::cos(w2 * z(1));
      Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
      D(0, 0) = K_delta * (1.0 + s * s);
      D(1, 1) = K_delta * (1.0 + c * c);
      return D;
    };
  } else {
    model.regressor = [a](const Eigen::VectorXd& z) {
      Eigen::MatrixXd D(2, 2);
      D << -a * z(0), -2.0 * a * z(0), -0.5 * a * z(0), -a * z(0);
      return D;
    };
  }
  model.input_bounds = Box::centered(2, u_bar);
  model.param_box = theta_box;
  model.true_params = theta_true;
  return model;
}

// ---------------------------------------------------------------------------
// Gust process
// ---------------------------------------------------------------------------

namespace {

struct GustRng {
  std::mt19937_64 engine;
  std::normal_distribution<double> normal{0.0, 1.0};
};

}  // namespace

GustProcess::GustProcess(double tau_s, double sigma_mps, std::uint64_t seed,
                         double grid_dt_s)
    : tau_(tau_s), sigma_(sigma_mps), grid_dt_(grid_dt_s) {
  if (tau_ <= 0.0 || grid_dt_ <= 0.0)
    throw ConfigError("GustProcess: tau and grid_dt must be positive");
  auto rng = std::make_shared<GustRng>();
  rng->engine.seed(seed);
  rng_ = rng;
  samples_.push_back(Eigen::Vector3d::Zero());
}

void GustProcess::extend(std::size_t idx) const {
  auto& rng = *static_cast<GustRng*>(rng_.get());
  // Exact discretization of du = -u/tau dt + sigma sqrt(2/tau) dB.
  const double decay = std::exp(-grid_dt_ / tau_);
  const double noise = sigma_ * std::sqrt(1.0 - decay * decay);
  while (samples_.size() <= idx) {
    Eigen::Vector3d next;
    for (int k = 0; k < 3; ++k)
      next(k) = decay * samples_.back()(k) + noise * rng.normal(rng.engine);
    samples_.push_back(next);
  }
}

Eigen::Vector3d GustProcess::at(double t) const {
  if (t < 0.0) t = 0.0;
  const auto idx = static_cast<std::size_t>(t / grid_dt_);
  if (idx >= samples_.size()) extend(idx);
  return samples_[idx];
}

std::shared_ptr<GustProcess> WindField::gust_process() const {
  if (!gust_enabled) return nullptr;
  if (!process_)
    process_ = std::make_shared<GustProcess>(gust_tau_s, gust_sigma_mps, seed);
  return process_;
}

Eigen::Vector3d wind_gust(double t, const WindField& field) {
  auto process = field.gust_process();
  if (!process) return Eigen::Vector3d::Zero();
  return process->at(t);
}

}  // namespace fxt
