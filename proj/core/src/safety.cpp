#include "fxtcore/safety.hpp"

#include <cmath>

namespace fxt {

BarrierFunction ellipse_cbf(const Eigen::Vector2d& center,
                            const Eigen::Vector2d& semi_axes) {
  if ((semi_axes.array() <= 0.0).any())
    throw ConfigError("ellipse_cbf: semi-axes must be positive");
  BarrierFunction h;
  h.value = [center, semi_axes](const Eigen::VectorXd& z) {
    const double dx = (z(0) - center(0)) / semi_axes(0);
    const double dy = (z(1) - center(1)) / semi_axes(1);
    return dx * dx + dy * dy - 1.0;
  };
  h.gradient = [center, semi_axes](const Eigen::VectorXd& z) {
    Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(z.size());
    g(0) = 2.0 * (z(0) - center(0)) / (semi_axes(0) * semi_axes(0));
    g(1) = 2.0 * (z(1) - center(1)) / (semi_axes(1) * semi_axes(1));
    return g;
  };
  return h;
}

BarrierFunction altitude_cbf(double c_z, double p_z, int n_z) {
  if (p_z <= 0.0 || n_z < 2 || n_z % 2 != 0)
    throw ConfigError("altitude_cbf: need p_z > 0 and even n_z >= 2");
  BarrierFunction h;
  h.value = [c_z, p_z, n_z](const Eigen::VectorXd& chi) {
    return 1.0 - std::pow((chi(2) - c_z) / p_z, n_z);
  };
  h.gradient = [c_z, p_z, n_z](const Eigen::VectorXd& chi) {
    Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(chi.size());
    g(2) = -n_z / p_z * std::pow((chi(2) - c_z) / p_z, n_z - 1);
    return g;
  };
  return h;
}

BarrierFunction attitude_cbf(double alpha_max) {
  if (alpha_max <= 0.0 || alpha_max > std::acos(-1.0) / 2.0)
    throw ConfigError("attitude_cbf: alpha_max must lie in (0, pi/2]");
  const double cos_alpha = std::cos(alpha_max);
  BarrierFunction h;
  h.value = [cos_alpha](const Eigen::VectorXd& chi) {
    return std::cos(chi(6)) * std::cos(chi(7)) - cos_alpha;
  };
  h.gradient = [](const Eigen::VectorXd& chi) {
    Eigen::RowVectorXd g = Eigen::RowVectorXd::Zero(chi.size());
    g(6) = -std::sin(chi(6)) * std::cos(chi(7));
    g(7) = -std::cos(chi(6)) * std::sin(chi(7));
    return g;
  };
  return h;
}

double shrunken_value(const ShrunkenBarrier& sb, const Eigen::VectorXd& x, double t) {
  const double eta = error_envelope(t, sb.envelope);
  const double tr = sb.gamma_diag.cwiseInverse().sum();
  return sb.base.value(x) - 0.5 * eta * eta * tr;
}

namespace {

double box_extreme(const Eigen::RowVectorXd& C, const Eigen::VectorXd& theta_hat,
                   double eta, const Box& theta_box, bool maximize) {
  if (C.size() != theta_hat.size() || theta_box.dim() != theta_hat.size())
    throw DimensionMismatch("nu_projection: dimension mismatch");
  double total = 0.0;
  for (int i = 0; i < theta_hat.size(); ++i) {
    const double lo = C(i) * theta_box.clamp(i, theta_hat(i) - eta);
    const double hi = C(i) * theta_box.clamp(i, theta_hat(i) + eta);
    total += maximize ? std::max(lo, hi) : std::min(lo, hi);
  }
  return total;
}

}  // namespace

double nu_projection(const Eigen::RowVectorXd& C, const Eigen::VectorXd& theta_hat,
                     double eta, const Box& theta_box) {
  if (eta < 0.0) throw ConfigError("nu_projection: eta must be >= 0");
  return box_extreme(C, theta_hat, eta, theta_box, false);
}

double nu_projection_max(const Eigen::RowVectorXd& C, const Eigen::VectorXd& theta_hat,
                         double eta, const Box& theta_box) {
  if (eta < 0.0) throw ConfigError("nu_projection_max: eta must be >= 0");
  return box_extreme(C, theta_hat, eta, theta_box, true);
}

double racbf_margin(const ShrunkenBarrier& sb, const SystemModel& model,
                    const Eigen::VectorXd& x, double t,
                    const Eigen::VectorXd& theta_hat) {
  const double eta = error_envelope(t, sb.envelope);
  const double eta_dot = error_envelope_rate(t, sb.envelope);
  const double tr = sb.gamma_diag.cwiseInverse().sum();
  const Eigen::RowVectorXd C = sb.base.gradient(x) * model.regressor(x);
  return tr * eta * eta_dot + nu_projection(C, theta_hat, eta, model.param_box);
}

bool nagumo_check(const BarrierFunction& h, const SystemModel& model,
                  const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& theta) {
  const Eigen::RowVectorXd grad = h.gradient(x);
  const double hdot = grad.dot(model.drift(x)) +
                      grad.dot(model.control_matrix(x) * u) +
                      grad.dot(model.regressor(x) * theta);
  return hdot >= 0.0;
}

}  // namespace fxt
