#include "fxtcore/sim.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "fxtcore/controllers.hpp"
#include "fxtcore/estimation.hpp"
#include "fxtcore/integrate.hpp"
#include "fxtcore/matrix_analysis.hpp"
#include "fxtcore/qp.hpp"
#include "fxtcore/quadrotor.hpp"
#include "fxtcore/scenarios.hpp"

namespace fxt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AdaptationGains gains_from_config(const ScenarioConfig& cfg) {
  AdaptationGains g;
  g.gamma_diag = cfg.gamma_diag;
  g.a = cfg.gain_a;
  g.b = cfg.gain_b;
  g.mu = cfg.gain_mu;
  g.k_e = cfg.gain_ke;
  g.warmup_s = cfg.warmup_s;
  g.validate();
  return g;
}

double safe_sigma_min(const Eigen::MatrixXd& M) {
  try {
    return min_nonzero_singular_value(M);
  } catch (const AllZeroMatrix&) {
    return 0.0;
  }
}

int status_code(QpStatus s) {
  switch (s) {
    case QpStatus::optimal: return 0;
    case QpStatus::infeasible: return 1;
    default: return 2;
  }
}

void finalize_summary(SimulationTrace& trace) {
  auto& s = trace.summary;
  s.min_h = kInf;
  s.min_h_r = kInf;
  s.max_xi = 0.0;
  s.qp_failures = 0;
  s.nullspace_constant = true;
  for (const auto& row : trace.rows) {
    for (double v : row.h) s.min_h = std::min(s.min_h, v);
    for (double v : row.h_r) s.min_h_r = std::min(s.min_h_r, v);
    s.max_xi = std::max(s.max_xi, row.oracle_xi);
    if (row.qp_status != 0) ++s.qp_failures;
    if (!row.nullspace_ok) s.nullspace_constant = false;
  }
}

SimulationTrace run_gap(const ScenarioConfig& cfg) {
  const SystemModel model = make_gap_model(cfg);
  const AdaptationGains gains = gains_from_config(cfg);
  const Eigen::VectorXd theta_star = cfg.theta_true;
  const int p = model.p;
  const double vartheta = (cfg.theta_hi - cfg.theta_lo).maxCoeff();

  ErrorEnvelope env =
      make_error_envelope(gains, cfg.sigma_lb_config, vartheta, p);

  std::vector<ShrunkenBarrier> cbfs;
  cbfs.push_back({ellipse_cbf(cfg.ellipse1_center, cfg.ellipse_axes),
                  cfg.gamma_diag, env});
  cbfs.push_back({ellipse_cbf(cfg.ellipse2_center, cfg.ellipse_axes),
                  cfg.gamma_diag, env});

  ClfSpec clf;
  const double KV = cfg.clf_KV;
  clf.value = [KV](const Eigen::VectorXd& z) {
    return KV * (z(0) * z(0) + z(1) * z(1));
  };
  clf.gradient = [KV](const Eigen::VectorXd& z) {
    Eigen::RowVectorXd g(2);
    g << 2.0 * KV * z(0), 2.0 * KV * z(1);
    return g;
  };
  clf.c1 = cfg.clf_c1;
  clf.c2 = cfg.clf_c2;
  clf.gamma1 = 1.0 + 1.0 / cfg.clf_mu;
  clf.gamma2 = 1.0 - 1.0 / cfg.clf_mu;

  GapQpWeights weights;
  weights.Q = Eigen::MatrixXd::Identity(2, 2);
  weights.q0 = cfg.gap_q0;
  weights.p_i = cfg.gap_pi;
  weights.delta_lb = cfg.gap_delta_lb;

  Eigen::VectorXd x = cfg.start;
  Eigen::VectorXd th = cfg.theta_hat0;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(2);
  Eigen::VectorXd x_prev = x;
  const Eigen::MatrixXd M0 = model.regressor(x);

  SimulationTrace trace;
  trace.h_names = {"e1", "e2"};

  const int steps = static_cast<int>(std::llround(cfg.horizon_s / cfg.dt_s));
  double conv_time = -1.0;
  double sigma_run = kInf;
  double sigma_at_conv = kInf;

  for (int k = 0; k <= steps; ++k) {
    const double t = k * cfg.dt_s;
    const Eigen::MatrixXd M = model.regressor(x);
    const double sigma = safe_sigma_min(M);
    if (conv_time < 0.0 && sigma > 0.0) sigma_run = std::min(sigma_run, sigma);

    const QuadraticProgram qp =
        build_gap_qp(model, x, th, t, cbfs, clf, weights);
    const QpSolution sol = solve_qp(qp);
    if (sol.status == QpStatus::optimal)
      u = model.input_bounds.clamp(sol.w.head(2));

    const Eigen::VectorXd theta_err = theta_star - th;
    const double M_err = (M * theta_err).norm();
    if (conv_time < 0.0 && M_err <= cfg.conv_tol) {
      conv_time = t;
      sigma_at_conv = sigma_run;
    }

    if (k % cfg.log_every == 0) {
      TraceRow row;
      row.t = t;
      row.x = x;
      row.u = u;
      row.theta_hat = th;
      row.eta = error_envelope(t, env);
      const SubspaceSplit split = split_row_null(M, theta_err);
      row.oracle_V =
          0.5 * split.row_part.dot(cfg.gamma_diag.cwiseInverse().cwiseProduct(
                    split.row_part));
      row.oracle_theta_err = theta_err.norm();
      row.oracle_theta_R_inf = split.row_part.lpNorm<Eigen::Infinity>();
      row.oracle_M_theta_err = M_err;
      row.oracle_xi = 0.0;
      row.sigma_min_M = sigma;
      row.qp_status = status_code(sol.status);
      for (const auto& sb : cbfs) {
        row.h.push_back(sb.base.value(x));
        row.h_r.push_back(shrunken_value(sb, x, t));
      }
      row.nullspace_ok = nullspace_constant(M, M0);
      row.tracking_err = 0.0;
      trace.rows.push_back(std::move(row));
    }
    if (k == steps) break;

    // Plant and estimator advance together; the measurement pair is
    // re-evaluated at every integrator stage.
    const Eigen::VectorXd xdot_fd = (k > 0)
        ? ((x - x_prev) / cfg.dt_s).eval()
        : Eigen::VectorXd::Zero(2).eval();
    const bool have_meas = cfg.exact_rate || k > 0;
    x_prev = x;

    Eigen::VectorXd s(2 + p);
    s << x, th;
    const double h = cfg.dt_s / cfg.substeps;
    auto deriv = [&](double tau, const Eigen::VectorXd& y) {
      (void)tau;
      const Eigen::VectorXd xs = y.head(2);
      const Eigen::VectorXd ths = y.tail(p);
      const Eigen::VectorXd xdot_true = eval_dynamics(model, xs, u, theta_star);
      Eigen::VectorXd thdot = Eigen::VectorXd::Zero(p);
      if (have_meas) {
        const Eigen::VectorXd xdot_meas = cfg.exact_rate ? xdot_true : xdot_fd;
        const MeasurementPair pair =
            rate_measurement(model, xs, xdot_meas, u, ths);
        thdot = fxt_update(pair, gains);
      }
      Eigen::VectorXd out(2 + p);
      out << xdot_true, thdot;
      return out;
    };
    for (int j = 0; j < cfg.substeps; ++j)
      s = rk4_step(deriv, s, t + j * h, h);
    x = s.head(2);
    th = s.tail(p);
  }

  finalize_summary(trace);
  auto& sum = trace.summary;
  sum.converged = conv_time >= 0.0;
  sum.convergence_time_s = conv_time;
  const double sigma_for_T = conv_time >= 0.0 ? sigma_at_conv : sigma_run;
  sum.sigma_lb_realized = std::isfinite(sigma_for_T) ? sigma_for_T : 0.0;
  sum.theoretical_T_s =
      (sum.sigma_lb_realized > 0.0)
          ? gains.warmup_s + settling_time_nominal(gains, sum.sigma_lb_realized)
          : kInf;
  sum.final_goal_dist = x.norm();
  sum.tracking_rms = 0.0;
  sum.max_disturbance = 0.0;
  return trace;
}

SimulationTrace run_quadrotor(const ScenarioConfig& cfg) {
  const SystemModel model = make_quadrotor_model(cfg);
  const WindField wind = make_wind_field(cfg);
  const bool gusty = (cfg.wind == WindKind::gusty_wind);
  const bool adapt = (cfg.scheme == EstimatorScheme::predictor);
  const AdaptationGains gains = gains_from_config(cfg);
  const Eigen::VectorXd theta_star = cfg.theta_true;
  const int p = model.p;
  const double vartheta = (cfg.theta_hi - cfg.theta_lo).maxCoeff();

  ErrorEnvelope env =
      make_error_envelope(gains, cfg.sigma_lb_config, vartheta, p);
  env.t_offset = adapt ? cfg.warmup_s : 1e18;
  env.eta_cap = vartheta;

  std::vector<ShrunkenBarrier> cbfs;
  cbfs.push_back({altitude_cbf(cfg.cz_m, cfg.pz_m, cfg.nz), cfg.gamma_diag, env});
  cbfs.push_back({attitude_cbf(cfg.alpha_max_rad), cfg.gamma_diag, env});

  TrackingQpWeights weights;
  weights.p1 = cfg.track_p1;
  weights.p2 = cfg.track_p2;
  weights.delta_lb = cfg.track_delta_lb;
  TrackingGains tgains;

  // Start from a wind trim: attitude and thrust that hold the reference
  // velocity against the true drag, with the position offset chosen so the
  // outer loop's PD force matches the trim force at theta_hat(0). Starting
  // on-trim keeps the relative wind bounded away from component sign flips
  // during the transient, which keeps the regressor well conditioned.
  const ReferencePoint ref0 = lemniscate_reference(
      0.0, cfg.lemniscate_amp_m, cfg.lemniscate_period_s, cfg.lemniscate_alt_m);
  double phi0 = 0.0, theta0 = 0.0, F0 = cfg.mass_kg * kGravity;
  Eigen::Vector3d v_body0 = Eigen::Vector3d::Zero();
  Eigen::Vector3d a_drag0 = Eigen::Vector3d::Zero();
  for (int it = 0; it < 60; ++it) {
    const Eigen::Matrix3d C = velocity_kinematics(phi0, theta0, 0.0);
    v_body0 = C.inverse() * ref0.velocity;
    const Eigen::Vector3d v_r =
        world_to_body(phi0, theta0, 0.0) * cfg.wind_mps - v_body0;
    a_drag0 = drag_regressor_block(v_r, cfg.K_delta, cfg.mass_kg) *
              theta_star.head<3>();
    theta0 = std::asin(std::clamp(a_drag0(0) / kGravity, -0.99, 0.99));
    phi0 = std::asin(
        std::clamp(-a_drag0(1) / (kGravity * std::cos(theta0)), -0.99, 0.99));
    F0 = cfg.mass_kg *
         (kGravity * std::cos(theta0) * std::cos(phi0) + a_drag0(2));
  }
  TrackingGains tgains0;
  Eigen::VectorXd chi = Eigen::VectorXd::Zero(12);
  chi.head<3>() = ref0.position +
                  velocity_kinematics(phi0, theta0, 0.0) * a_drag0 /
                      tgains0.kp_pos;
  chi.segment<3>(3) = v_body0;
  chi(6) = phi0;
  chi(7) = theta0;
  Eigen::VectorXd z = chi;
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(12, p);
  Eigen::VectorXd th = cfg.theta_hat0;
  Eigen::Vector4d u(F0, 0.0, 0.0, 0.0);

  SimulationTrace trace;
  trace.h_names = {"alt", "att"};
  const Eigen::MatrixXd Delta0 = model.regressor(chi);

  const int steps = static_cast<int>(std::llround(cfg.horizon_s / cfg.dt_s));
  double conv_time = -1.0;
  double sigma_run = kInf;
  double sigma_used = cfg.sigma_lb_config;
  double max_d = 0.0;
  double track_sq_sum = 0.0;
  int track_count = 0;

  auto refresh_envelopes = [&]() {
    for (auto& sb : cbfs) sb.envelope = env;
  };

  for (int k = 0; k <= steps; ++k) {
    const double t = k * cfg.dt_s;

    // The regressor floor enters the settling and robustness bounds only
    // while the rowspace error is still being driven down, so the running
    // minimum is frozen once the estimate has converged or the rowspace
    // Lyapunov function has entered {V <= 1} (with at least one post-warmup
    // sample recorded).
    bool sigma_frozen = false;
    if (std::isfinite(sigma_run)) {
      if (conv_time >= 0.0) {
        sigma_frozen = true;
      } else {
        const Eigen::VectorXd tr = split_row_null(W, theta_star - th).row_part;
        const double V_R =
            0.5 * tr.dot(cfg.gamma_diag.cwiseInverse().cwiseProduct(tr));
        sigma_frozen = V_R <= 1.001;
      }
    }
    if (adapt && t >= cfg.warmup_s && !sigma_frozen) {
      const double sW = safe_sigma_min(W);
      if (sW > 0.0 && sW < sigma_run) {
        sigma_run = sW;
        if (sigma_run < sigma_used * (1.0 - 1e-12)) {
          const double cap = std::min(env.eta_cap, error_envelope(t, env));
          env = make_error_envelope(gains, sigma_run, vartheta, p);
          env.t_offset = cfg.warmup_s;
          env.eta_cap = cap;
          sigma_used = sigma_run;
          refresh_envelopes();
        }
      }
    }

    const ReferencePoint ref = lemniscate_reference(
        t, cfg.lemniscate_amp_m, cfg.lemniscate_period_s, cfg.lemniscate_alt_m);
    const Eigen::Vector3d drag_est =
        (model.regressor(chi) * th).segment<3>(3);
    const Eigen::Vector4d u_nom = nominal_tracking_control(
        chi, ref, cfg.mass_kg, cfg.J_kgm2, tgains, drag_est, model.input_bounds);
    const QuadraticProgram qp =
        build_tracking_qp(model, chi, u_nom, cbfs, t, th, weights);
    const QpSolution sol = solve_qp(qp);
    if (sol.status == QpStatus::optimal)
      u = model.input_bounds.clamp(sol.w.head(4));

    const Eigen::VectorXd theta_err = theta_star - th;
    const Eigen::MatrixXd M = adapt ? W : model.regressor(chi);
    const double M_err = (model.regressor(chi) * theta_err).norm();
    if (conv_time < 0.0 && M_err <= cfg.conv_tol) conv_time = t;

    const double track_err = (chi.head(3) - ref.position).norm();
    track_sq_sum += track_err * track_err;
    ++track_count;

    const Eigen::VectorXd d_now =
        gusty ? gust_disturbance(t, chi, wind, cfg.K_delta, cfg.mass_kg,
                                 theta_star)
              : Eigen::VectorXd::Zero(12);
    max_d = std::max(max_d, d_now.norm());

    if (k % cfg.log_every == 0) {
      TraceRow row;
      row.t = t;
      row.x = chi;
      row.u = u;
      row.theta_hat = th;
      row.eta = error_envelope(t, env);
      const SubspaceSplit split = split_row_null(M, theta_err);
      row.oracle_V =
          0.5 * split.row_part.dot(cfg.gamma_diag.cwiseInverse().cwiseProduct(
                    split.row_part));
      row.oracle_theta_err = theta_err.norm();
      row.oracle_theta_R_inf = split.row_part.lpNorm<Eigen::Infinity>();
      row.oracle_M_theta_err = M_err;
      row.oracle_xi = adapt ? ((chi - z) - W * theta_err).norm() : 0.0;
      row.sigma_min_M = safe_sigma_min(M);
      row.qp_status = status_code(sol.status);
      for (const auto& sb : cbfs) {
        row.h.push_back(sb.base.value(chi));
        row.h_r.push_back(shrunken_value(sb, chi, t));
      }
      row.nullspace_ok = nullspace_constant(model.regressor(chi), Delta0);
      row.tracking_err = track_err;
      trace.rows.push_back(std::move(row));
    }
    if (k == steps) break;

    // Joint integration of plant, predictor, and adaptation state with the
    // control held over the period.
    const int nW = 12 * p;
    Eigen::VectorXd s(12 + 12 + nW + p);
    s.head(12) = chi;
    s.segment(12, 12) = z;
    s.segment(24, nW) = Eigen::Map<const Eigen::VectorXd>(W.data(), nW);
    s.tail(p) = th;
    const double h = cfg.dt_s / cfg.substeps;
    auto deriv = [&](double tau, const Eigen::VectorXd& y) {
      const Eigen::VectorXd chi_s = y.head(12);
      const Eigen::VectorXd z_s = y.segment(12, 12);
      const Eigen::MatrixXd W_s =
          Eigen::Map<const Eigen::MatrixXd>(y.segment(24, nW).data(), 12, p);
      const Eigen::VectorXd th_s = y.tail(p);
      const Eigen::MatrixXd Delta = model.regressor(chi_s);
      const Eigen::VectorXd e = chi_s - z_s;
      Eigen::VectorXd thdot = Eigen::VectorXd::Zero(p);
      if (adapt) thdot = fxt_update(MeasurementPair{W_s, e}, gains);
      Eigen::VectorXd chidot = eval_dynamics(model, chi_s, u, theta_star);
      if (gusty)
        chidot += gust_disturbance(tau, chi_s, wind, cfg.K_delta, cfg.mass_kg,
                                   theta_star);
      const Eigen::VectorXd zdot = model.drift(chi_s) +
                                   model.control_matrix(chi_s) * u +
                                   Delta * th_s + gains.k_e * e + W_s * thdot;
      const Eigen::MatrixXd Wdot = -gains.k_e * W_s + Delta;
      Eigen::VectorXd out(12 + 12 + nW + p);
      out.head(12) = chidot;
      out.segment(12, 12) = zdot;
      out.segment(24, nW) = Eigen::Map<const Eigen::VectorXd>(Wdot.data(), nW);
      out.tail(p) = thdot;
      return out;
    };
    for (int j = 0; j < cfg.substeps; ++j)
      s = rk4_step(deriv, s, t + j * h, h);
    chi = s.head(12);
    z = s.segment(12, 12);
    W = Eigen::Map<const Eigen::MatrixXd>(s.segment(24, nW).data(), 12, p);
    th = s.tail(p);
  }

  finalize_summary(trace);
  auto& sum = trace.summary;
  sum.converged = conv_time >= 0.0;
  sum.convergence_time_s = conv_time;
  sum.sigma_lb_realized = std::isfinite(sigma_run) ? sigma_run : 0.0;
  sum.theoretical_T_s =
      (adapt && sum.sigma_lb_realized > 0.0)
          ? cfg.warmup_s + settling_time_nominal(gains, sum.sigma_lb_realized)
          : kInf;
  sum.tracking_rms = std::sqrt(track_sq_sum / std::max(track_count, 1));
  sum.max_disturbance = max_d;
  sum.final_goal_dist = 0.0;
  return trace;
}

}  // namespace

SimulationTrace run_closed_loop(const ScenarioConfig& cfg) {
  cfg.validate();
  if (cfg.kind == ScenarioKind::gap) return run_gap(cfg);
  return run_quadrotor(cfg);
}

}  // namespace fxt
