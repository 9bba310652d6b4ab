#include "fxtcore/verify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fxtcore/estimation.hpp"

namespace fxt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Eigen::VectorXd random_direction(Rng& rng, int n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss(rng);
  const double nn = v.norm();
  return nn > 1e-12 ? (v / nn).eval() : Eigen::VectorXd::Unit(n, 0).eval();
}

nlohmann::json vec_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

// Adaptive Simpson on [lo, hi] with a positive integrand.
double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double fl, double fm, double fh, double whole,
                        double tol, int depth) {
  const double m = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + m);
  const double rm = 0.5 * (m + hi);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - lo) / 6.0 * (fl + 4.0 * flm + fm);
  const double right = (hi - m) / 6.0 * (fm + 4.0 * frm + fh);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, lo, m, fl, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, hi, fm, frm, fh, right, 0.5 * tol, depth - 1);
}

double quadrature(const std::function<double(double)>& f, double lo, double hi,
                  double rel_tol) {
  const double fl = f(lo);
  const double fm = f(0.5 * (lo + hi));
  const double fh = f(hi);
  const double whole = (hi - lo) / 6.0 * (fl + 4.0 * fm + fh);
  const double tol = std::max(std::abs(whole), 1.0) * rel_tol;
  return adaptive_simpson(f, lo, hi, fl, fm, fh, whole, tol, 40);
}

}  // namespace

double integrate_settling(double c1, double c2, double c3, double mu, double V0,
                          double rel_tol) {
  if (V0 <= 1.0) throw ConfigError("integrate_settling: V0 must exceed 1");
  // I = int_{V0}^{1} dV / Vdot with Vdot < 0 equals int_1^{V0} dV / (-Vdot).
  auto f = [&](double V) {
    const double denom = c1 * std::pow(V, 1.0 + 1.0 / mu) +
                         c2 * std::pow(V, 1.0 - 1.0 / mu) - c3 * V;
    if (denom <= 0.0)
      throw PreconditionViolated("integrate_settling: Vdot not negative on path");
    return 1.0 / denom;
  };
  return quadrature(f, 1.0, V0, rel_tol);
}

QpSolution solve_qp_enumeration(const QuadraticProgram& qp, double tol) {
  qp.validate();
  const int n = qp.num_vars();

  // Stack general rows and finite bounds as a w <= b.
  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  for (int i = 0; i < qp.A_ineq.rows(); ++i) {
    rows.push_back(qp.A_ineq.row(i));
    rhs.push_back(qp.b_ineq(i));
  }
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(qp.ub(j))) {
      rows.push_back(Eigen::RowVectorXd::Unit(n, j));
      rhs.push_back(qp.ub(j));
    }
    if (std::isfinite(qp.lb(j))) {
      rows.push_back(-Eigen::RowVectorXd::Unit(n, j));
      rhs.push_back(-qp.lb(j));
    }
  }
  const int q = static_cast<int>(rows.size());
  if (q > 20) throw ConfigError("solve_qp_enumeration: too many constraints");

  auto feasible = [&](const Eigen::VectorXd& w) {
    for (int i = 0; i < q; ++i)
      if (rows[i].dot(w) > rhs[i] + tol) return false;
    return true;
  };

  const Eigen::LLT<Eigen::MatrixXd> Hllt(qp.H);
  QpSolution best;
  best.status = QpStatus::infeasible;
  double best_obj = kInf;

  for (std::uint32_t mask = 0; mask < (1u << q); ++mask) {
    std::vector<int> act;
    for (int i = 0; i < q; ++i)
      if (mask & (1u << i)) act.push_back(i);
    if (static_cast<int>(act.size()) > n) continue;
    const int na = static_cast<int>(act.size());
    Eigen::MatrixXd A(na, n);
    Eigen::VectorXd b(na);
    for (int i = 0; i < na; ++i) {
      A.row(i) = rows[act[i]];
      b(i) = rhs[act[i]];
    }
    Eigen::VectorXd w, lambda;
    if (na == 0) {
      w = Hllt.solve(-qp.c);
    } else {
      // KKT: H w + c + A' lambda = 0, A w = b.
      const Eigen::MatrixXd HiA = Hllt.solve(A.transpose());
      const Eigen::MatrixXd S = A * HiA;
      const Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
      if (lu.rank() < na) continue;
      const Eigen::VectorXd w0 = Hllt.solve(-qp.c);
      lambda = lu.solve(A * w0 - b);
      w = w0 - HiA * lambda;
      if ((lambda.array() < -tol).any()) continue;
    }
    if (!feasible(w)) continue;
    const double obj = 0.5 * w.dot(qp.H * w) + qp.c.dot(w);
    if (obj < best_obj - 1e-12) {
      best_obj = obj;
      best.w = w;
      best.status = QpStatus::optimal;
      best.active_set = act;
    }
  }
  return best;
}

PropertyReport verify_lemmas(int samples, std::uint64_t seed,
                             PairingBoundFn pairing_bound,
                             SettlingBoundFn settling_bound) {
  if (!pairing_bound)
    pairing_bound = [](double xn, double a, double b, double m, double B_y) {
      return -B_y * (a * std::pow(xn, 1.0 + 2.0 / m) +
                     std::pow(2.0, 2.0 / m) * b * std::pow(xn, 1.0 - 2.0 / m));
    };
  if (!settling_bound)
    settling_bound = [](double c1, double c2, double c3, double mu, double k,
                        double V0) { return lemma2_bound(c1, c2, c3, mu, k, V0); };

  PropertyReport report;
  report.suite = "lemmas";
  report.samples = samples;
  Rng rng(seed);

  auto record = [&](const nlohmann::json& j) {
    ++report.violations;
    if (report.first_counterexample.empty())
      report.first_counterexample = j.dump();
  };

  // Pairing inequality: P >= bound whenever ||y|| <= B_y < ||x|| / 2.
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + static_cast<int>(uniform(rng, 0.0, 3.0));
    const double B_y = uniform(rng, 0.1, 2.0);
    const double a = uniform(rng, 0.1, 5.0);
    const double b = uniform(rng, 0.1, 5.0);
    const double m = uniform(rng, 2.05, 8.0);
    const Eigen::VectorXd y = random_direction(rng, n) * uniform(rng, 0.0, B_y);
    const Eigen::VectorXd x =
        random_direction(rng, n) * (2.0 * B_y * uniform(rng, 1.001, 5.0));
    const double sn = (x + y).norm();
    const double P =
        x.dot(y) * (a * std::pow(sn, 2.0 / m) + b / std::pow(sn, 2.0 / m));
    const double bound = pairing_bound(x.norm(), a, b, m, B_y);
    if (P < bound - 1e-9 * (1.0 + std::abs(bound)))
      record({{"check", "pairing"}, {"x", vec_json(x)}, {"y", vec_json(y)},
              {"a", a}, {"b", b}, {"m", m}, {"B_y", B_y},
              {"P", P}, {"bound", bound}});
  }

  // Settling integral vs closed-form bound, both regimes.
  const int quad_samples = std::min(samples, 1000);
  for (int s = 0; s < quad_samples; ++s) {
    const double c1 = uniform(rng, 0.1, 5.0);
    const double c2 = uniform(rng, 0.1, 5.0);
    const double mu = uniform(rng, 2.05, 8.0);
    const double c3 = uniform(rng, 0.0, 0.98) * 2.0 * std::sqrt(c1 * c2);
    const double V0 = uniform(rng, 1.1, 1000.0);
    const double I = integrate_settling(c1, c2, c3, mu, V0);
    const double bound = settling_bound(c1, c2, c3, mu, 0.9, V0);
    if (I > bound * (1.0 + 1e-6))
      record({{"check", "settling-small"}, {"c1", c1}, {"c2", c2}, {"c3", c3},
              {"mu", mu}, {"V0", V0}, {"I", I}, {"bound", bound}});
  }
  for (int s = 0; s < quad_samples; ++s) {
    const double c1 = uniform(rng, 0.1, 2.0);
    const double c2 = uniform(rng, 0.1, 2.0);
    const double mu = uniform(rng, 2.05, 8.0);
    const double c3 = (c1 + c2) * uniform(rng, 1.2, 2.0);
    const double root =
        (c3 - std::sqrt(c3 * c3 - 4.0 * c1 * c2)) / (2.0 * c1);
    const double k_min = 1.02 / root;
    if (k_min >= 0.98) continue;  // box too tight to place V0 above 1
    const double k = uniform(rng, k_min, 0.98);
    const double V0 = uniform(rng, 1.0 + 1e-6, std::pow(k * root, mu));
    const double I = integrate_settling(c1, c2, c3, mu, V0);
    const double bound = settling_bound(c1, c2, c3, mu, k, V0);
    if (I > bound * (1.0 + 1e-6))
      record({{"check", "settling-large"}, {"c1", c1}, {"c2", c2}, {"c3", c3},
              {"mu", mu}, {"k", k}, {"V0", V0}, {"I", I}, {"bound", bound}});
  }
  return report;
}

PropertyReport verify_envelopes(int samples, std::uint64_t seed) {
  PropertyReport report;
  report.suite = "envelopes";
  report.samples = samples;
  Rng rng(seed);

  auto record = [&](const nlohmann::json& j) {
    ++report.violations;
    if (report.first_counterexample.empty())
      report.first_counterexample = j.dump();
  };

  for (int s = 0; s < samples; ++s) {
    const int p = 2 + static_cast<int>(uniform(rng, 0.0, 3.0));
    AdaptationGains gains;
    gains.gamma_diag = Eigen::VectorXd(p);
    for (int i = 0; i < p; ++i) gains.gamma_diag(i) = uniform(rng, 0.5, 300.0);
    gains.a = uniform(rng, 0.5, 8.0);
    gains.b = uniform(rng, 0.5, 8.0);
    gains.mu = uniform(rng, 2.1, 8.0);
    const double sigma = uniform(rng, 0.05, 2.0);
    const double vartheta = uniform(rng, 0.1, 4.0);
    ErrorEnvelope env = make_error_envelope(gains, sigma, vartheta, p);
    if (s % 2 == 0) {
      env.t_offset = uniform(rng, 0.0, 0.5);
      env.eta_cap = vartheta;
    }
    const double T = settling_time_nominal(gains, sigma);
    const double t_end = env.t_offset + 1.5 * T;

    double prev = kInf;
    const int grid = 200;
    for (int i = 0; i <= grid; ++i) {
      const double t = t_end * i / grid;
      const double eta = error_envelope(t, env);
      if (eta > prev + 1e-9 * (1.0 + prev)) {
        record({{"check", "monotone"}, {"t", t}, {"eta", eta}, {"prev", prev},
                {"sigma", sigma}, {"mu", gains.mu}});
        break;
      }
      if (eta > env.eta_cap + 1e-12) {
        record({{"check", "cap"}, {"t", t}, {"eta", eta}, {"cap", env.eta_cap}});
        break;
      }
      prev = eta;
      // Finite-difference check of the rate away from the cap and the
      // phase kink.
      const double A = envelope_phase(t, env);
      const double rate = error_envelope_rate(t, env);
      // Step sized to the local time scale eta/|etadot|; the check skips
      // the phase kink at A = 0 and points where the cap is active.
      const double h = std::abs(rate) > 1e-12
                           ? std::max(1e-9, 1e-4 * eta / std::abs(rate))
                           : 0.0;
      if (h > 0.0 && A > 1e-3 && envelope_phase(t + h, env) > 1e-3 &&
          t > env.t_offset + h &&
          error_envelope(t, env) < env.eta_cap * (1.0 - 1e-9)) {
        const double fd =
            (error_envelope(t + h, env) - error_envelope(t - h, env)) / (2.0 * h);
        if (std::abs(fd - rate) > 1e-3 * (1.0 + std::abs(rate))) {
          record({{"check", "rate"}, {"t", t}, {"fd", fd}, {"rate", rate},
                  {"sigma", sigma}, {"mu", gains.mu}});
          break;
        }
      }
    }
    // Phase exhaustion: eta identically zero once A(t) hits zero.
    const double t_zero =
        env.t_offset + env.mu * env.Xi / std::sqrt(env.c1 * env.c2);
    if (error_envelope(t_zero * 1.01 + 1e-9, env) != 0.0)
      record({{"check", "exhaustion"}, {"t_zero", t_zero}});
  }
  return report;
}

PropertyReport verify_qp(int samples, std::uint64_t seed) {
  PropertyReport report;
  report.suite = "qp";
  report.samples = samples;
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto record = [&](const nlohmann::json& j) {
    ++report.violations;
    if (report.first_counterexample.empty())
      report.first_counterexample = j.dump();
  };

  for (int s = 0; s < samples; ++s) {
    const int n = 1 + static_cast<int>(uniform(rng, 0.0, 5.0));
    const int q = static_cast<int>(uniform(rng, 0.0, 6.0));
    QuadraticProgram qp;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    qp.H = A.transpose() * A + 0.1 * Eigen::MatrixXd::Identity(n, n);
    qp.c = Eigen::VectorXd::NullaryExpr(n, [&](int) { return gauss(rng); });
    qp.A_ineq.resize(q, n);
    qp.b_ineq.resize(q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < n; ++j) qp.A_ineq(i, j) = gauss(rng);
    if (s % 2 == 0 && q > 0) {
      // Anchor a feasible point so roughly half the instances are feasible.
      const Eigen::VectorXd w0 =
          Eigen::VectorXd::NullaryExpr(n, [&](int) { return gauss(rng); });
      for (int i = 0; i < q; ++i)
        qp.b_ineq(i) = qp.A_ineq.row(i).dot(w0) + std::abs(gauss(rng));
    } else {
      for (int i = 0; i < q; ++i) qp.b_ineq(i) = gauss(rng);
    }
    qp.lb = Eigen::VectorXd::Constant(n, -kInf);
    qp.ub = Eigen::VectorXd::Constant(n, kInf);
    for (int j = 0; j < n; ++j) {
      if (uniform(rng, 0.0, 1.0) < 0.3) qp.lb(j) = -std::abs(gauss(rng)) - 0.5;
      if (uniform(rng, 0.0, 1.0) < 0.3) qp.ub(j) = std::abs(gauss(rng)) + 0.5;
    }

    const QpSolution got = solve_qp(qp);
    const QpSolution want = solve_qp_enumeration(qp);
    const QpSolution rerun = solve_qp(qp);

    bool ok = true;
    if (got.status != want.status) ok = false;
    if (ok && got.status == QpStatus::optimal) {
      const double og = 0.5 * got.w.dot(qp.H * got.w) + qp.c.dot(got.w);
      const double ow = 0.5 * want.w.dot(qp.H * want.w) + qp.c.dot(want.w);
      if (std::abs(og - ow) > 1e-6 * (1.0 + std::abs(ow))) ok = false;
      if ((got.w - want.w).norm() > 1e-6 * (1.0 + want.w.norm())) ok = false;
    }
    if (got.status != rerun.status ||
        (got.status == QpStatus::optimal && (got.w - rerun.w).norm() != 0.0))
      ok = false;
    if (!ok) {
      nlohmann::json j;
      j["check"] = "qp-oracle";
      j["n"] = n;
      j["q"] = q;
      j["seed_index"] = s;
      j["status_solver"] = static_cast<int>(got.status);
      j["status_oracle"] = static_cast<int>(want.status);
      if (got.status == QpStatus::optimal) j["w_solver"] = vec_json(got.w);
      if (want.status == QpStatus::optimal) j["w_oracle"] = vec_json(want.w);
      j["c"] = vec_json(qp.c);
      record(j);
    }
  }
  return report;
}

std::string report_to_json(const PropertyReport& report) {
  nlohmann::json j;
  j["suite"] = report.suite;
  j["samples"] = report.samples;
  j["violations"] = report.violations;
  if (!report.first_counterexample.empty())
    j["first_counterexample"] = nlohmann::json::parse(report.first_counterexample);
  return j.dump(2) + "\n";
}

}  // namespace fxt
