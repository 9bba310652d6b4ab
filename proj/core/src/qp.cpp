#include "fxtcore/qp.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <limits>

namespace fxt {

void QuadraticProgram::validate() const {
  const auto n = H.rows();
  if (H.cols() != n || c.size() != n)
    throw DimensionMismatch("QuadraticProgram: H/c dimensions");
  if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + H.cwiseAbs().maxCoeff()))
    throw ConfigError("QuadraticProgram: H not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success)
    throw ConfigError("QuadraticProgram: H not positive definite");
  if (A_ineq.rows() != b_ineq.size() || (A_ineq.rows() > 0 && A_ineq.cols() != n))
    throw DimensionMismatch("QuadraticProgram: inequality dimensions");
  if (lb.size() != n || ub.size() != n)
    throw DimensionMismatch("QuadraticProgram: bound dimensions");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stacked constraint list in the form a_i' w >= d_i:
//   rows of -A_ineq (>= -b_ineq), then finite lower bounds, then finite
//   upper bounds as -e_i' w >= -ub_i.
struct ConstraintSet {
  Eigen::MatrixXd normals;  // n x m, column i is a_i
  Eigen::VectorXd rhs;      // d
};

ConstraintSet stack_constraints(const QuadraticProgram& qp) {
  const int n = qp.num_vars();
  std::vector<Eigen::VectorXd> cols;
  std::vector<double> rhs;
  for (int i = 0; i < qp.A_ineq.rows(); ++i) {
    cols.push_back(-qp.A_ineq.row(i).transpose());
    rhs.push_back(-qp.b_ineq(i));
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(qp.lb(i))) {
      cols.push_back(Eigen::VectorXd::Unit(n, i));
      rhs.push_back(qp.lb(i));
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(qp.ub(i))) {
      cols.push_back(-Eigen::VectorXd::Unit(n, i));
      rhs.push_back(-qp.ub(i));
    }
  }
  ConstraintSet cs;
  cs.normals.resize(n, static_cast<Eigen::Index>(cols.size()));
  cs.rhs.resize(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    cs.normals.col(static_cast<Eigen::Index>(i)) = cols[i];
    cs.rhs(static_cast<Eigen::Index>(i)) = rhs[i];
  }
  return cs;
}

double kkt_residual(const QuadraticProgram& qp, const ConstraintSet& cs,
                    const Eigen::VectorXd& w, const std::vector<int>& active,
                    const Eigen::VectorXd& duals) {
  Eigen::VectorXd grad = qp.H * w + qp.c;
  for (std::size_t k = 0; k < active.size(); ++k)
    grad -= duals(static_cast<Eigen::Index>(k)) * cs.normals.col(active[k]);
  double res = grad.cwiseAbs().maxCoeff();
  if (cs.rhs.size() > 0) {
    const Eigen::VectorXd slack = cs.normals.transpose() * w - cs.rhs;
    res = std::max(res, std::max(-slack.minCoeff(), 0.0));
  }
  return res;
}

}  // namespace

QpSolution solve_qp(const QuadraticProgram& qp, double tol, int max_iter) {
  qp.validate();
  const ConstraintSet cs = stack_constraints(qp);
  const int m = static_cast<int>(cs.rhs.size());
  const Eigen::LLT<Eigen::MatrixXd> Hllt(qp.H);

  QpSolution sol;
  sol.w = Hllt.solve(-qp.c);
  std::vector<int> active;
  Eigen::VectorXd duals(0);

  for (int iter = 0; iter < max_iter; ++iter) {
    // Most violated inactive constraint.
    int p = -1;
    double worst = -tol;
    for (int i = 0; i < m; ++i) {
      bool is_active = false;
      for (int j : active)
        if (j == i) is_active = true;
      if (is_active) continue;
      const double s = cs.normals.col(i).dot(sol.w) - cs.rhs(i);
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) {
      sol.status = QpStatus::optimal;
      sol.active_set = active;
      sol.kkt_residual = kkt_residual(qp, cs, sol.w, active, duals);
      return sol;
    }

    const Eigen::VectorXd np = cs.normals.col(p);
    double up = 0.0;  // dual of the incoming constraint

    // Inner loop: take primal/dual steps until p becomes satisfied or the
    // problem is found infeasible.
    for (int inner = 0; inner <= max_iter; ++inner) {
      const auto k = static_cast<Eigen::Index>(active.size());
      Eigen::VectorXd r(k);       // dual step direction for active constraints
      Eigen::VectorXd z;          // primal step direction
      const Eigen::VectorXd Hinv_np = Hllt.solve(np);
      if (k > 0) {
        Eigen::MatrixXd N(qp.num_vars(), k);
        for (Eigen::Index j = 0; j < k; ++j) N.col(j) = cs.normals.col(active[j]);
        const Eigen::MatrixXd HinvN = Hllt.solve(N);
        const Eigen::MatrixXd G = N.transpose() * HinvN;
        r = G.ldlt().solve(N.transpose() * Hinv_np);
        z = Hinv_np - HinvN * r;
      } else {
        z = Hinv_np;
      }

      const double ztn = z.dot(np);
      const double sp = np.dot(sol.w) - cs.rhs(p);

      // Max dual step before an active constraint's multiplier hits zero.
      double t1 = kInf;
      int drop = -1;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (r(j) > tol) {
          const double step = duals(j) / r(j);
          if (step < t1) {
            t1 = step;
            drop = static_cast<int>(j);
          }
        }
      }
      const double t2 = (ztn > tol) ? -sp / ztn : kInf;
      const double t = std::min(t1, t2);

      if (!std::isfinite(t)) {
        sol.status = QpStatus::infeasible;
        sol.active_set = active;
        return sol;
      }

      if (std::isfinite(t2) && t == t2) {
        // Full step: p joins the active set.
        sol.w += t * z;
        for (Eigen::Index j = 0; j < k; ++j) duals(j) -= t * r(j);
        up += t;
        Eigen::VectorXd new_duals(k + 1);
        new_duals.head(k) = duals;
        new_duals(k) = up;
        duals = new_duals;
        active.push_back(p);
        break;
      }

      // Partial step: drop a blocking constraint and continue.
      if (std::isfinite(t2)) sol.w += t * z;
      for (Eigen::Index j = 0; j < k; ++j) duals(j) -= t * r(j);
      up += t;
      active.erase(active.begin() + drop);
      Eigen::VectorXd new_duals(k - 1);
      Eigen::Index idx = 0;
      for (Eigen::Index j = 0; j < k; ++j)
        if (j != drop) new_duals(idx++) = duals(j);
      duals = new_duals;
    }
  }

  sol.status = QpStatus::max_iter;
  sol.active_set = active;
  sol.kkt_residual = kkt_residual(qp, cs, sol.w, active, duals);
  return sol;
}

}  // namespace fxt
