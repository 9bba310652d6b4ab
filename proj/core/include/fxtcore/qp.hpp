#pragma once

#include <Eigen/Core>
#include <vector>

#include "fxtcore/errors.hpp"

namespace fxt {

/// min (1/2) w' H w + c' w  s.t.  A_ineq w <= b_ineq, lb <= w <= ub.
/// Use +/- infinity in lb/ub for unbounded variables.
struct QuadraticProgram {
  Eigen::MatrixXd H;
  Eigen::VectorXd c;
  Eigen::MatrixXd A_ineq;
  Eigen::VectorXd b_ineq;
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;

  int num_vars() const { return static_cast<int>(H.rows()); }
  void validate() const;
};

enum class QpStatus { optimal, infeasible, max_iter };

struct QpSolution {
  Eigen::VectorXd w;
  QpStatus status = QpStatus::max_iter;
  double kkt_residual = 0.0;
  std::vector<int> active_set;  // indices into the stacked constraint list
};

/// Dual active-set method; starts from the unconstrained minimum and adds
/// violated constraints one at a time. Deterministic for identical inputs.
QpSolution solve_qp(const QuadraticProgram& qp, double tol = 1e-9,
                    int max_iter = 200);

}  // namespace fxt
