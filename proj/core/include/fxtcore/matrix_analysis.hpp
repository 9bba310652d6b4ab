#pragma once

#include <Eigen/Core>

#include "fxtcore/errors.hpp"

namespace fxt {

/// Relative threshold for deciding which singular values count as zero.
/// Singular values below rel_tol * sigma_max are treated as zero, so rank
/// decisions are invariant to an overall scaling of the matrix.
struct RankTolerance {
  double rel_tol = 1e-10;
};

/// Orthogonal decomposition of a vector into its rowspace(M) and
/// nullspace(M) components.
struct SubspaceSplit {
  Eigen::VectorXd row_part;
  Eigen::VectorXd null_part;
};

/// Smallest singular value of M strictly above rel_tol * sigma_max.
/// Throws AllZeroMatrix when every singular value is below threshold.
double min_nonzero_singular_value(const Eigen::MatrixXd& M,
                                  RankTolerance tol = {});

/// Splits w into rowspace/nullspace components of M. The parts are
/// orthogonal and sum back to w.
SubspaceSplit split_row_null(const Eigen::MatrixXd& M,
                             const Eigen::VectorXd& w,
                             RankTolerance tol = {});

/// Orthonormal basis of the nullspace of M (columns). May have zero
/// columns when M has full column rank.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& M,
                                RankTolerance tol = {});

/// True iff the nullspaces of M1 and M2 span the same subspace, compared
/// via principal angles between orthonormal bases (threshold 1e-6 rad).
bool nullspace_constant(const Eigen::MatrixXd& M1, const Eigen::MatrixXd& M2,
                        RankTolerance tol = {});

}  // namespace fxt
