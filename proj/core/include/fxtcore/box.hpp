#pragma once

#include <Eigen/Core>

#include "fxtcore/errors.hpp"

namespace fxt {

/// Axis-aligned box [lo, hi] used for the admissible parameter set and
/// input bounds.
struct Box {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  Box() = default;
  Box(Eigen::VectorXd lo_, Eigen::VectorXd hi_)
      : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo.size() != hi.size())
      throw DimensionMismatch("Box: lo/hi size mismatch");
    if ((hi.array() < lo.array()).any())
      throw ConfigError("Box: hi < lo");
  }

  static Box centered(int dim, double half_width) {
    return Box(Eigen::VectorXd::Constant(dim, -half_width),
               Eigen::VectorXd::Constant(dim, half_width));
  }

  int dim() const { return static_cast<int>(lo.size()); }

  bool contains(const Eigen::VectorXd& v, double tol = 0.0) const {
    return (v.array() >= lo.array() - tol).all() &&
           (v.array() <= hi.array() + tol).all();
  }

  double clamp(int i, double v) const {
    return std::min(hi[i], std::max(lo[i], v));
  }

  Eigen::VectorXd clamp(const Eigen::VectorXd& v) const {
    return v.cwiseMax(lo).cwiseMin(hi);
  }

  /// Sup-norm diameter of the box.
  double diameter_inf() const { return (hi - lo).maxCoeff(); }
};

}  // namespace fxt
