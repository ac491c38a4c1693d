#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "sgdab/prox.hpp"

namespace sgdab {

struct DualAscentResult {
  Eigen::VectorXd y;
  std::int64_t grad_evals = 0;
  double map_norm_sq = 0.0;  // |G_y|^2 at the accepted final step
  double step = 0.0;         // final accepted step
  bool converged = false;
};

// Maximizes phi(y) = f(y) - h(y) for mu-strongly-concave phi by proximal
// gradient ascent with backtracking on a local Lipschitz estimate.  Stops
// when |G_y|^2 <= 2 mu tol, which bounds the suboptimality gap by tol.
//
// smooth_value may be null; the backtracking test then falls back to the
// gradient-difference Lipschitz check.
DualAscentResult maximize_strongly_concave(
    const ProxMap& prox_h,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const std::function<double(const Eigen::VectorXd&)>& smooth_value,
    Eigen::VectorXd y0, double mu, double tol, std::int64_t max_iters);

}  // namespace sgdab
