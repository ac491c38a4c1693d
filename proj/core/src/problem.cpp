#include "sgdab/problem.hpp"

#include <stdexcept>

namespace sgdab {

GradientMapEval gradient_map_from_estimates(
    const MinimaxProblem& problem, const BlockVector& x,
    const Eigen::VectorXd& y, double eta_x, double eta_y,
    const std::vector<Eigen::VectorXd>& grad_x_blocks,
    const Eigen::VectorXd& grad_y, bool stochastic) {
  if (!(eta_x > 0.0) || !(eta_y > 0.0))
    throw std::invalid_argument("gradient_map: steps must be positive");

  std::vector<Eigen::VectorXd> gx;
  gx.reserve(problem.num_blocks);
  for (int i = 0; i < problem.num_blocks; ++i) {
    Eigen::VectorXd xp = prox_eval(problem.prox_g[i], eta_x,
                                   x.block(i) - eta_x * grad_x_blocks[i]);
    gx.push_back((x.block(i) - xp) / eta_x);
  }
  GradientMapEval ev;
  ev.Gx = BlockVector(std::move(gx));
  ev.Gy = (prox_eval(problem.prox_h, eta_y, y + eta_y * grad_y) - y) / eta_y;
  ev.norm_sq = ev.recompute_norm_sq();
  ev.stochastic = stochastic;
  return ev;
}

GradientMapEval deterministic_gradient_map(const MinimaxProblem& problem,
                                           const BlockVector& x,
                                           const Eigen::VectorXd& y,
                                           double eta_x, double eta_y) {
  std::vector<Eigen::VectorXd> gx;
  gx.reserve(problem.num_blocks);
  for (int i = 0; i < problem.num_blocks; ++i)
    gx.push_back(problem.grad_x_block(x, y, i));
  return gradient_map_from_estimates(problem, x, y, eta_x, eta_y, gx,
                                     problem.grad_y(x, y),
                                     /*stochastic=*/false);
}

}  // namespace sgdab
