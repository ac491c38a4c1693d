#pragma once

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sgdab/block_vector.hpp"
#include "sgdab/prox.hpp"
#include "sgdab/rng.hpp"

namespace sgdab {

// Closed-form quantities available only to tests and reporting.  Solvers must
// never read these; the diagnostics-isolation test enforces it.
struct Diagnostics {
  // Maximizer of f(x, .) - h(.) for a given x.
  std::function<Eigen::VectorXd(const BlockVector&)> y_star;
  // Primal function F(x) = g(x) + max_y f(x, y) - h(y).
  std::function<double(const BlockVector&)> primal_value;
  // Classification problems: fraction of wrong predictions at x.
  std::function<double(const BlockVector&)> train_error;
  double L_true = 0.0;      // Lipschitz constant of grad f
  double kappa_true = 0.0;  // L_true / mu
};

// Composite minimax problem
//   min_x max_y  sum_i g_i(x_i) + f(x, y) - h(y),
// with f smooth, concave in y with modulus mu >= 0, and g_i, h given through
// their proximal maps.  Gradients of f are deterministic callables; optional
// finite-sum minibatch samplers provide problem-specific stochastic oracles.
struct MinimaxProblem {
  int num_blocks = 1;
  std::vector<int> dims_x;
  int dim_y = 0;

  // grad of f with respect to block i of x, length dims_x[i].
  std::function<Eigen::VectorXd(const BlockVector&, const Eigen::VectorXd&,
                                int)>
      grad_x_block;
  // grad of f with respect to y, length dim_y.
  std::function<Eigen::VectorXd(const BlockVector&, const Eigen::VectorXd&)>
      grad_y;

  std::vector<ProxMap> prox_g;  // one per block
  ProxMap prox_h;

  double mu = 0.0;     // concavity modulus of f(x, .)
  double F_bar = 0.0;  // lower bound on inf F

  // Optional exact objective L(x, y); required by the outer driver's
  // iteration-count formula.
  std::function<double(const BlockVector&, const Eigen::VectorXd&)> eval_L;

  // Optional minibatch oracles for finite-sum problems.  A call with batch
  // size M draws M samples from the stream and returns an unbiased estimate.
  std::function<Eigen::VectorXd(const BlockVector&, const Eigen::VectorXd&,
                                int, int, RngStream&)>
      stoch_grad_x_block;
  std::function<Eigen::VectorXd(const BlockVector&, const Eigen::VectorXd&,
                                int, RngStream&)>
      stoch_grad_y;

  std::optional<Diagnostics> diagnostics;

  bool has_eval_L() const { return static_cast<bool>(eval_L); }

  Eigen::VectorXd grad_x_full(const BlockVector& x,
                              const Eigen::VectorXd& y) const {
    Eigen::VectorXd g(BlockVector::zero(dims_x).total_dim());
    Eigen::Index at = 0;
    for (int i = 0; i < num_blocks; ++i) {
      Eigen::VectorXd gi = grad_x_block(x, y, i);
      g.segment(at, gi.size()) = gi;
      at += gi.size();
    }
    return g;
  }

  bool x_feasible(const BlockVector& x, double tol = 1e-9) const {
    for (int i = 0; i < num_blocks; ++i)
      if (!prox_feasible(prox_g[i], x.block(i), tol)) return false;
    return true;
  }
};

// Prox-gradient residual at (x, y):
//   Gx_i = (x_i - prox_{eta_x g_i}(x_i - eta_x dx_i)) / eta_x
//   Gy   = (prox_{eta_y h}(y + eta_y dy) - y) / eta_y
// where (dx, dy) are either the exact partial gradients or batch-averaged
// stochastic estimates.
struct GradientMapEval {
  BlockVector Gx;
  Eigen::VectorXd Gy;
  double norm_sq = 0.0;
  bool stochastic = false;

  double recompute_norm_sq() const {
    return sgdab::norm_sq(Gx) + Gy.squaredNorm();
  }
};

// Map built from caller-supplied gradient estimates; shared by the exact and
// stochastic paths so that the two agree bitwise when the estimates do.
GradientMapEval gradient_map_from_estimates(
    const MinimaxProblem& problem, const BlockVector& x,
    const Eigen::VectorXd& y, double eta_x, double eta_y,
    const std::vector<Eigen::VectorXd>& grad_x_blocks,
    const Eigen::VectorXd& grad_y, bool stochastic);

// Exact-gradient map; reporting and certification only, never inside solver
// decision paths.
GradientMapEval deterministic_gradient_map(const MinimaxProblem& problem,
                                           const BlockVector& x,
                                           const Eigen::VectorXd& y,
                                           double eta_x, double eta_y);

}  // namespace sgdab
