#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sgdab/oracle.hpp"
#include "sgdab/problem.hpp"
#include "sgdab/rng.hpp"

namespace sgdab {

struct InnerParams {
  double eta_x = 0.0;
  double eta_y = 0.0;
  int batch_x = 1;
  int batch_y = 1;
  std::int64_t iters = 1;  // K

  bool record_trace = false;
  std::int64_t trace_stride = 0;  // 0 means max(1, K/1000)

  // N = 1 only: select the argmin iterate and report the trajectory-average
  // S instead of a uniformly sampled iterate.
  bool n1_argmin_variant = false;

  // Exact-oracle fast path: stop as soon as the per-iterate map norm^2 falls
  // to this threshold (0 disables).  Only meaningful when the oracle is
  // exact, where the stochastic map equals the deterministic one.
  double early_stop_norm_sq = 0.0;

  double divergence_bound = 1e12;  // on iterate norms
};

struct InnerTraceRow {
  std::int64_t iteration = 0;
  std::uint64_t calls_x = 0;  // handle counters at this row
  std::uint64_t calls_y = 0;
  double grad_norm_sq = 0.0;      // |grad L|^2, exact
  double map_norm_sq = 0.0;       // |G|^2, exact map
  double primal_value = 0.0;      // F(x) via diagnostics
  bool has_primal = false;
  double train_error = 0.0;
  bool has_train_error = false;
};

struct InnerResult {
  BlockVector x;
  Eigen::VectorXd y;
  GradientMapEval map;    // stochastic gradient map at the selected iterate
  double S_tilde = 0.0;   // selection statistic, see selection rules
  std::int64_t k_selected = -1;
  std::int64_t iters_run = 0;
  bool diverged = false;
  std::int64_t diverged_at = -1;
  bool early_stopped = false;
  std::vector<InnerTraceRow> trace;
};

// Randomized block stochastic GDA with Jacobi updates: the dual step uses the
// pre-update primal iterate.  Returns a uniformly sampled iterate with its
// stochastic gradient map evaluated on the same draws the update consumed;
// with n1_argmin_variant, returns the argmin iterate and the trajectory
// average of |G|^2.
InnerResult rb_sgda(const MinimaxProblem& problem, OracleHandle& oracle,
                    const InnerParams& params, const BlockVector& x0,
                    const Eigen::VectorXd& y0, RngStream rng);

// Gauss-Seidel variant: the dual step uses the post-update primal iterate,
// and the reported dual map at the selected iterate uses an independent
// fresh draw at that iterate.
InnerResult rb_sagda(const MinimaxProblem& problem, OracleHandle& oracle,
                     const InnerParams& params, const BlockVector& x0,
                     const Eigen::VectorXd& y0, RngStream rng);

}  // namespace sgdab
