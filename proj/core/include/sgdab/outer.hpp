#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "sgdab/block_vector.hpp"
#include "sgdab/errors.hpp"
#include "sgdab/inner.hpp"
#include "sgdab/metrics.hpp"
#include "sgdab/oracle.hpp"
#include "sgdab/problem.hpp"

namespace sgdab {

// Backtracking ratio rho(N) = (sqrt(1 + 12/N) - 1)/24; satisfies
// N rho + 12 N rho^2 = 1/4 exactly.
double rho_of(int N);

enum class InnerKind { Jacobi, GaussSeidel };

struct SgdabConfig {
  double epsilon = 1e-2;        // target tolerance
  double epsilon_tilde = 1e-4;  // y0 precision
  double p = 0.0;               // failure probability; 0 means T = 1
  double gamma = 0.9;           // backtracking factor
  BlockVector x0;
  int max_backtracks = 200;
  InnerKind inner = InnerKind::Jacobi;
  bool n1_argmin_variant = false;

  // Budgeted variant: fixed K and M for every backtracking iteration, with a
  // per-iteration tolerance schedule instead of the fixed epsilon.
  bool budgeted = false;
  std::int64_t K_fixed = 0;
  int M_fixed = 0;

  double oracle_budget = 1e15;  // fail fast if one iteration plans more calls
  std::int64_t inner_iteration_cap = 2000000000;
  bool parallel_runs = true;
  bool record_trace = true;
  std::int64_t trace_stride = 0;
  // L(x0, y0) when the problem has no eval_L; must be an upper bound.
  std::optional<double> L0_value;
};

struct BacktrackRecord {
  int ell = 0;
  double L_tilde = 0.0;
  double eta_y = 0.0;
  double eta_x = 0.0;
  std::int64_t K = 0;
  int batch_x = 1;
  int batch_y = 1;
  double eps_ell = 0.0;  // tolerance tested this iteration
  std::vector<double> S_values;
  std::vector<std::int64_t> iters_run;
  std::vector<bool> diverged;
  double S_min = 0.0;
  int t_star = -1;
  bool accepted = false;
  std::uint64_t calls_x_cum = 0;  // totals after this iteration (incl. init)
  std::uint64_t calls_y_cum = 0;
};

struct BacktrackTrace {
  double rho = 0.0;
  int T = 1;
  std::vector<BacktrackRecord> records;
  std::int64_t init_calls_y = 0;
};

struct RunResult {
  BlockVector x;
  Eigen::VectorXd y;
  double G_tilde_norm = 0.0;
  bool certified = false;
  double achieved_epsilon = 0.0;  // epsilon, or eps_ell in the budgeted variant
  BacktrackTrace trace;
  std::uint64_t calls_x = 0;
  std::uint64_t calls_y = 0;
  double wall_ms = 0.0;
  double wcmc_gap_bound = 0.0;  // mu_hat * D_y when run through wcmc_solve
  double final_eta_x = 0.0;
  double final_eta_y = 0.0;
  MetricTrace metrics;  // selected-run trajectories, cumulative-call x-axis
};

// Cap exceeded without certification; carries the trace for post-mortems.
class BacktrackCapError : public BudgetError {
 public:
  BacktrackCapError(const std::string& what, BacktrackTrace trace)
      : BudgetError(what), trace_(std::move(trace)) {}
  const BacktrackTrace& trace() const { return trace_; }

 private:
  BacktrackTrace trace_;
};

// Computes y0 with expected dual suboptimality at most epsilon_tilde.
// Exact oracle: proximal gradient ascent with backtracking, stopping when
// |G_y|^2 <= 2 mu epsilon_tilde.  Stochastic oracle: proximal stochastic
// ascent with step 1/(mu (k+2)), batch 1, for ceil(8 sigma_y^2 / (mu
// epsilon_tilde)) iterations.  Oracle calls are counted on the handle.
Eigen::VectorXd init_y0(const MinimaxProblem& problem, OracleHandle& oracle,
                        const BlockVector& x0, double epsilon_tilde,
                        RngStream rng);

// The backtracking driver.  Probes L_tilde = mu/gamma, mu/gamma^2, ... and
// runs T independent inner solves per candidate until the smallest sampled
// map norm passes the stop test.  Exact-oracle runs use per-iterate
// certificate checks with early exit; divergence of an inner run rejects the
// candidate step.
RunResult sgdab(const MinimaxProblem& problem, const OracleSpec& spec,
                const SgdabConfig& config, RngStream root);

// Budgeted practical variant (fixed K and M); equivalent to setting
// config.budgeted and provided for symmetry.
RunResult sgdab_budgeted(const MinimaxProblem& problem, const OracleSpec& spec,
                         const SgdabConfig& config, RngStream root);

// Tolerance schedule of the budgeted variant at backtracking iteration ell.
double budgeted_epsilon(const MinimaxProblem& problem, const OracleSpec& spec,
                        const SgdabConfig& config, double L0, int ell,
                        InnerKind inner);

// Merely-concave reduction: wraps the problem with an anchored quadratic of
// weight mu_hat = epsilon / (2 D_y) and solves the strongly concave
// surrogate.  The certified surrogate map differs from the true map by at
// most mu_hat * D_y = epsilon/2, recorded in the result.
RunResult wcmc_solve(const MinimaxProblem& problem, double D_y,
                     const Eigen::VectorXd& y_anchor, const OracleSpec& spec,
                     const SgdabConfig& config, RngStream root);

// Builds the anchored strongly concave surrogate itself (exposed for tests).
MinimaxProblem wcmc_wrap(const MinimaxProblem& problem, double mu_hat,
                         const Eigen::VectorXd& y_anchor);

struct M4Certificate {
  double u_norm = 0.0;
  double v_norm = 0.0;
  BlockVector x_hat;
  Eigen::VectorXd y_hat;
};

// Converts a small gradient map at (x, y) into explicit first-order
// residuals at the prox-stepped point (x_hat, y_hat):
//   u = G_x(x,y) + grad_x f(x_hat, y_hat) - grad_x f(x, y)
// is an element of grad_x f(x_hat, y_hat) + subdiff g(x_hat), and v is the
// dual analogue.
M4Certificate m4_certificate(const MinimaxProblem& problem,
                             const BlockVector& x, const Eigen::VectorXd& y,
                             double eta_x, double eta_y);

}  // namespace sgdab
