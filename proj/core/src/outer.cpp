#include "sgdab/outer.hpp"

#include <cassert>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "sgdab/dual_ascent.hpp"

namespace sgdab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::uint64_t kStreamInit = 0x11;
constexpr std::uint64_t kStreamEllBase = 0x10000;

struct StepPlan {
  double eta_y = 0.0;
  double eta_x = 0.0;
  std::int64_t K = 0;
  int batch_x = 1;
  int batch_y = 1;
  double eps_ell = 0.0;
};

double ceil_to_count(double v, const char* what) {
  if (!(v >= 0.0) || v > 9.0e15)
    throw BudgetError(std::string(what) + ": computed count out of range");
  return std::ceil(v);
}

double noise_factor(double mu_eta, InnerKind inner) {
  if (inner == InnerKind::GaussSeidel) return 1.0 + 12.0 / mu_eta;
  return 1.0 + (6.0 / mu_eta) * (2.0 - mu_eta) / (1.0 - mu_eta);
}

StepPlan plan_iteration(const MinimaxProblem& problem, const OracleSpec& spec,
                        const SgdabConfig& config, double L_tilde, double L0,
                        InnerKind inner, double rho) {
  StepPlan plan;
  plan.eta_y = 1.0 / L_tilde;
  double mu = problem.mu;
  plan.eta_x = problem.num_blocks * rho * mu * mu * plan.eta_y * plan.eta_y *
               plan.eta_y;
  double mu_eta = mu * plan.eta_y;
  // L_tilde starts at mu/gamma, so mu*eta_y = gamma^ell < 1 throughout.
  assert(mu_eta < 1.0);

  double sx2 = effective_sigma_x_sq(spec, problem);
  double sy2 = effective_sigma_y_sq(spec, problem);
  double eps = config.epsilon;
  double gap = L0 - problem.F_bar + (12.0 * rho + 1.0) * config.epsilon_tilde;

  if (config.budgeted) {
    plan.K = config.K_fixed;
    plan.batch_x = config.M_fixed;
    plan.batch_y = config.M_fixed;
    double m = static_cast<double>(config.M_fixed);
    double term = problem.num_blocks * gap /
                      (plan.eta_x * static_cast<double>(plan.K)) +
                  sx2 / m + noise_factor(mu_eta, inner) * sy2 / m;
    plan.eps_ell = 4.0 * std::sqrt(2.0) * std::sqrt(term);
  } else {
    plan.K = static_cast<std::int64_t>(ceil_to_count(
        64.0 * problem.num_blocks * gap / (eps * eps * plan.eta_x), "K"));
    plan.K = std::max<std::int64_t>(plan.K, 1);
    plan.batch_x = static_cast<int>(
        ceil_to_count(128.0 * sx2 / (eps * eps) + 1.0, "M_x"));
    plan.batch_y = static_cast<int>(ceil_to_count(
        noise_factor(mu_eta, inner) * 128.0 * sy2 / (eps * eps) + 1.0, "M_y"));
    plan.eps_ell = eps;
  }
  return plan;
}

void validate_config(const MinimaxProblem& problem, const SgdabConfig& config) {
  if (!(problem.mu > 0.0))
    throw std::invalid_argument("sgdab: requires mu > 0 (wrap WCMC problems first)");
  if (!(config.epsilon > 0.0))
    throw std::invalid_argument("sgdab: epsilon must be positive");
  if (!(config.epsilon_tilde > 0.0))
    throw std::invalid_argument("sgdab: epsilon_tilde must be positive");
  if (!(config.gamma > 0.0) || !(config.gamma < 1.0))
    throw std::invalid_argument("sgdab: gamma must lie in (0,1)");
  if (config.p < 0.0 || config.p >= 1.0)
    throw std::invalid_argument("sgdab: p must lie in [0,1)");
  if (config.max_backtracks < 1)
    throw std::invalid_argument("sgdab: max_backtracks must be >= 1");
  if (config.budgeted && (config.K_fixed < 1 || config.M_fixed < 1))
    throw std::invalid_argument("sgdab: budgeted variant needs K and M");
  if (config.x0.num_blocks() != problem.num_blocks)
    throw std::invalid_argument("sgdab: x0 block count mismatch");
  if (!problem.x_feasible(config.x0))
    throw std::invalid_argument("sgdab: infeasible x0");
}

struct RunOutput {
  InnerResult inner;
  std::uint64_t calls_x = 0;
  std::uint64_t calls_y = 0;
};

RunOutput execute_run(const MinimaxProblem& problem, const OracleSpec& spec,
                      const InnerParams& params, InnerKind inner,
                      const BlockVector& x0, const Eigen::VectorXd& y0,
                      RngStream run_stream) {
  OracleHandle handle(problem, spec, run_stream.substream(0));
  RunOutput out;
  if (inner == InnerKind::Jacobi) {
    out.inner = rb_sgda(problem, handle, params, x0, y0, run_stream.substream(1));
  } else {
    out.inner = rb_sagda(problem, handle, params, x0, y0, run_stream.substream(1));
  }
  out.calls_x = handle.calls_x();
  out.calls_y = handle.calls_y();
  return out;
}

}  // namespace

double rho_of(int N) {
  if (N < 1) throw std::invalid_argument("rho_of: N must be >= 1");
  double n = static_cast<double>(N);
  return (std::sqrt(1.0 + 12.0 / n) - 1.0) / 24.0;
}

Eigen::VectorXd init_y0(const MinimaxProblem& problem, OracleHandle& oracle,
                        const BlockVector& x0, double epsilon_tilde,
                        RngStream rng) {
  if (!(problem.mu > 0.0))
    throw std::invalid_argument("init_y0: requires mu > 0");
  if (!(epsilon_tilde > 0.0))
    throw std::invalid_argument("init_y0: epsilon_tilde must be positive");

  Eigen::VectorXd y_start =
      prox_eval(problem.prox_h, 1.0, Eigen::VectorXd::Zero(problem.dim_y));

  if (oracle.spec().exact()) {
    auto grad = [&](const Eigen::VectorXd& y) {
      return oracle.sample_grad_y(x0, y, 1);
    };
    std::function<double(const Eigen::VectorXd&)> value;
    if (problem.has_eval_L()) {
      value = [&](const Eigen::VectorXd& y) { return problem.eval_L(x0, y); };
    }
    DualAscentResult res =
        maximize_strongly_concave(problem.prox_h, grad, value, y_start,
                                  problem.mu, epsilon_tilde, 10000000);
    return res.y;
  }

  double sy2 = effective_sigma_y_sq(oracle.spec(), problem);
  double iters_d =
      std::ceil(8.0 * sy2 / (problem.mu * epsilon_tilde));
  if (iters_d > 5.0e8)
    throw BudgetError("init_y0: stochastic initializer would need " +
                      std::to_string(iters_d) + " oracle calls");
  std::int64_t iters = std::max<std::int64_t>(1, static_cast<std::int64_t>(iters_d));
  Eigen::VectorXd y = y_start;
  (void)rng;
  for (std::int64_t k = 0; k < iters; ++k) {
    double step = 1.0 / (problem.mu * static_cast<double>(k + 2));
    Eigen::VectorXd s = oracle.sample_grad_y(x0, y, 1);
    y = prox_eval(problem.prox_h, step, y + step * s);
  }
  return y;
}

double budgeted_epsilon(const MinimaxProblem& problem, const OracleSpec& spec,
                        const SgdabConfig& config, double L0, int ell,
                        InnerKind inner) {
  double rho = rho_of(problem.num_blocks);
  double L_tilde = problem.mu / std::pow(config.gamma, ell);
  StepPlan plan =
      plan_iteration(problem, spec, config, L_tilde, L0, inner, rho);
  return plan.eps_ell;
}

namespace {

RunResult sgdab_impl(const MinimaxProblem& problem, const OracleSpec& spec,
                     const SgdabConfig& config, RngStream root) {
  validate_config(problem, config);
  auto t_begin = std::chrono::steady_clock::now();

  const int N = problem.num_blocks;
  const double rho = rho_of(N);
  const bool exact = spec.exact();
  const int T = (exact || config.p == 0.0)
                    ? 1
                    : static_cast<int>(std::ceil(std::log2(1.0 / config.p)));

  BacktrackTrace trace;
  trace.rho = rho;
  trace.T = T;

  OracleHandle init_handle(problem, spec, root.substream(kStreamInit));
  Eigen::VectorXd y0 = init_y0(problem, init_handle, config.x0,
                               config.epsilon_tilde, root.substream(kStreamInit + 1));
  trace.init_calls_y = static_cast<std::int64_t>(init_handle.calls_y());
  std::uint64_t calls_x_total = init_handle.calls_x();
  std::uint64_t calls_y_total = init_handle.calls_y();

  double L0;
  if (problem.has_eval_L()) {
    L0 = problem.eval_L(config.x0, y0);
  } else if (config.L0_value) {
    L0 = *config.L0_value;
  } else {
    throw std::invalid_argument(
        "sgdab: problem has no eval_L; supply config.L0_value");
  }

  RunResult result;
  result.trace = trace;
  MetricTrace metrics;

  double L_tilde = problem.mu / config.gamma;
  for (int ell = 1; ell <= config.max_backtracks; ++ell) {
    StepPlan plan = plan_iteration(problem, spec, config, L_tilde, L0,
                                   config.inner, rho);
    double threshold = plan.eps_ell * plan.eps_ell / 4.0;

    std::int64_t K_run = plan.K;
    if (exact) {
      // Early-exit path; the cap only guards stable-but-slow candidates.
      K_run = std::min<std::int64_t>(K_run, config.inner_iteration_cap);
    } else {
      double planned = static_cast<double>(plan.K) * T *
                       (static_cast<double>(plan.batch_x) + plan.batch_y);
      if (planned > config.oracle_budget)
        throw BudgetError("sgdab: iteration " + std::to_string(ell) +
                          " plans " + std::to_string(planned) +
                          " oracle calls, over budget");
      if (plan.K > config.inner_iteration_cap)
        throw BudgetError("sgdab: K exceeds inner iteration cap");
    }

    InnerParams params;
    params.eta_x = plan.eta_x;
    params.eta_y = plan.eta_y;
    params.batch_x = plan.batch_x;
    params.batch_y = plan.batch_y;
    params.iters = K_run;
    params.record_trace = config.record_trace;
    params.trace_stride = config.trace_stride;
    params.n1_argmin_variant = config.n1_argmin_variant && N == 1;
    params.early_stop_norm_sq = (exact && N == 1) ? threshold : 0.0;

    RngStream ell_stream = root.substream(kStreamEllBase + ell);
    const std::uint64_t before_x = calls_x_total;
    const std::uint64_t before_y = calls_y_total;
    std::vector<RunOutput> outs(T);
    if (config.parallel_runs && T > 1) {
      std::vector<std::future<RunOutput>> futs;
      futs.reserve(T);
      for (int t = 0; t < T; ++t) {
        futs.push_back(std::async(std::launch::async, [&, t]() {
          return execute_run(problem, spec, params, config.inner, config.x0,
                             y0, ell_stream.substream(t));
        }));
      }
      for (int t = 0; t < T; ++t) outs[t] = futs[t].get();
    } else {
      for (int t = 0; t < T; ++t)
        outs[t] = execute_run(problem, spec, params, config.inner, config.x0,
                              y0, ell_stream.substream(t));
    }

    BacktrackRecord rec;
    rec.ell = ell;
    rec.L_tilde = L_tilde;
    rec.eta_y = plan.eta_y;
    rec.eta_x = plan.eta_x;
    rec.K = plan.K;
    rec.batch_x = plan.batch_x;
    rec.batch_y = plan.batch_y;
    rec.eps_ell = plan.eps_ell;
    int t_star = 0;
    for (int t = 0; t < T; ++t) {
      const InnerResult& ir = outs[t].inner;
      rec.S_values.push_back(ir.S_tilde);
      rec.iters_run.push_back(ir.iters_run);
      rec.diverged.push_back(ir.diverged);
      calls_x_total += outs[t].calls_x;
      calls_y_total += outs[t].calls_y;
      if (ir.S_tilde < rec.S_values[t_star]) t_star = t;
    }
    rec.t_star = t_star;
    rec.S_min = rec.S_values[t_star];
    rec.accepted = rec.S_min <= threshold;
    rec.calls_x_cum = calls_x_total;
    rec.calls_y_cum = calls_y_total;
    result.trace.records.push_back(rec);

    // Selected run's trajectory, x-axis in cumulative oracle calls under
    // lockstep execution of the T runs.
    if (config.record_trace) {
      // x-axis: total calls under lockstep execution of the T runs; clamped
      // to the exact totals when siblings stopped early.
      double base = static_cast<double>(before_x) + static_cast<double>(before_y);
      double cap_calls = static_cast<double>(rec.calls_x_cum) +
                         static_cast<double>(rec.calls_y_cum);
      double prev_total = metrics.rows.empty() ? base
                                               : metrics.rows.back().oracle_calls;
      for (const InnerTraceRow& row : outs[t_star].inner.trace) {
        MetricRow m;
        m.iteration = row.iteration;
        double calls = base + (static_cast<double>(row.calls_x) +
                               static_cast<double>(row.calls_y)) *
                                  T;
        calls = std::min(calls, cap_calls);
        calls = std::max(calls, prev_total);
        prev_total = calls;
        m.oracle_calls = calls;
        m.grad_norm_sq = row.grad_norm_sq;
        m.map_norm = std::sqrt(row.map_norm_sq);
        if (row.has_primal) m.primal_value = row.primal_value;
        if (row.has_train_error) m.train_error = row.train_error;
        metrics.rows.push_back(m);
      }
    }

    if (rec.accepted) {
      const InnerResult& sel = outs[t_star].inner;
      result.x = sel.x;
      result.y = sel.y;
      result.G_tilde_norm = std::sqrt(sel.map.norm_sq);
      result.certified = true;
      result.achieved_epsilon = plan.eps_ell;
      result.final_eta_x = plan.eta_x;
      result.final_eta_y = plan.eta_y;
      result.calls_x = calls_x_total;
      result.calls_y = calls_y_total;
      result.metrics = std::move(metrics);
      result.wall_ms =
          std::chrono::duration<double, std::milli>(
              std::chrono::steady_clock::now() - t_begin)
              .count();
      // The certificate that the stop test just granted.
      assert(!result.certified ||
             result.G_tilde_norm <= plan.eps_ell / 2.0 + 1e-12);
      return result;
    }
    L_tilde /= config.gamma;
  }

  throw BacktrackCapError(
      "sgdab: no certificate within " + std::to_string(config.max_backtracks) +
          " backtracking iterations",
      result.trace);
}

}  // namespace

RunResult sgdab(const MinimaxProblem& problem, const OracleSpec& spec,
                const SgdabConfig& config, RngStream root) {
  return sgdab_impl(problem, spec, config, root);
}

RunResult sgdab_budgeted(const MinimaxProblem& problem, const OracleSpec& spec,
                         const SgdabConfig& config, RngStream root) {
  SgdabConfig c = config;
  c.budgeted = true;
  return sgdab_impl(problem, spec, c, root);
}

MinimaxProblem wcmc_wrap(const MinimaxProblem& problem, double mu_hat,
                         const Eigen::VectorXd& y_anchor) {
  MinimaxProblem wrapped = problem;
  auto base_grad_y = problem.grad_y;
  Eigen::VectorXd anchor = y_anchor;
  wrapped.grad_y = [base_grad_y, mu_hat, anchor](
                       const BlockVector& x,
                       const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return base_grad_y(x, y) - mu_hat * (y - anchor);
  };
  if (problem.stoch_grad_y) {
    auto base_stoch = problem.stoch_grad_y;
    wrapped.stoch_grad_y =
        [base_stoch, mu_hat, anchor](const BlockVector& x,
                                     const Eigen::VectorXd& y, int batch,
                                     RngStream& rng) -> Eigen::VectorXd {
      return base_stoch(x, y, batch, rng) - mu_hat * (y - anchor);
    };
  }
  if (problem.has_eval_L()) {
    auto base_eval = problem.eval_L;
    wrapped.eval_L = [base_eval, mu_hat, anchor](
                         const BlockVector& x,
                         const Eigen::VectorXd& y) -> double {
      return base_eval(x, y) - 0.5 * mu_hat * (y - anchor).squaredNorm();
    };
  }
  wrapped.mu = mu_hat;
  if (problem.diagnostics) {
    Diagnostics d;
    d.L_true = problem.diagnostics->L_true + mu_hat;
    d.kappa_true = d.L_true / mu_hat;
    wrapped.diagnostics = d;
  }
  return wrapped;
}

RunResult wcmc_solve(const MinimaxProblem& problem, double D_y,
                     const Eigen::VectorXd& y_anchor, const OracleSpec& spec,
                     const SgdabConfig& config, RngStream root) {
  if (problem.mu != 0.0)
    throw std::invalid_argument("wcmc_solve: requires mu == 0");
  if (!(D_y > 0.0))
    throw std::invalid_argument("wcmc_solve: D_y must be positive");
  if (!prox_feasible(problem.prox_h, y_anchor))
    throw std::invalid_argument("wcmc_solve: infeasible anchor");

  double mu_hat = config.epsilon / (2.0 * D_y);
  MinimaxProblem wrapped = wcmc_wrap(problem, mu_hat, y_anchor);
  RunResult res = sgdab(wrapped, spec, config, root);
  res.wcmc_gap_bound = mu_hat * D_y;
  return res;
}

M4Certificate m4_certificate(const MinimaxProblem& problem,
                             const BlockVector& x, const Eigen::VectorXd& y,
                             double eta_x, double eta_y) {
  GradientMapEval map = deterministic_gradient_map(problem, x, y, eta_x, eta_y);
  M4Certificate cert;
  cert.x_hat = axpy_block(-eta_x, map.Gx, x);  // x - eta_x * Gx
  cert.y_hat = y + eta_y * map.Gy;

  double u_sq = 0.0;
  for (int i = 0; i < problem.num_blocks; ++i) {
    Eigen::VectorXd u = map.Gx.block(i) +
                        problem.grad_x_block(cert.x_hat, cert.y_hat, i) -
                        problem.grad_x_block(x, y, i);
    u_sq += u.squaredNorm();
  }
  cert.u_norm = std::sqrt(u_sq);
  Eigen::VectorXd v = map.Gy + problem.grad_y(cert.x_hat, cert.y_hat) -
                      problem.grad_y(x, y);
  cert.v_norm = v.norm();
  return cert;
}

}  // namespace sgdab
