#include "sgdab/baselines.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace sgdab {

namespace {

bool iterate_bad(const BlockVector& x, const Eigen::VectorXd& y,
                 double bound) {
  double b2 = bound * bound;
  if (!y.allFinite() || y.squaredNorm() > b2) return true;
  for (int i = 0; i < x.num_blocks(); ++i)
    if (!x.block(i).allFinite() || x.block(i).squaredNorm() > b2) return true;
  return false;
}

void record_row(const MinimaxProblem& problem, const OracleHandle& oracle,
                std::int64_t k, double eta_x, double eta_y,
                const BlockVector& x, const Eigen::VectorXd& y,
                MetricTrace& trace) {
  MetricRow row;
  row.iteration = k;
  row.oracle_calls =
      static_cast<double>(oracle.calls_x() + oracle.calls_y());
  Eigen::VectorXd gx = problem.grad_x_full(x, y);
  Eigen::VectorXd gy = problem.grad_y(x, y);
  row.grad_norm_sq = gx.squaredNorm() + gy.squaredNorm();
  row.map_norm = std::sqrt(
      deterministic_gradient_map(problem, x, y, eta_x, eta_y).norm_sq);
  if (problem.diagnostics && problem.diagnostics->primal_value)
    row.primal_value = problem.diagnostics->primal_value(x);
  if (problem.diagnostics && problem.diagnostics->train_error)
    row.train_error = problem.diagnostics->train_error(x);
  trace.rows.push_back(row);
}

BaselineResult run_two_timescale(const MinimaxProblem& problem,
                                 const OracleSpec& spec,
                                 const BaselineConfig& config,
                                 const BlockVector& x0,
                                 const Eigen::VectorXd& y0, RngStream rng,
                                 bool alternating) {
  if (!(config.L_input > 0.0))
    throw std::invalid_argument("baseline: L_input must be positive");
  if (!(config.kappa_input >= 1.0))
    throw std::invalid_argument("baseline: kappa_input must be >= 1");
  if (!problem.x_feasible(x0) || !prox_feasible(problem.prox_h, y0))
    throw std::invalid_argument("baseline: infeasible start");

  const double tau =
      1.0 / (config.kappa_input * config.kappa_input * config.L_input);
  const double sigma = 1.0 / config.L_input;
  const std::int64_t stride = config.trace_stride > 0
                                  ? config.trace_stride
                                  : std::max<std::int64_t>(1, config.iters / 1000);

  OracleHandle oracle(problem, spec, rng.substream(0));
  BaselineResult res;
  BlockVector x = x0;
  Eigen::VectorXd y = y0;

  for (std::int64_t k = 0; k < config.iters; ++k) {
    if (k % stride == 0)
      record_row(problem, oracle, k, tau, sigma, x, y, res.metrics);

    BlockVector x_next = x;
    for (int i = 0; i < problem.num_blocks; ++i) {
      Eigen::VectorXd sx = oracle.sample_grad_x_block(x, y, i, config.batch);
      x_next.block(i) =
          prox_eval(problem.prox_g[i], tau, x.block(i) - tau * sx);
    }
    const BlockVector& x_for_dual = alternating ? x_next : x;
    Eigen::VectorXd sy = oracle.sample_grad_y(x_for_dual, y, config.batch);
    y = prox_eval(problem.prox_h, sigma, y + sigma * sy);
    x = std::move(x_next);

    if (iterate_bad(x, y, config.divergence_bound)) {
      res.diverged = true;
      res.diverged_at = k;
      break;
    }
  }
  res.x = x;
  res.y = y;
  res.calls_x = oracle.calls_x();
  res.calls_y = oracle.calls_y();
  res.final_tau = tau;
  res.final_sigma = sigma;
  return res;
}

}  // namespace

BaselineResult run_gda(const MinimaxProblem& problem, const OracleSpec& spec,
                       const BaselineConfig& config, const BlockVector& x0,
                       const Eigen::VectorXd& y0, RngStream rng) {
  return run_two_timescale(problem, spec, config, x0, y0, rng,
                           /*alternating=*/false);
}

BaselineResult run_agda(const MinimaxProblem& problem, const OracleSpec& spec,
                        const BaselineConfig& config, const BlockVector& x0,
                        const Eigen::VectorXd& y0, RngStream rng) {
  return run_two_timescale(problem, spec, config, x0, y0, rng,
                           /*alternating=*/true);
}

BaselineResult run_tiada(const MinimaxProblem& problem, const OracleSpec& spec,
                         const BaselineConfig& config, const BlockVector& x0,
                         const Eigen::VectorXd& y0, RngStream rng) {
  if (!(config.tiada_alpha > config.tiada_beta))
    throw std::invalid_argument("tiada: requires alpha > beta");
  if (!problem.x_feasible(x0) || !prox_feasible(problem.prox_h, y0))
    throw std::invalid_argument("tiada: infeasible start");

  const std::int64_t stride = config.trace_stride > 0
                                  ? config.trace_stride
                                  : std::max<std::int64_t>(1, config.iters / 1000);

  OracleHandle oracle(problem, spec, rng.substream(0));
  BaselineResult res;
  BlockVector x = x0;
  Eigen::VectorXd y = y0;
  double vx = config.tiada_v0x;
  double vy = config.tiada_v0y;
  // The dual map feeding v^y is evaluated with the step in force before the
  // update, resolving the accumulator/step circularity.
  double sigma_prev = config.tiada_sigma0 / std::pow(vy, config.tiada_beta);
  double tau = 0.0, sigma = 0.0;

  for (std::int64_t k = 0; k < config.iters; ++k) {
    if (k % stride == 0)
      record_row(problem, oracle, k,
                 tau > 0 ? tau : config.tiada_tau0,
                 sigma > 0 ? sigma : sigma_prev, x, y, res.metrics);

    Eigen::VectorXd sx(BlockVector::zero(problem.dims_x).total_dim());
    Eigen::Index at = 0;
    std::vector<Eigen::VectorXd> sx_blocks(problem.num_blocks);
    for (int i = 0; i < problem.num_blocks; ++i) {
      sx_blocks[i] = oracle.sample_grad_x_block(x, y, i, config.batch);
      sx.segment(at, sx_blocks[i].size()) = sx_blocks[i];
      at += sx_blocks[i].size();
    }
    Eigen::VectorXd sy = oracle.sample_grad_y(x, y, config.batch);

    Eigen::VectorXd gy_map =
        (prox_eval(problem.prox_h, sigma_prev, y + sigma_prev * sy) - y) /
        sigma_prev;

    double vx_next = vx + sx.squaredNorm();
    double vy_next = vy + gy_map.squaredNorm();
    assert(vx_next >= vx && vy_next >= vy);
    vx = vx_next;
    vy = vy_next;

    sigma = config.tiada_sigma0 / std::pow(vy, config.tiada_beta);
    tau = config.tiada_tau0 / std::pow(std::max(vx, vy), config.tiada_alpha);

    for (int i = 0; i < problem.num_blocks; ++i)
      x.block(i) =
          prox_eval(problem.prox_g[i], tau, x.block(i) - tau * sx_blocks[i]);
    y = prox_eval(problem.prox_h, sigma, y + sigma * sy);
    sigma_prev = sigma;

    if (iterate_bad(x, y, config.divergence_bound)) {
      res.diverged = true;
      res.diverged_at = k;
      break;
    }
  }
  res.x = x;
  res.y = y;
  res.calls_x = oracle.calls_x();
  res.calls_y = oracle.calls_y();
  res.final_tau = tau;
  res.final_sigma = sigma;
  return res;
}

}  // namespace sgdab
