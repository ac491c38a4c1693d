#include "sgdab/inner.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sgdab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const MinimaxProblem& problem, const InnerParams& params,
              const BlockVector& x0, const Eigen::VectorXd& y0) {
  if (!(params.eta_x > 0.0) || !(params.eta_y > 0.0))
    throw std::invalid_argument("inner: steps must be positive");
  if (params.iters < 1) throw std::invalid_argument("inner: K must be >= 1");
  if (params.batch_x < 1 || params.batch_y < 1)
    throw std::invalid_argument("inner: batch sizes must be >= 1");
  if (params.n1_argmin_variant && problem.num_blocks != 1)
    throw std::invalid_argument("inner: argmin variant requires N == 1");
  if (!problem.x_feasible(x0))
    throw std::invalid_argument("inner: infeasible primal start");
  if (!prox_feasible(problem.prox_h, y0))
    throw std::invalid_argument("inner: infeasible dual start");
}

bool iterate_bad(const BlockVector& x, const Eigen::VectorXd& y,
                 double bound) {
  double b2 = bound * bound;
  if (!y.allFinite() || y.squaredNorm() > b2) return true;
  for (int i = 0; i < x.num_blocks(); ++i)
    if (!x.block(i).allFinite() || x.block(i).squaredNorm() > b2) return true;
  return false;
}

void maybe_record(const MinimaxProblem& problem, const InnerParams& params,
                  OracleHandle& oracle, std::int64_t k, std::int64_t stride,
                  const BlockVector& x, const Eigen::VectorXd& y,
                  std::vector<InnerTraceRow>& trace) {
  if (!params.record_trace || (k % stride) != 0) return;
  InnerTraceRow row;
  row.iteration = k;
  row.calls_x = oracle.calls_x();
  row.calls_y = oracle.calls_y();
  Eigen::VectorXd gx = problem.grad_x_full(x, y);
  Eigen::VectorXd gy = problem.grad_y(x, y);
  row.grad_norm_sq = gx.squaredNorm() + gy.squaredNorm();
  row.map_norm_sq =
      deterministic_gradient_map(problem, x, y, params.eta_x, params.eta_y)
          .norm_sq;
  if (problem.diagnostics && problem.diagnostics->primal_value) {
    row.primal_value = problem.diagnostics->primal_value(x);
    row.has_primal = true;
  }
  if (problem.diagnostics && problem.diagnostics->train_error) {
    row.train_error = problem.diagnostics->train_error(x);
    row.has_train_error = true;
  }
  trace.push_back(row);
}

GradientMapEval assemble_map(const MinimaxProblem& problem, double eta_x,
                             double eta_y, std::vector<Eigen::VectorXd> gx,
                             Eigen::VectorXd gy, bool stochastic) {
  GradientMapEval ev;
  ev.Gx = BlockVector(std::move(gx));
  ev.Gy = std::move(gy);
  ev.norm_sq = ev.recompute_norm_sq();
  ev.stochastic = stochastic;
  (void)problem;
  (void)eta_x;
  (void)eta_y;
  return ev;
}

// Shared Jacobi / Gauss-Seidel sweep.
InnerResult run_inner(const MinimaxProblem& problem, OracleHandle& oracle,
                      const InnerParams& params, const BlockVector& x0,
                      const Eigen::VectorXd& y0, RngStream rng,
                      bool gauss_seidel) {
  validate(problem, params, x0, y0);
  const int N = problem.num_blocks;
  const std::int64_t K = params.iters;
  const double eta_x = params.eta_x;
  const double eta_y = params.eta_y;
  const bool stochastic = !oracle.spec().exact();
  const bool early = params.early_stop_norm_sq > 0.0;
  const bool argmin_mode = params.n1_argmin_variant || (early && N == 1);
  const std::int64_t stride =
      params.trace_stride > 0 ? params.trace_stride : std::max<std::int64_t>(1, K / 1000);

  if (early && N != 1)
    throw std::invalid_argument("inner: early stop requires N == 1");

  RngStream sel_rng = rng.substream(1);
  RngStream block_rng = rng.substream(2);

  // Uniform selection is independent of the trajectory, so the index is
  // drawn up front and the iterate snapshotted in passing.
  std::int64_t k_tilde = -1;
  if (!argmin_mode)
    k_tilde = static_cast<std::int64_t>(
        sel_rng.next_below(static_cast<std::uint64_t>(K)));

  InnerResult res;
  BlockVector x = x0;
  Eigen::VectorXd y = y0;

  // Snapshot state for the selected iterate.
  BlockVector snap_x = x0;
  Eigen::VectorXd snap_y = y0;
  int snap_block = -1;
  Eigen::VectorXd snap_gx_block;  // update-derived x-residual at snap_block
  Eigen::VectorXd snap_gy;        // update-derived y-residual (Jacobi)
  bool have_snap = false;

  // argmin-mode bookkeeping (N == 1).
  double best_norm_sq = kInf;
  double sum_norm_sq = 0.0;

  std::int64_t k = 0;
  for (; k < K; ++k) {
    maybe_record(problem, params, oracle, k, stride, x, y, res.trace);

    int ik = static_cast<int>(block_rng.next_below(static_cast<std::uint64_t>(N)));
    std::uint64_t key = static_cast<std::uint64_t>(k);

    Eigen::VectorXd sx =
        oracle.sample_grad_x_block_at(key, x, y, ik, params.batch_x);
    Eigen::VectorXd x_next_block =
        prox_eval(problem.prox_g[ik], eta_x, x.block(ik) - eta_x * sx);
    Eigen::VectorXd gx_res = (x.block(ik) - x_next_block) / eta_x;

    // Gauss-Seidel reports the dual map at the pre-update point with an
    // independent draw; in argmin/early modes it is needed every iteration.
    Eigen::VectorXd gs_gy_res;
    if (gauss_seidel && argmin_mode) {
      Eigen::VectorXd spsi =
          oracle.sample_grad_y_fresh_at(key, x, y, params.batch_y);
      gs_gy_res =
          (prox_eval(problem.prox_h, eta_y, y + eta_y * spsi) - y) / eta_y;
    }

    BlockVector x_for_dual = x;  // Jacobi: pre-update
    if (gauss_seidel) {
      x_for_dual.block(ik) = x_next_block;
    }
    Eigen::VectorXd sy =
        oracle.sample_grad_y_at(key, x_for_dual, y, params.batch_y);
    Eigen::VectorXd y_next = prox_eval(problem.prox_h, eta_y, y + eta_y * sy);
    Eigen::VectorXd gy_res = (y_next - y) / eta_y;

    if (argmin_mode) {
      // N == 1: the full stochastic map at (x^k, y^k) falls out of the
      // update (Jacobi) or the fresh draw (Gauss-Seidel).
      const Eigen::VectorXd& gy_here = gauss_seidel ? gs_gy_res : gy_res;
      double nsq = gx_res.squaredNorm() + gy_here.squaredNorm();
      sum_norm_sq += nsq;
      if (nsq < best_norm_sq) {
        best_norm_sq = nsq;
        snap_x = x;
        snap_y = y;
        snap_block = ik;
        snap_gx_block = gx_res;
        snap_gy = gy_here;
        res.k_selected = k;
        have_snap = true;
      }
      if (early && nsq <= params.early_stop_norm_sq) {
        res.early_stopped = true;
        ++k;
        break;
      }
    } else if (k == k_tilde) {
      snap_x = x;
      snap_y = y;
      snap_block = ik;
      snap_gx_block = gx_res;
      snap_gy = gy_res;  // replaced by a fresh draw for Gauss-Seidel below
      res.k_selected = k;
      have_snap = true;
    }

    x.block(ik) = x_next_block;
    y = y_next;

    if (iterate_bad(x, y, params.divergence_bound)) {
      res.diverged = true;
      res.diverged_at = k;
      ++k;
      break;
    }
#ifndef NDEBUG
    assert(problem.x_feasible(x, 1e-7));
    assert(prox_feasible(problem.prox_h, y, 1e-7));
#endif
  }
  res.iters_run = k;

  if (res.diverged) {
    res.x = x;
    res.y = y;
    res.S_tilde = kInf;
    res.map.Gx = BlockVector::zero(problem.dims_x);
    res.map.Gy = Eigen::VectorXd::Zero(problem.dim_y);
    res.map.norm_sq = kInf;
    res.map.stochastic = stochastic;
    return res;
  }

  assert(have_snap);
  (void)have_snap;

  // Complete the map at the selected iterate: remaining x-blocks replay the
  // same iteration's draws; the Gauss-Seidel dual part takes one counted
  // fresh draw here (computed once, not per iteration).
  std::vector<Eigen::VectorXd> gx_blocks(N);
  std::uint64_t sel_key = static_cast<std::uint64_t>(res.k_selected);
  for (int i = 0; i < N; ++i) {
    if (i == snap_block) {
      gx_blocks[i] = snap_gx_block;
      continue;
    }
    Eigen::VectorXd sxi =
        oracle.replay_grad_x_block_at(sel_key, snap_x, snap_y, i, params.batch_x);
    Eigen::VectorXd xp =
        prox_eval(problem.prox_g[i], eta_x, snap_x.block(i) - eta_x * sxi);
    gx_blocks[i] = (snap_x.block(i) - xp) / eta_x;
  }
  Eigen::VectorXd gy_sel = snap_gy;
  if (gauss_seidel && !argmin_mode) {
    Eigen::VectorXd spsi =
        oracle.sample_grad_y_fresh_at(sel_key, snap_x, snap_y, params.batch_y);
    gy_sel =
        (prox_eval(problem.prox_h, eta_y, snap_y + eta_y * spsi) - snap_y) /
        eta_y;
  }

  res.x = snap_x;
  res.y = snap_y;
  res.map = assemble_map(problem, eta_x, eta_y, std::move(gx_blocks),
                         std::move(gy_sel), stochastic);
  if (params.n1_argmin_variant && !res.early_stopped) {
    res.S_tilde = sum_norm_sq / static_cast<double>(res.iters_run);
  } else if (argmin_mode) {
    res.S_tilde = best_norm_sq;
  } else {
    res.S_tilde = res.map.norm_sq;
  }
  return res;
}

}  // namespace

InnerResult rb_sgda(const MinimaxProblem& problem, OracleHandle& oracle,
                    const InnerParams& params, const BlockVector& x0,
                    const Eigen::VectorXd& y0, RngStream rng) {
  return run_inner(problem, oracle, params, x0, y0, rng,
                   /*gauss_seidel=*/false);
}

InnerResult rb_sagda(const MinimaxProblem& problem, OracleHandle& oracle,
                     const InnerParams& params, const BlockVector& x0,
                     const Eigen::VectorXd& y0, RngStream rng) {
  return run_inner(problem, oracle, params, x0, y0, rng,
                   /*gauss_seidel=*/true);
}

}  // namespace sgdab
