#include "sgdab/oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdab {

namespace {

// Substream axes within one iteration.  Additive x-noise is keyed per block
// (independent across blocks); minibatch index draws are keyed once per
// iteration so every block sees the same samples.
constexpr std::uint64_t kAxisXBase = 0x100;
constexpr std::uint64_t kAxisXBatch = 0x01;
constexpr std::uint64_t kAxisY = 0x02;
constexpr std::uint64_t kAxisPsi = 0x03;

void check_block(const MinimaxProblem& p, int block) {
  if (block < 0 || block >= p.num_blocks)
    throw std::invalid_argument("oracle: invalid block index");
}

void check_batch(int batch) {
  if (batch < 1) throw std::invalid_argument("oracle: batch must be >= 1");
}

}  // namespace

Eigen::VectorXd OracleHandle::grad_x_estimate(const BlockVector& x,
                                              const Eigen::VectorXd& y,
                                              int block, int batch,
                                              RngStream& rng) {
  if (spec_.model == NoiseModel::Deterministic)
    return problem_->grad_x_block(x, y, block);
  if (problem_->stoch_grad_x_block)
    return problem_->stoch_grad_x_block(x, y, block, batch, rng);

  Eigen::VectorXd g = problem_->grad_x_block(x, y, block);
  const auto n_i = g.size();
  double var;
  if (spec_.scaling == NoiseScaling::PerComponent) {
    var = spec_.sigma_x * spec_.sigma_x;
  } else {
    var = spec_.sigma_x * spec_.sigma_x /
          (static_cast<double>(problem_->num_blocks) *
           static_cast<double>(n_i));
  }
  double sd = std::sqrt(var / static_cast<double>(batch));
  return g + rng.normal_vector(n_i, sd);
}

Eigen::VectorXd OracleHandle::grad_y_estimate(const BlockVector& x,
                                              const Eigen::VectorXd& y,
                                              int batch, RngStream& rng) {
  if (spec_.model == NoiseModel::Deterministic) return problem_->grad_y(x, y);
  if (problem_->stoch_grad_y)
    return problem_->stoch_grad_y(x, y, batch, rng);

  Eigen::VectorXd g = problem_->grad_y(x, y);
  double var;
  if (spec_.scaling == NoiseScaling::PerComponent) {
    var = spec_.sigma_y * spec_.sigma_y;
  } else {
    var = spec_.sigma_y * spec_.sigma_y / static_cast<double>(g.size());
  }
  double sd = std::sqrt(var / static_cast<double>(batch));
  return g + rng.normal_vector(g.size(), sd);
}

Eigen::VectorXd OracleHandle::sample_grad_x_block(const BlockVector& x,
                                                  const Eigen::VectorXd& y,
                                                  int block, int batch) {
  check_block(*problem_, block);
  check_batch(batch);
  calls_x_ += static_cast<std::uint64_t>(batch);
  return grad_x_estimate(x, y, block, batch, seq_);
}

Eigen::VectorXd OracleHandle::sample_grad_y(const BlockVector& x,
                                            const Eigen::VectorXd& y,
                                            int batch) {
  check_batch(batch);
  calls_y_ += static_cast<std::uint64_t>(batch);
  return grad_y_estimate(x, y, batch, seq_);
}

GradientMapEval OracleHandle::stochastic_gradient_map(
    const BlockVector& x, const Eigen::VectorXd& y, double eta_x, double eta_y,
    int batch_x, int batch_y, MapMode mode, int block) {
  if (!(eta_x > 0.0) || !(eta_y > 0.0))
    throw std::invalid_argument(
        "stochastic_gradient_map: steps must be positive");
  std::vector<Eigen::VectorXd> gx(problem_->num_blocks);
  for (int i = 0; i < problem_->num_blocks; ++i)
    gx[i] = Eigen::VectorXd::Zero(problem_->dims_x[i]);
  if (mode == MapMode::Full) {
    for (int i = 0; i < problem_->num_blocks; ++i)
      gx[i] = sample_grad_x_block(x, y, i, batch_x);
  } else if (mode == MapMode::Block) {
    check_block(*problem_, block);
    gx[block] = sample_grad_x_block(x, y, block, batch_x);
  }
  Eigen::VectorXd gy = sample_grad_y(x, y, batch_y);

  GradientMapEval ev = gradient_map_from_estimates(
      *problem_, x, y, eta_x, eta_y, gx, gy,
      /*stochastic=*/!spec_.exact());
  if (mode == MapMode::Block) {
    // Zero out untouched blocks' residuals: prox of an indicator may move
    // even a zero estimate, so rebuild only the requested block.
    for (int i = 0; i < problem_->num_blocks; ++i)
      if (i != block) ev.Gx.block(i).setZero();
    ev.norm_sq = ev.recompute_norm_sq();
  }
  if (mode == MapMode::YOnly) {
    for (int i = 0; i < problem_->num_blocks; ++i) ev.Gx.block(i).setZero();
    ev.norm_sq = ev.recompute_norm_sq();
  }
  return ev;
}

Eigen::VectorXd OracleHandle::sample_grad_x_block_at(std::uint64_t iteration,
                                                     const BlockVector& x,
                                                     const Eigen::VectorXd& y,
                                                     int block, int batch) {
  check_block(*problem_, block);
  check_batch(batch);
  calls_x_ += static_cast<std::uint64_t>(batch);
  std::uint64_t axis = problem_->stoch_grad_x_block
                           ? kAxisXBatch
                           : kAxisXBase + static_cast<std::uint64_t>(block);
  RngStream s = stream_for(iteration, axis);
  return grad_x_estimate(x, y, block, batch, s);
}

Eigen::VectorXd OracleHandle::replay_grad_x_block_at(std::uint64_t iteration,
                                                     const BlockVector& x,
                                                     const Eigen::VectorXd& y,
                                                     int block, int batch) {
  check_block(*problem_, block);
  check_batch(batch);
  std::uint64_t axis = problem_->stoch_grad_x_block
                           ? kAxisXBatch
                           : kAxisXBase + static_cast<std::uint64_t>(block);
  RngStream s = stream_for(iteration, axis);
  return grad_x_estimate(x, y, block, batch, s);
}

Eigen::VectorXd OracleHandle::sample_grad_y_at(std::uint64_t iteration,
                                               const BlockVector& x,
                                               const Eigen::VectorXd& y,
                                               int batch) {
  check_batch(batch);
  calls_y_ += static_cast<std::uint64_t>(batch);
  RngStream s = stream_for(iteration, kAxisY);
  return grad_y_estimate(x, y, batch, s);
}

Eigen::VectorXd OracleHandle::sample_grad_y_fresh_at(std::uint64_t iteration,
                                                     const BlockVector& x,
                                                     const Eigen::VectorXd& y,
                                                     int batch) {
  check_batch(batch);
  calls_y_ += static_cast<std::uint64_t>(batch);
  RngStream s = stream_for(iteration, kAxisPsi);
  return grad_y_estimate(x, y, batch, s);
}


double effective_sigma_x_sq(const OracleSpec& spec,
                            const MinimaxProblem& problem) {
  if (spec.exact()) return 0.0;
  double s2 = spec.sigma_x * spec.sigma_x;
  if (spec.scaling == NoiseScaling::PerComponent &&
      !problem.stoch_grad_x_block) {
    int max_dim = 0;
    for (int d : problem.dims_x) max_dim = std::max(max_dim, d);
    return s2 * problem.num_blocks * max_dim;
  }
  return s2;
}

double effective_sigma_y_sq(const OracleSpec& spec,
                            const MinimaxProblem& problem) {
  if (spec.exact()) return 0.0;
  double s2 = spec.sigma_y * spec.sigma_y;
  if (spec.scaling == NoiseScaling::PerComponent && !problem.stoch_grad_y)
    return s2 * problem.dim_y;
  return s2;
}

}  // namespace sgdab
