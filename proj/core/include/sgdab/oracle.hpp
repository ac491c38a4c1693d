#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "sgdab/problem.hpp"
#include "sgdab/rng.hpp"

namespace sgdab {

enum class NoiseModel {
  Deterministic,
  AdditiveGaussianIsotropic,
};

// How sigma_x / sigma_y translate into per-component noise:
//  - MomentExact:   E|noise on x-block i|^2 = sigma_x^2 / N and
//                   E|noise on y|^2 = sigma_y^2, the moment bounds taken
//                   at face value for the whole block / vector.
//  - PerComponent:  every gradient component gets independent N(0, sigma^2)
//                   noise, so the vector second moment scales with dimension.
enum class NoiseScaling {
  MomentExact,
  PerComponent,
};

struct OracleSpec {
  NoiseModel model = NoiseModel::Deterministic;
  NoiseScaling scaling = NoiseScaling::MomentExact;
  double sigma_x = 0.0;
  double sigma_y = 0.0;

  static OracleSpec deterministic() { return OracleSpec{}; }

  static OracleSpec gaussian(double sigma_x, double sigma_y,
                             NoiseScaling scaling = NoiseScaling::MomentExact) {
    OracleSpec s;
    s.model = NoiseModel::AdditiveGaussianIsotropic;
    s.scaling = scaling;
    s.sigma_x = sigma_x;
    s.sigma_y = sigma_y;
    return s;
  }

  bool exact() const {
    return model == NoiseModel::Deterministic ||
           (sigma_x == 0.0 && sigma_y == 0.0);
  }
};

// Second moments in the sense of the variance contract (whole block/vector),
// as consumed by the batch-size and tolerance formulas.  PerComponent specs
// scale with the problem dimensions; minibatch-oracle problems take the
// configured sigmas at face value.
double effective_sigma_x_sq(const OracleSpec& spec,
                            const MinimaxProblem& problem);
double effective_sigma_y_sq(const OracleSpec& spec,
                            const MinimaxProblem& problem);

// Stochastic first-order oracle: unbiased batch-averaged gradient estimates
// plus global call accounting (one count per single-sample evaluation, so a
// batch of size M adds M).
//
// Two access paths:
//  - sequential sampling, for direct use and statistical tests;
//  - keyed sampling, where the randomness for (iteration, axis, block) is a
//    pure function of the handle's stream.  Inner solvers use the keyed path
//    so the gradient map at the selected iterate can be completed after the
//    sweep with the same draws the update step consumed; such replays do not
//    advance the call counters.
//
// For the additive Gaussian model, a batch of size M is sampled as a single
// Gaussian with second moment divided by M.  The mean of M i.i.d. Gaussians
// has exactly that law, so the averaged estimate is distributionally exact
// while costing one draw.
class OracleHandle {
 public:
  OracleHandle(const MinimaxProblem& problem, OracleSpec spec, RngStream rng)
      : problem_(&problem),
        spec_(spec),
        root_(rng),
        seq_(rng.substream(0x5eea11)) {}

  const MinimaxProblem& problem() const { return *problem_; }
  const OracleSpec& spec() const { return spec_; }
  std::uint64_t calls_x() const { return calls_x_; }
  std::uint64_t calls_y() const { return calls_y_; }

  // --- sequential sampling ---
  Eigen::VectorXd sample_grad_x_block(const BlockVector& x,
                                      const Eigen::VectorXd& y, int block,
                                      int batch);
  Eigen::VectorXd sample_grad_y(const BlockVector& x, const Eigen::VectorXd& y,
                                int batch);

  enum class MapMode { Full, Block, YOnly };

  // Stochastic prox-gradient residual with fresh draws; in Block mode only
  // the requested block's x-part is populated (others zero).
  GradientMapEval stochastic_gradient_map(const BlockVector& x,
                                          const Eigen::VectorXd& y,
                                          double eta_x, double eta_y,
                                          int batch_x, int batch_y,
                                          MapMode mode, int block = -1);

  // --- keyed sampling (deterministic function of (stream, iteration)) ---
  Eigen::VectorXd sample_grad_x_block_at(std::uint64_t iteration,
                                         const BlockVector& x,
                                         const Eigen::VectorXd& y, int block,
                                         int batch);
  // Re-derives the iteration's batch for another block; not counted.
  Eigen::VectorXd replay_grad_x_block_at(std::uint64_t iteration,
                                         const BlockVector& x,
                                         const Eigen::VectorXd& y, int block,
                                         int batch);
  Eigen::VectorXd sample_grad_y_at(std::uint64_t iteration,
                                   const BlockVector& x,
                                   const Eigen::VectorXd& y, int batch);
  // Independent draw at the same iteration (the Gauss-Seidel reporting draw).
  Eigen::VectorXd sample_grad_y_fresh_at(std::uint64_t iteration,
                                         const BlockVector& x,
                                         const Eigen::VectorXd& y, int batch);

 private:
  Eigen::VectorXd grad_x_estimate(const BlockVector& x,
                                  const Eigen::VectorXd& y, int block,
                                  int batch, RngStream& rng);
  Eigen::VectorXd grad_y_estimate(const BlockVector& x,
                                  const Eigen::VectorXd& y, int batch,
                                  RngStream& rng);
  RngStream stream_for(std::uint64_t iteration, std::uint64_t axis) const {
    return root_.substream(iteration).substream(axis);
  }

  const MinimaxProblem* problem_;
  OracleSpec spec_;
  RngStream root_;
  RngStream seq_;
  std::uint64_t calls_x_ = 0;
  std::uint64_t calls_y_ = 0;
};

}  // namespace sgdab
