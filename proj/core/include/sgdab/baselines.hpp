#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "sgdab/metrics.hpp"
#include "sgdab/oracle.hpp"
#include "sgdab/problem.hpp"

namespace sgdab {

// Comparison solvers with theoretically prescribed step sizes.
struct BaselineConfig {
  enum class Method { GDA, AGDA, TiAda };
  Method method = Method::GDA;

  double L_input = 0.0;      // required by GDA/AGDA
  double kappa_input = 1.0;  // required by GDA/AGDA
  // TiAda step rule: sigma_t = sigma0 / (v^y)^beta,
  //                  tau_t   = tau0 / max(v^x, v^y)^alpha.
  double tiada_alpha = 0.6;
  double tiada_beta = 0.4;
  double tiada_tau0 = 1.0;
  double tiada_sigma0 = 1.0;
  double tiada_v0x = 1.0;
  double tiada_v0y = 1.0;

  std::int64_t iters = 1000;
  int batch = 1;
  std::int64_t trace_stride = 0;  // 0 means iters/1000
  double divergence_bound = 1e12;
};

struct BaselineResult {
  BlockVector x;
  Eigen::VectorXd y;
  bool diverged = false;
  std::int64_t diverged_at = -1;
  std::uint64_t calls_x = 0;
  std::uint64_t calls_y = 0;
  MetricTrace metrics;
  double final_tau = 0.0;    // TiAda: last primal step
  double final_sigma = 0.0;  // TiAda: last dual step
};

// Two-time-scale GDA: simultaneous full-vector prox steps with
// tau = 1/(kappa^2 L), sigma = 1/L.
BaselineResult run_gda(const MinimaxProblem& problem, const OracleSpec& spec,
                       const BaselineConfig& config, const BlockVector& x0,
                       const Eigen::VectorXd& y0, RngStream rng);

// Alternating GDA: the dual step sees the updated primal iterate.
BaselineResult run_agda(const MinimaxProblem& problem, const OracleSpec& spec,
                        const BaselineConfig& config, const BlockVector& x0,
                        const Eigen::VectorXd& y0, RngStream rng);

// Time-scale adaptive two-step method; accumulates |s_x|^2 into v^x and the
// dual map norm^2 into v^y, then steps with the updated accumulators.
BaselineResult run_tiada(const MinimaxProblem& problem, const OracleSpec& spec,
                         const BaselineConfig& config, const BlockVector& x0,
                         const Eigen::VectorXd& y0, RngStream rng);

}  // namespace sgdab
