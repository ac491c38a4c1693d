#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgdab/baselines.hpp"
#include "sgdab/dro.hpp"
#include "sgdab/metrics.hpp"
#include "sgdab/outer.hpp"

namespace sgdab {

// Benchmark configuration; loadable from JSON (see docs/config-schema.json).
struct ExperimentConfig {
  enum class Kind { Bilinear, BilinearWcmc, DroSynthetic, DroLibsvm };
  Kind experiment = Kind::Bilinear;
  std::string dataset_path;  // DroLibsvm only

  std::vector<std::string> methods;  // of {sgdab, sgdab-budgeted, gda, agda, tiada}
  std::vector<std::uint64_t> seeds;

  // problem parameters
  int m = 30;
  int n = 30;
  double L_target = 5.0;
  double mu_y = 1.0;
  double D_y = 10.0;
  int n_data = 200;
  int d = 20;
  double mu_reg = 0.01;

  // solver parameters
  double epsilon = 0.5;
  double epsilon_tilde = 1e-4;
  double p = 0.125;
  double gamma = 0.9;
  std::int64_t K = 10000;  // budgeted variant iteration budget
  int M = 10;              // batch size
  double sigma = 1.0;      // additive noise level (0 = deterministic)
  std::string noise_scaling = "per-component";  // or "moment-exact"
  std::string inner = "jacobi";                 // or "gauss-seidel"
  std::int64_t baseline_iters = 200000;
  std::int64_t tiada_iters = 20000;
  double oracle_budget = 1e15;

  std::string out_dir = "out";
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);
// Throws std::invalid_argument with a distinct message per defect.
void validate_experiment_config(const ExperimentConfig& config);

struct BenchCell {
  std::string method;
  std::uint64_t seed = 0;
  std::uint64_t oracle_calls = 0;
  bool certified = false;
  bool diverged = false;
  double final_grad_norm_sq = 0.0;
  double wall_ms = 0.0;
};

struct ThresholdRow {
  std::string method;
  double threshold = 0.0;
  double median_calls = 0.0;  // +inf when never reached
};

struct BenchReport {
  std::vector<BenchCell> cells;
  std::vector<ThresholdRow> summary;
  std::vector<std::string> csv_files;
  std::string merged_csv;
  std::string plot_script_path;
  std::string summary_path;
  MetricTrace merged;
};

// Runs every (method, seed) cell, writes per-cell CSVs, a merged CSV,
// per-method median curves, a gnuplot script, and the threshold summary.
BenchReport run_bench(const ExperimentConfig& config);

// Figure-1 style driver: bilinear instances at the given L_target with the
// experiment defaults (K = 10^4 for the budgeted solver, M = 10, additive
// per-component noise with sigma = 1), summarized by median oracle calls to
// reach |grad L|^2 thresholds 1e-1 and 1e-2.
BenchReport reproduce_bilinear(double L_target,
                               const std::vector<std::uint64_t>& seeds,
                               const std::vector<std::string>& methods,
                               const std::string& out_dir);

// DRO driver: synthetic blobs by default (or a LIBSVM file), minibatch
// oracle, Lipschitz lower-bound estimation via the mixed second partial at
// the initial point, and sigma estimation by sampling.
BenchReport reproduce_dro(const ExperimentConfig& config);

// Spectral norm of d(grad_y f)/dx at (x, y), via power iteration on finite
// differences.  Deterministic all-ones start.
double estimate_mixed_operator_norm(const MinimaxProblem& problem,
                                    const BlockVector& x,
                                    const Eigen::VectorXd& y, int iters = 200,
                                    double tol = 1e-9);

// Single-sample noise second moments E|s - grad f|^2, estimated at
// `samples` random initializations with y at the uniform anchor.
std::pair<double, double> estimate_sigmas(const DroInstance& instance,
                                          int samples, std::uint64_t seed);

}  // namespace sgdab
