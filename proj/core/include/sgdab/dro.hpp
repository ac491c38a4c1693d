#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "sgdab/libsvm.hpp"
#include "sgdab/problem.hpp"

namespace sgdab {

// Score function q(a; x) mapping a feature vector to a real logit.
struct ScoreModel {
  enum class Kind { Linear, TinyMLP };
  Kind kind = Kind::Linear;
  int hidden = 16;  // TinyMLP hidden width

  static ScoreModel linear() { return ScoreModel{}; }
  static ScoreModel tiny_mlp(int hidden = 16) {
    ScoreModel m;
    m.kind = Kind::TinyMLP;
    m.hidden = hidden;
    return m;
  }
};

// Distributionally robust binary classification over the unit simplex:
//   min_x max_{y in simplex}  sum_i y_i l_i(q(a_i; x)) - (mu/2)|y - 1/n|^2
// with the binary logistic loss l_i(z) = ln(1 + exp(-b_i z)).
//
// Losses are nonnegative, so F_bar = 0.  The quadratic lives inside h (its
// prox is SimplexWithQuadratic), and mu_reg is the concavity modulus handed
// to solvers.  The stochastic oracle subsamples data indices uniformly with
// replacement.
struct DroInstance {
  MinimaxProblem problem;
  Dataset data;
  ScoreModel model;
  double mu_reg = 0.0;

  // Logits q(a_i; x) for every sample.
  Eigen::VectorXd scores(const BlockVector& x) const;
  // Fraction of samples with sign(q) != label; q = 0 predicts +1.
  double train_error(const BlockVector& x) const;
  // Exact primal value F(x): the strongly concave inner max solved to tol.
  double primal_value(const BlockVector& x, double tol = 1e-8) const;
  // Zero weights/biases of the right block shape.
  BlockVector zero_x() const;
  // Xavier-style random initialization.
  BlockVector random_x(std::uint64_t seed) const;
};

// Two seedable Gaussian blobs with balanced labels, for desk-scale runs.
Dataset make_synthetic_blobs(int n_data, int d, std::uint64_t seed);

DroInstance make_dro(Dataset data, double mu_reg, ScoreModel model);

}  // namespace sgdab
