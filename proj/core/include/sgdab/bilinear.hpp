#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "sgdab/problem.hpp"

namespace sgdab {

// Regularized bilinear saddle problem
//   L(x, y) = x'Qx + x'Ay - (mu_y/2)|y|^2
// with Q, A sharing a random orthogonal eigenbasis and a controlled spectrum.
// The matrices are kept alongside the problem for tests and reporting.
struct BilinearInstance {
  MinimaxProblem problem;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd A;
  Eigen::VectorXd lambda_Q;
  Eigen::VectorXd lambda_A;
  double mu_y = 0.0;
  double L_target = 0.0;
};

// Strongly concave instance (mu_y > 0).  V is the orthogonal factor of the
// QR decomposition of an i.i.d. Uniform[0,1] matrix; lambda_Q is i.i.d.
// Uniform[-1,1] rescaled so |lambda_Q|_inf = L_target; lambda_A is chosen as
// sqrt(2 mu_y max(0, -lambda_Q)), which keeps the primal function
//   F(x) = x'(Q + A A'/(2 mu_y))x
// nonnegative (flat along the nonconvex directions), so F_bar = 0 is a valid
// lower bound.  Requires L_target >= 2 mu_y so that |lambda_A| <= |lambda_Q|.
//
// Diagnostics carry y_*(x) = A'x / mu_y, the closed-form F, and the true
// Lipschitz constant of grad L (spectral norm of the full Hessian).
BilinearInstance make_bilinear(int m, int n, double L_target, double mu_y,
                               std::uint64_t seed);

// Merely concave instance (mu = 0) with a ball-constrained dual of diameter
// D_y.  The spectrum of Q is made nonnegative so the primal function
//   F(x) = x'Qx + (D_y/2)|A'x|
// stays bounded below by zero.
BilinearInstance make_bilinear_wcmc(int m, int n, double L_target, double D_y,
                                    std::uint64_t seed);

}  // namespace sgdab
