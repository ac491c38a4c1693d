#include "sgdab/bilinear.hpp"

#include <cassert>
#include <cmath>
#include <memory>
#include <stdexcept>

#include <Eigen/Dense>

#include "sgdab/rng.hpp"

namespace sgdab {

namespace {

Eigen::MatrixXd random_orthogonal(int n, RngStream& rng) {
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = rng.next_double();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  return qr.householderQ();
}

// Spectral norm of the Hessian of L: the eigen-modes decouple into 2x2
// symmetric blocks [[2 lq, la], [la, -mu]].
double hessian_norm(const Eigen::VectorXd& lq, const Eigen::VectorXd& la,
                    double mu) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < lq.size(); ++i) {
    double a = 2.0 * lq[i];
    double b = la[i];
    double c = -mu;
    double tr = a + c;
    double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    worst = std::max({worst, std::abs(0.5 * (tr + disc)),
                      std::abs(0.5 * (tr - disc))});
  }
  return worst;
}

struct BilinearData {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd Qsym;  // Q + Q'
  Eigen::MatrixXd A;
  double mu_y;
};

}  // namespace

BilinearInstance make_bilinear(int m, int n, double L_target, double mu_y,
                               std::uint64_t seed) {
  if (m != n) throw std::invalid_argument("make_bilinear: requires m == n");
  if (!(L_target > 0.0) || !(mu_y > 0.0))
    throw std::invalid_argument("make_bilinear: L_target, mu_y must be > 0");
  if (L_target < 2.0 * mu_y)
    throw std::invalid_argument(
        "make_bilinear: needs L_target >= 2 mu_y for the spectral coupling");

  RngStream rng(seed, 0x8112);
  Eigen::MatrixXd V = random_orthogonal(n, rng);

  Eigen::VectorXd lq(n);
  for (int i = 0; i < n; ++i) lq[i] = 2.0 * rng.next_double() - 1.0;
  double scale = L_target / lq.cwiseAbs().maxCoeff();
  lq *= scale;

  Eigen::VectorXd la(n);
  for (int i = 0; i < n; ++i)
    la[i] = std::sqrt(2.0 * mu_y * std::max(0.0, -lq[i]));

  // Both construction conditions must hold: the shared-basis positivity
  // lambda_Q + lambda_A^2 / mu_y >= 0 and |Lambda_A|_2 <= |Lambda_Q|_2.
  for (int i = 0; i < n; ++i)
    assert(lq[i] + la[i] * la[i] / mu_y >= -1e-12);
  assert(la.cwiseAbs().maxCoeff() <= lq.cwiseAbs().maxCoeff() + 1e-12);

  auto data = std::make_shared<BilinearData>();
  data->Q = V * lq.asDiagonal() * V.transpose();
  data->Qsym = data->Q + data->Q.transpose();
  data->A = V * la.asDiagonal() * V.transpose();
  data->mu_y = mu_y;

  MinimaxProblem p;
  p.num_blocks = 1;
  p.dims_x = {n};
  p.dim_y = n;
  p.grad_x_block = [data](const BlockVector& x, const Eigen::VectorXd& y,
                          int) -> Eigen::VectorXd {
    return data->Qsym * x.block(0) + data->A * y;
  };
  p.grad_y = [data](const BlockVector& x,
                    const Eigen::VectorXd& y) -> Eigen::VectorXd {
    return data->A.transpose() * x.block(0) - data->mu_y * y;
  };
  p.prox_g = {ProxMap::zero()};
  p.prox_h = ProxMap::zero();
  p.mu = mu_y;
  p.F_bar = 0.0;
  p.eval_L = [data](const BlockVector& x, const Eigen::VectorXd& y) -> double {
    const Eigen::VectorXd& xv = x.block(0);
    return xv.dot(data->Q * xv) + xv.dot(data->A * y) -
           0.5 * data->mu_y * y.squaredNorm();
  };

  Diagnostics diag;
  diag.y_star = [data](const BlockVector& x) -> Eigen::VectorXd {
    return data->A.transpose() * x.block(0) / data->mu_y;
  };
  diag.primal_value = [data](const BlockVector& x) -> double {
    const Eigen::VectorXd& xv = x.block(0);
    double quad = xv.dot(data->Q * xv);
    double bil = (data->A.transpose() * xv).squaredNorm() / (2.0 * data->mu_y);
    return quad + bil;
  };
  diag.L_true = hessian_norm(lq, la, mu_y);
  diag.kappa_true = diag.L_true / mu_y;
  p.diagnostics = diag;

  BilinearInstance inst;
  inst.problem = std::move(p);
  inst.Q = data->Q;
  inst.A = data->A;
  inst.lambda_Q = lq;
  inst.lambda_A = la;
  inst.mu_y = mu_y;
  inst.L_target = L_target;
  return inst;
}

BilinearInstance make_bilinear_wcmc(int m, int n, double L_target, double D_y,
                                    std::uint64_t seed) {
  if (m != n)
    throw std::invalid_argument("make_bilinear_wcmc: requires m == n");
  if (!(L_target > 0.0))
    throw std::invalid_argument("make_bilinear_wcmc: L_target must be > 0");
  if (!(D_y > 0.0))
    throw std::invalid_argument("make_bilinear_wcmc: D_y must be > 0");

  RngStream rng(seed, 0x8113);
  Eigen::MatrixXd V = random_orthogonal(n, rng);

  // Nonnegative spectrum for Q keeps F(x) = x'Qx + (D_y/2)|A'x| >= 0.
  Eigen::VectorXd lq(n);
  for (int i = 0; i < n; ++i) lq[i] = rng.next_double();
  lq *= L_target / lq.cwiseAbs().maxCoeff();

  Eigen::VectorXd la(n);
  for (int i = 0; i < n; ++i) la[i] = rng.next_double();
  la *= 0.5 * L_target / la.cwiseAbs().maxCoeff();

  auto data = std::make_shared<BilinearData>();
  data->Q = V * lq.asDiagonal() * V.transpose();
  data->Qsym = data->Q + data->Q.transpose();
  data->A = V * la.asDiagonal() * V.transpose();
  data->mu_y = 0.0;

  MinimaxProblem p;
  p.num_blocks = 1;
  p.dims_x = {n};
  p.dim_y = n;
  p.grad_x_block = [data](const BlockVector& x, const Eigen::VectorXd& y,
                          int) -> Eigen::VectorXd {
    return data->Qsym * x.block(0) + data->A * y;
  };
  p.grad_y = [data](const BlockVector& x,
                    const Eigen::VectorXd&) -> Eigen::VectorXd {
    return data->A.transpose() * x.block(0);
  };
  p.prox_g = {ProxMap::zero()};
  p.prox_h = ProxMap::l2_ball(0.5 * D_y, Eigen::VectorXd::Zero(n));
  p.mu = 0.0;
  p.F_bar = 0.0;
  p.eval_L = [data](const BlockVector& x, const Eigen::VectorXd& y) -> double {
    const Eigen::VectorXd& xv = x.block(0);
    return xv.dot(data->Q * xv) + xv.dot(data->A * y);
  };

  Diagnostics diag;
  diag.primal_value = [data, D_y](const BlockVector& x) -> double {
    const Eigen::VectorXd& xv = x.block(0);
    return xv.dot(data->Q * xv) +
           0.5 * D_y * (data->A.transpose() * xv).norm();
  };
  diag.L_true = hessian_norm(lq, la, 0.0);
  diag.kappa_true = 0.0;
  p.diagnostics = diag;

  BilinearInstance inst;
  inst.problem = std::move(p);
  inst.Q = data->Q;
  inst.A = data->A;
  inst.lambda_Q = lq;
  inst.lambda_A = la;
  inst.mu_y = 0.0;
  inst.L_target = L_target;
  return inst;
}

}  // namespace sgdab
