#include "sgdab/dual_ascent.hpp"

#include <cmath>
#include <stdexcept>

namespace sgdab {

DualAscentResult maximize_strongly_concave(
    const ProxMap& prox_h,
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& grad,
    const std::function<double(const Eigen::VectorXd&)>& smooth_value,
    Eigen::VectorXd y0, double mu, double tol, std::int64_t max_iters) {
  if (!(mu > 0.0))
    throw std::invalid_argument(
        "maximize_strongly_concave: needs mu > 0");

  DualAscentResult res;
  res.y = prox_eval(prox_h, 1.0, y0);  // start feasible
  double L_loc = mu;                   // local Lipschitz estimate, grown on demand

  Eigen::VectorXd g = grad(res.y);
  ++res.grad_evals;
  for (std::int64_t it = 0; it < max_iters; ++it) {
    double eta = 1.0 / L_loc;
    Eigen::VectorXd y_next;
    for (int bt = 0; bt < 120; ++bt) {
      eta = 1.0 / L_loc;
      y_next = prox_eval(prox_h, eta, res.y + eta * g);
      Eigen::VectorXd delta = y_next - res.y;
      double dn = delta.squaredNorm();
      if (dn == 0.0) break;
      bool ok;
      if (smooth_value) {
        // Ascent test on the smooth part: f(y+) >= f(y) + <g, d> - |d|^2/(2 eta).
        double fy = smooth_value(res.y);
        double fn = smooth_value(y_next);
        ok = fn >= fy + g.dot(delta) - dn / (2.0 * eta) - 1e-12 * std::abs(fy);
      } else {
        Eigen::VectorXd gn = grad(y_next);
        ++res.grad_evals;
        ok = (gn - g).norm() <= (1.0 / eta) * std::sqrt(dn) + 1e-14;
      }
      if (ok) break;
      L_loc *= 2.0;
    }
    Eigen::VectorXd map = (y_next - res.y) / eta;
    res.map_norm_sq = map.squaredNorm();
    res.step = eta;
    res.y = y_next;
    if (res.map_norm_sq <= 2.0 * mu * tol) {
      res.converged = true;
      return res;
    }
    g = grad(res.y);
    ++res.grad_evals;
    L_loc = std::max(mu, L_loc * 0.9);
  }
  return res;
}

}  // namespace sgdab
