#include "sgdab/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace sgdab {

ProxMap ProxMap::l2_ball(double radius, Eigen::VectorXd center) {
  if (!(radius > 0.0))
    throw std::invalid_argument("ProxMap::l2_ball: radius must be positive");
  ProxMap m;
  m.kind = Kind::L2BallIndicator;
  m.radius = radius;
  m.center = std::move(center);
  return m;
}

ProxMap ProxMap::l1(double weight) {
  if (weight < 0.0)
    throw std::invalid_argument("ProxMap::l1: weight must be nonnegative");
  ProxMap m;
  m.kind = Kind::L1;
  m.weight = weight;
  return m;
}

ProxMap ProxMap::quadratic_to_anchor(double weight, Eigen::VectorXd anchor) {
  if (weight < 0.0)
    throw std::invalid_argument(
        "ProxMap::quadratic_to_anchor: weight must be nonnegative");
  ProxMap m;
  m.kind = Kind::QuadraticToAnchor;
  m.weight = weight;
  m.center = std::move(anchor);
  return m;
}

ProxMap ProxMap::simplex_with_quadratic(double weight,
                                        Eigen::VectorXd anchor) {
  if (weight < 0.0)
    throw std::invalid_argument(
        "ProxMap::simplex_with_quadratic: weight must be nonnegative");
  ProxMap m;
  m.kind = Kind::SimplexWithQuadratic;
  m.weight = weight;
  m.center = std::move(anchor);
  return m;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& u) {
  const Eigen::Index d = u.size();
  if (d == 0)
    throw std::invalid_argument("project_simplex: empty vector");
  if (!u.allFinite())
    throw std::invalid_argument("project_simplex: non-finite input");

  // Sort indices by value descending, ties by index ascending.
  std::vector<Eigen::Index> idx(d);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    return u[a] > u[b];
  });

  double cumsum = 0.0;
  double tau = 0.0;
  Eigen::Index support = 0;
  for (Eigen::Index k = 0; k < d; ++k) {
    cumsum += u[idx[k]];
    double t = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (u[idx[k]] - t > 0.0) {
      tau = t;
      support = k + 1;
    } else {
      break;
    }
  }
  (void)support;
  Eigen::VectorXd y(d);
  for (Eigen::Index i = 0; i < d; ++i) y[i] = std::max(u[i] - tau, 0.0);
  return y;
}

Eigen::VectorXd prox_eval(const ProxMap& map, double eta,
                          const Eigen::VectorXd& u) {
  if (!(eta > 0.0))
    throw std::invalid_argument("prox_eval: step must be positive");
  if (!u.allFinite())
    throw std::invalid_argument("prox_eval: non-finite input");

  switch (map.kind) {
    case ProxMap::Kind::Zero:
      return u;
    case ProxMap::Kind::L2BallIndicator: {
      Eigen::VectorXd dpt = u - map.center;
      double nrm = dpt.norm();
      if (nrm <= map.radius) return u;
      return map.center + (map.radius / nrm) * dpt;
    }
    case ProxMap::Kind::L1: {
      double t = eta * map.weight;
      Eigen::VectorXd y(u.size());
      for (Eigen::Index i = 0; i < u.size(); ++i) {
        double v = u[i];
        y[i] = (v > t) ? v - t : (v < -t ? v + t : 0.0);
      }
      return y;
    }
    case ProxMap::Kind::QuadraticToAnchor: {
      double w = eta * map.weight;
      return (u + w * map.center) / (1.0 + w);
    }
    case ProxMap::Kind::SimplexWithQuadratic: {
      // argmin over the simplex of (w/2)|y-c|^2 + (1/(2 eta))|y-u|^2
      // = simplex projection of the variance-weighted average of u and c.
      double a = 1.0 / eta;
      double denom = a + map.weight;
      Eigen::VectorXd w = (a * u + map.weight * map.center) / denom;
      return project_simplex(w);
    }
  }
  throw std::logic_error("prox_eval: unknown kind");
}

double prox_value(const ProxMap& map, const Eigen::VectorXd& y) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  switch (map.kind) {
    case ProxMap::Kind::Zero:
      return 0.0;
    case ProxMap::Kind::L2BallIndicator:
      return ((y - map.center).norm() <= map.radius + 1e-9) ? 0.0 : kInf;
    case ProxMap::Kind::L1:
      return map.weight * y.lpNorm<1>();
    case ProxMap::Kind::QuadraticToAnchor:
      return 0.5 * map.weight * (y - map.center).squaredNorm();
    case ProxMap::Kind::SimplexWithQuadratic: {
      if (y.minCoeff() < -1e-9 || std::abs(y.sum() - 1.0) > 1e-9) return kInf;
      return 0.5 * map.weight * (y - map.center).squaredNorm();
    }
  }
  throw std::logic_error("prox_value: unknown kind");
}

bool prox_feasible(const ProxMap& map, const Eigen::VectorXd& y, double tol) {
  switch (map.kind) {
    case ProxMap::Kind::Zero:
    case ProxMap::Kind::L1:
    case ProxMap::Kind::QuadraticToAnchor:
      return true;
    case ProxMap::Kind::L2BallIndicator:
      return (y - map.center).norm() <= map.radius + tol;
    case ProxMap::Kind::SimplexWithQuadratic:
      return y.minCoeff() >= -tol && std::abs(y.sum() - 1.0) <= tol;
  }
  return false;
}

}  // namespace sgdab
