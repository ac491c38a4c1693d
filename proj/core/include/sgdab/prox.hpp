#pragma once

#include <Eigen/Core>

namespace sgdab {

// Closed-form proximal map descriptor for the nonsmooth terms g_i and h.
//
// prox_eval(map, eta, u) returns argmin_y  map(y) + (1/(2*eta)) * |y - u|^2,
// exactly, for every kind below.
struct ProxMap {
  enum class Kind {
    Zero,                  // identically zero; prox is the identity
    L2BallIndicator,       // indicator of {|y - center| <= radius}
    L1,                    // weight * |y|_1
    QuadraticToAnchor,     // (weight/2) * |y - anchor|^2
    SimplexWithQuadratic,  // simplex indicator + (weight/2) * |y - anchor|^2
  };

  Kind kind = Kind::Zero;
  double radius = 0.0;  // L2BallIndicator
  double weight = 0.0;  // L1 / QuadraticToAnchor / SimplexWithQuadratic
  Eigen::VectorXd center;  // L2BallIndicator center, quadratic anchor

  static ProxMap zero() { return ProxMap{}; }

  static ProxMap l2_ball(double radius, Eigen::VectorXd center);
  static ProxMap l1(double weight);
  static ProxMap quadratic_to_anchor(double weight, Eigen::VectorXd anchor);
  static ProxMap simplex_with_quadratic(double weight, Eigen::VectorXd anchor);
};

// Exact Euclidean projection onto the unit simplex {y >= 0, sum y = 1}.
// Sort-based threshold; sorting ties broken by index order.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& u);

Eigen::VectorXd prox_eval(const ProxMap& map, double eta,
                          const Eigen::VectorXd& u);

// Function value of the nonsmooth term at y.  Indicator kinds return
// +infinity outside their domain (with a small feasibility tolerance).
double prox_value(const ProxMap& map, const Eigen::VectorXd& y);

// Whether y lies in the domain of the map (always true for finite-valued
// kinds).
bool prox_feasible(const ProxMap& map, const Eigen::VectorXd& y,
                   double tol = 1e-9);

}  // namespace sgdab
