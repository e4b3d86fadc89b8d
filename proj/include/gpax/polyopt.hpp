// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>

#include "gpax/approx.hpp"

namespace gpax {

// Sparse multivariate polynomial in the monomial basis.
struct Poly {
  int dim = 1;
  std::map<MultiIndex, double> coeffs;  // multi-index -> coefficient

  static Poly constant(int dim, double c);
  static Poly variable(int dim, int i);  // x_i

  double eval(const Vec& x) const;
  Vec gradient(const Vec& x) const;
  Mat hessian(const Vec& x) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly scaled(double s) const;
  Poly derivative(int i) const;

  int total_degree() const;
  void prune(double tol = 0.0);

  // Dense univariate coefficients c_0..c_deg (dim must be 1).
  std::vector<double> univariate_coeffs() const;
};

// Monomial expansion of one orthonormal Legendre term on the spec's box
// (affine map folded in), and of a whole surrogate.
Poly legendre_term_poly(const BasisSpec& spec, const MultiIndex& term);
Poly surrogate_poly(const SurrogateModel& model);

// Control cost J(x) = w1 (y* - yhat(x))^2 + w2 ||x - x'||^2 expanded in
// the monomial basis.
struct PolyCost {
  int dimension = 1;
  Poly poly;
  int degree = 0;
  Box domain;
  Vec x_prev;
  double w1 = 1.0;
  double w2 = 1.0;

  double eval(const Vec& x) const { return poly.eval(x); }
};

PolyCost compose_cost(const SurrogateModel& model, double y_star,
                      const Vec& x_prev, double w1, double w2);

// Real roots of a dense univariate polynomial inside [lo, hi], via
// companion-matrix eigenvalues.
std::vector<double> poly_real_roots(const std::vector<double>& coeffs,
                                    double lo, double hi);

struct MinResult {
  Vec x;
  double j = 0.0;
  bool certified = true;  // false when multistart hit its iteration cap
};

// Global minimum over the domain by critical-point enumeration
// (dimension must be 1). Ties go to the candidate nearest x_prev.
MinResult minimize_univariate(const PolyCost& cost);

// Multi-start projected damped Newton (dimension >= 2); starts counts
// grid points in addition to x_prev. Deterministic reduction by
// (J, distance to x_prev).
MinResult minimize_multivariate(const PolyCost& cost, int starts = 0);

// Largest q with J - q nonnegative on the domain, by bisection over
// [0, J(x_prev)] with root-based feasibility checks. Univariate only;
// equivalent to the minimum of J there.
double sos_largest_q(const PolyCost& cost, double tol);

// Dispatcher used by the control loop.
MinResult minimize_cost(const PolyCost& cost);

}  // namespace gpax
