// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace gpax {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using MultiIndex = std::vector<int>;

struct Interval {
  double lo;
  double hi;
};

// Per-dimension closed intervals of the input domain, in real units.
using Box = std::vector<Interval>;

// Orthonormal Legendre value sqrt((2n+1)/2) * P_n(z) on [-1,1].
// z is clamped at |z| <= 1 + 1e-12; degrees above 64 are rejected.
double legendre_orthonormal(int n, double z);

// All multi-indices with total degree <= max_degree and at most
// max_interaction_order nonzero entries, lexicographically sorted.
// Throws if the enumeration would exceed term_budget.
std::vector<MultiIndex> enumerate_terms(int d, int max_degree,
                                        int max_interaction_order,
                                        int term_budget = 10000);

// Tensor-product Legendre basis on a box domain. Term j evaluates
// prod_i phi_{n_i}(z_i) with z the affine map of x onto [-1,1]^d.
struct BasisSpec {
  Box domain;
  std::vector<MultiIndex> terms;
  int max_degree = 0;
  int max_interaction_order = 0;

  int dimension() const { return static_cast<int>(domain.size()); }
  int num_terms() const { return static_cast<int>(terms.size()); }

  // Enumerates terms from the caps.
  static BasisSpec make(Box domain, int max_degree, int max_interaction_order);
  // Explicit term list; caps are derived from the list.
  static BasisSpec with_terms(Box domain, std::vector<MultiIndex> terms);

  void validate() const;  // throws std::invalid_argument on violation
};

// Affine map of x in [iv.lo, iv.hi] onto [-1,1].
double map_to_unit(const Interval& iv, double x);

// Basis values at one point; component order matches spec.terms.
Vec basis_vector(const BasisSpec& spec, const Vec& x);

// Row i = basis_vector(spec, X.row(i)). X is n x d; throws on empty X.
Mat design_matrix(const BasisSpec& spec, const Mat& X);

}  // namespace gpax
