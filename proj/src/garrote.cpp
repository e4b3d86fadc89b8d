// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "gpax/approx.hpp"

namespace gpax {

namespace {

// Equality-constrained subproblem: minimize c^T Q c - 2 b^T c over the
// free coordinates, with sum(c) = M when the budget constraint is in
// the working set. Returns the minimizer and the budget multiplier.
struct EqpResult {
  Vec u;
  double nu = 0.0;
};

EqpResult solve_eqp(const Mat& Q, const Vec& b, const std::vector<int>& free,
                    bool sum_active, double M) {
  const int f = static_cast<int>(free.size());
  EqpResult r;
  r.u = Vec::Zero(f);
  if (f == 0) return r;

  Mat qff(f, f);
  Vec bf(f);
  for (int a = 0; a < f; ++a) {
    bf[a] = b[free[a]];
    for (int c2 = 0; c2 < f; ++c2) qff(a, c2) = Q(free[a], free[c2]);
  }

  if (!sum_active) {
    Eigen::LDLT<Mat> ldlt(qff);
    if (ldlt.info() == Eigen::Success) {
      r.u = ldlt.solve(bf);
      if ((qff * r.u - bf).norm() <= 1e-8 * (1.0 + bf.norm())) return r;
    }
    r.u = qff.fullPivLu().solve(bf);
    return r;
  }

  Mat kkt(f + 1, f + 1);
  kkt.setZero();
  kkt.topLeftCorner(f, f) = qff;
  kkt.topRightCorner(f, 1).setOnes();
  kkt.bottomLeftCorner(1, f).setOnes();
  Vec rhs(f + 1);
  rhs.head(f) = bf;
  rhs[f] = M;
  Vec sol = kkt.fullPivLu().solve(rhs);
  r.u = sol.head(f);
  r.nu = sol[f];  // stationarity: Q u - b + nu * 1 = 0 on free set
  return r;
}

}  // namespace

Vec garrote_solve(const Mat& design, const Vec& y, const Vec& omega_tilde,
                  double M) {
  if (design.rows() != y.size())
    throw std::invalid_argument("garrote_solve: design/y size mismatch");
  if (design.cols() != omega_tilde.size())
    throw std::invalid_argument("garrote_solve: design/omega size mismatch");
  if (!(M >= 0.0)) throw std::invalid_argument("garrote_solve: M must be >= 0");

  const int p = static_cast<int>(omega_tilde.size());
  Vec full = Vec::Zero(p);
  if (M == 0.0) return full;

  // drop zero-omega columns; their c stays 0
  std::vector<int> cols;
  for (int k = 0; k < p; ++k)
    if (std::abs(omega_tilde[k]) >= 1e-12) cols.push_back(k);
  const int q = static_cast<int>(cols.size());
  if (q == 0) return full;

  Mat A(design.rows(), q);
  for (int a = 0; a < q; ++a)
    A.col(a) = omega_tilde[cols[a]] * design.col(cols[a]);

  Mat Q = A.transpose() * A;
  Vec b = A.transpose() * y;
  const double scale = 1.0 + b.cwiseAbs().maxCoeff();
  const double tol = 1e-10 * scale;

  Vec c = Vec::Zero(q);
  std::vector<bool> at_bound(q, true);
  bool sum_active = false;

  const int max_iters = 10000;
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<int> free;
    for (int k = 0; k < q; ++k)
      if (!at_bound[k]) free.push_back(k);

    EqpResult eqp = solve_eqp(Q, b, free, sum_active, M);

    // step from c toward the subproblem minimizer
    Vec target = Vec::Zero(q);
    for (std::size_t a = 0; a < free.size(); ++a) target[free[a]] = eqp.u[a];
    Vec step = target - c;
    double step_norm = step.cwiseAbs().maxCoeff();

    if (step_norm <= 1e-12 * (1.0 + c.cwiseAbs().maxCoeff())) {
      // stationary on the working set; check multipliers
      Vec g = Q * c - b;
      double nu = sum_active ? eqp.nu : 0.0;
      int worst = -1;
      double worst_val = -tol;
      for (int k = 0; k < q; ++k) {
        if (!at_bound[k]) continue;
        double mu = g[k] + nu;
        if (mu < worst_val) {
          worst_val = mu;
          worst = k;
        }
      }
      bool drop_sum = sum_active && nu < worst_val;
      if (worst < 0 && !drop_sum) {
        for (int a = 0; a < q; ++a) full[cols[a]] = std::max(c[a], 0.0);
        return full;
      }
      if (drop_sum)
        sum_active = false;
      else
        at_bound[worst] = false;
      continue;
    }

    // longest feasible step along the direction
    double alpha = 1.0;
    int blocking = -1;
    bool block_sum = false;
    for (std::size_t a = 0; a < free.size(); ++a) {
      int k = free[a];
      if (step[k] < -tol && c[k] + step[k] < 0.0) {
        double am = -c[k] / step[k];
        if (am < alpha) {
          alpha = am;
          blocking = k;
          block_sum = false;
        }
      }
    }
    if (!sum_active) {
      double sum_step = step.sum();
      if (sum_step > tol) {
        double am = (M - c.sum()) / sum_step;
        if (am < alpha) {
          alpha = am;
          blocking = -1;
          block_sum = true;
        }
      }
    }
    c += alpha * step;
    c = c.cwiseMax(0.0);
    if (block_sum)
      sum_active = true;
    else if (blocking >= 0) {
      c[blocking] = 0.0;
      at_bound[blocking] = true;
    }
  }

  Vec g = Q * c - b;
  throw std::runtime_error(
      "garrote_solve: active-set method did not converge in 10000 "
      "iterations (gradient norm " +
      std::to_string(g.norm()) + ")");
}

}  // namespace gpax
