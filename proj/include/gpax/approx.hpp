// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "gpax/kernel.hpp"

namespace gpax {

// Deterministic space-filling points: equispaced grid including endpoints
// for d = 1; full factorial grid of ceil(k^(1/d)) levels per axis for
// d >= 2, truncated to the first k points in lexicographic order.
Mat space_filling(const Box& domain, int k);

// Simulated weight prior over a space-filling set S.
// sigma_matrix holds the unit-tau2 form (Phi_s^T Phi_s)^-1 Phi_s^T Psi
// Phi_s (Phi_s^T Phi_s)^-1; the tau2 factor stays in KernelConfig.
struct PriorSimulation {
  Mat points_S;
  Mat phi_S;
  Mat sigma_matrix;
  double gram_condition = 0.0;
};

// Builds S, Phi_s, Psi over S and Sigma via solves against the Gram
// factorization. Requires k >= min_k_factor*(N+1); refuses a Gram matrix
// with condition number above 1e12.
PriorSimulation simulate_prior(const BasisSpec& spec, const KernelConfig& cfg,
                               int k, int min_k_factor = 10);

// Posterior mean of the weights:
// omega = tau2 Sigma Phi_D^T (tau2 Phi_D Sigma Phi_D^T + sigma2 I)^-1 y.
Vec posterior_mean(const PriorSimulation& prior, const BasisSpec& spec,
                   const KernelConfig& cfg, const TrainingSet& train);

// Nonnegative garrote coefficients for one budget M: the KKT point of
//   min ||y - A c||^2,  A_k = omega_k * design_k,  c >= 0,  sum c <= M,
// by a primal active-set method. Columns with |omega_k| < 1e-12 are
// dropped and their c fixed at 0. Returned c has full length.
Vec garrote_solve(const Mat& design, const Vec& y, const Vec& omega_tilde,
                  double M);

struct GarrotePath {
  std::vector<double> m_grid;
  std::vector<Vec> solutions;      // c(M), full length, nonnegative
  std::vector<double> train_sse;   // objective at each M
  std::vector<double> test_rmspe;  // held-out RMSPE at each M
  int best_index = 0;
};

struct Provenance {
  KernelConfig kernel;
  double m_chosen = 0.0;
  double rmspe = 0.0;
  int prior_points = 0;
};

// The deployed sparse linear model: predict(x) = coefficients . phi(x).
struct SurrogateModel {
  BasisSpec spec;
  Vec omega_tilde;   // full posterior mean, length N+1
  Vec c_hat;         // selected garrote coefficients
  Vec coefficients;  // elementwise c_hat .* omega_tilde
  Provenance provenance;

  double predict(const Vec& x) const;
  int nonzero_terms(double tol = 1e-10) const;
};

// 41 equispaced budgets from 0 to nterms.
std::vector<double> default_m_grid(int nterms);

// Full pipeline: simulate prior, posterior mean, garrote path over
// m_grid, held-out RMSPE selection (ties toward smaller M). Independent
// M values are evaluated concurrently.
std::pair<SurrogateModel, GarrotePath> fit_surrogate(
    const BasisSpec& spec, const KernelConfig& cfg, const TrainingSet& train,
    const TrainingSet& test, const std::vector<double>& m_grid,
    int prior_points = 0 /* 0 = max(10*(N+1), 200) */);

}  // namespace gpax
