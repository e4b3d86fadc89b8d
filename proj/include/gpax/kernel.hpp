// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gpax/basis.hpp"

namespace gpax {

// Squared-exponential correlation: psi(x,x') = exp(-sum_i k_i (x_i-x'_i)^2).
struct KernelConfig {
  double tau2 = 1.0;    // process variance, > 0
  double sigma2 = 0.0;  // noise variance, >= 0
  Vec corr_params;      // k_i > 0, one per input dimension

  void validate() const;

  // Default k_i = 5 / range_i^2 for each dimension of the box.
  static Vec default_corr_params(const Box& domain);
};

struct TrainingSet {
  Mat inputs;   // n x d
  Vec outputs;  // n

  int size() const { return static_cast<int>(outputs.size()); }
  void validate() const;
};

double correlation(const KernelConfig& cfg, const Vec& x, const Vec& x2);

// Psi_ij = correlation(X_i, X_j); symmetric with unit diagonal.
Mat correlation_matrix(const KernelConfig& cfg, const Mat& X);

// Exact GP posterior mean at one point: tau2 psi(x*,X)^T (tau2 Psi +
// sigma2 I)^-1 y, via LLT with a fixed 1e-10*tau2 diagonal jitter.
double gp_predict(const KernelConfig& cfg, const TrainingSet& train,
                  const Vec& x_star);

// Same regressor with the factorization cached, for batch prediction.
class GpRegressor {
public:
  GpRegressor(KernelConfig cfg, TrainingSet train);
  double predict(const Vec& x_star) const;

private:
  KernelConfig cfg_;
  TrainingSet train_;
  Vec alpha_;  // (tau2 Psi + sigma2 I)^-1 y
};

}  // namespace gpax
