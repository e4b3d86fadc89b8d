// SPDX-License-Identifier: Apache-2.0
#include "gpax/kernel.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

namespace gpax {

void KernelConfig::validate() const {
  if (!(tau2 > 0.0)) throw std::invalid_argument("KernelConfig: tau2 must be > 0");
  if (!(sigma2 >= 0.0))
    throw std::invalid_argument("KernelConfig: sigma2 must be >= 0");
  if (corr_params.size() == 0)
    throw std::invalid_argument("KernelConfig: empty corr_params");
  for (Eigen::Index i = 0; i < corr_params.size(); ++i)
    if (!(corr_params[i] > 0.0))
      throw std::invalid_argument("KernelConfig: corr_params must be > 0");
}

Vec KernelConfig::default_corr_params(const Box& domain) {
  Vec k(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    double range = domain[i].hi - domain[i].lo;
    k[static_cast<Eigen::Index>(i)] = 5.0 / (range * range);
  }
  return k;
}

void TrainingSet::validate() const {
  if (outputs.size() == 0) throw std::invalid_argument("TrainingSet: empty");
  if (inputs.rows() != outputs.size())
    throw std::invalid_argument("TrainingSet: inputs/outputs size mismatch");
}

double correlation(const KernelConfig& cfg, const Vec& x, const Vec& x2) {
  if (x.size() != cfg.corr_params.size() || x2.size() != x.size())
    throw std::invalid_argument("correlation: dimension mismatch");
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double d = x[i] - x2[i];
    s += cfg.corr_params[i] * d * d;
  }
  return std::exp(-s);
}

Mat correlation_matrix(const KernelConfig& cfg, const Mat& X) {
  const Eigen::Index n = X.rows();
  Mat psi(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    psi(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double v = correlation(cfg, X.row(i).transpose(), X.row(j).transpose());
      psi(i, j) = v;
      psi(j, i) = v;
    }
  }
  return psi;
}

namespace {

Vec solve_kernel_system(const KernelConfig& cfg, const TrainingSet& train) {
  cfg.validate();
  train.validate();
  const Eigen::Index n = train.size();
  Mat K = cfg.tau2 * correlation_matrix(cfg, train.inputs);
  K.diagonal().array() += cfg.sigma2 + 1e-10 * cfg.tau2;
  Eigen::LLT<Mat> llt(K);
  if (llt.info() != Eigen::Success) {
    Eigen::LDLT<Mat> ldlt(K);
    if (ldlt.info() != Eigen::Success)
      throw std::runtime_error("gp_predict: ill-conditioned kernel matrix");
    return ldlt.solve(train.outputs);
  }
  (void)n;
  return llt.solve(train.outputs);
}

double cross_predict(const KernelConfig& cfg, const TrainingSet& train,
                     const Vec& alpha, const Vec& x_star) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < train.size(); ++i)
    acc += correlation(cfg, x_star, train.inputs.row(i).transpose()) * alpha[i];
  return cfg.tau2 * acc;
}

}  // namespace

double gp_predict(const KernelConfig& cfg, const TrainingSet& train,
                  const Vec& x_star) {
  Vec alpha = solve_kernel_system(cfg, train);
  return cross_predict(cfg, train, alpha, x_star);
}

GpRegressor::GpRegressor(KernelConfig cfg, TrainingSet train)
    : cfg_(std::move(cfg)), train_(std::move(train)) {
  alpha_ = solve_kernel_system(cfg_, train_);
}

double GpRegressor::predict(const Vec& x_star) const {
  return cross_predict(cfg_, train_, alpha_, x_star);
}

}  // namespace gpax
