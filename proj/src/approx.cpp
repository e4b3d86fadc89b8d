// SPDX-License-Identifier: Apache-2.0
#include "gpax/approx.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/SVD>

namespace gpax {

Mat space_filling(const Box& domain, int k) {
  const int d = static_cast<int>(domain.size());
  if (d < 1) throw std::invalid_argument("space_filling: empty domain");
  if (k < 2) throw std::invalid_argument("space_filling: k must be >= 2");

  if (d == 1) {
    Mat pts(k, 1);
    for (int i = 0; i < k; ++i)
      pts(i, 0) = domain[0].lo +
                  (domain[0].hi - domain[0].lo) * i / double(k - 1);
    return pts;
  }

  // full factorial grid, truncated to the first k points lexicographically
  int levels = static_cast<int>(std::ceil(std::pow(double(k), 1.0 / d)));
  levels = std::max(levels, 2);
  Mat pts(k, d);
  std::vector<int> idx(d, 0);
  for (int row = 0; row < k; ++row) {
    for (int i = 0; i < d; ++i)
      pts(row, i) = domain[i].lo +
                    (domain[i].hi - domain[i].lo) * idx[i] / double(levels - 1);
    for (int i = d - 1; i >= 0; --i) {
      if (++idx[i] < levels) break;
      idx[i] = 0;
    }
  }
  return pts;
}

PriorSimulation simulate_prior(const BasisSpec& spec, const KernelConfig& cfg,
                               int k, int min_k_factor) {
  spec.validate();
  cfg.validate();
  const int p = spec.num_terms();
  if (k < min_k_factor * p)
    throw std::invalid_argument(
        "simulate_prior: k must be at least " +
        std::to_string(min_k_factor) + "*(N+1) space-filling points");

  PriorSimulation prior;
  prior.points_S = space_filling(spec.domain, k);
  prior.phi_S = design_matrix(spec, prior.points_S);

  Mat gram = prior.phi_S.transpose() * prior.phi_S;
  Eigen::JacobiSVD<Mat> svd(gram);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  double smax = svd.singularValues()(0);
  prior.gram_condition = (smin > 0.0) ? smax / smin
                                      : std::numeric_limits<double>::infinity();
  if (!(prior.gram_condition < 1e12))
    throw std::runtime_error(
        "simulate_prior: Gram matrix condition number above 1e12; use a "
        "smaller basis or more space-filling points");

  Mat psi = correlation_matrix(cfg, prior.points_S);
  Eigen::LDLT<Mat> ldlt(gram);
  // Sigma = G^-1 Phi^T Psi Phi G^-1 via two solves
  Mat inner = prior.phi_S.transpose() * (psi * prior.phi_S);
  Mat half = ldlt.solve(inner);
  prior.sigma_matrix = ldlt.solve(half.transpose()).transpose();
  // symmetrize away the solve asymmetry
  prior.sigma_matrix =
      0.5 * (prior.sigma_matrix + prior.sigma_matrix.transpose()).eval();
  return prior;
}

Vec posterior_mean(const PriorSimulation& prior, const BasisSpec& spec,
                   const KernelConfig& cfg, const TrainingSet& train) {
  train.validate();
  if (train.inputs.cols() != spec.dimension())
    throw std::invalid_argument("posterior_mean: input dimension mismatch");
  const Eigen::Index n = train.size();

  Mat phi_d = design_matrix(spec, train.inputs);
  Mat G = cfg.tau2 * phi_d * prior.sigma_matrix * phi_d.transpose();
  G.diagonal().array() += cfg.sigma2 + 1e-10 * cfg.tau2;
  Eigen::LDLT<Mat> ldlt(G);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error(
        "posterior_mean: ill-conditioned system after jitter (n=" +
        std::to_string(n) + ")");
  Vec alpha = ldlt.solve(train.outputs);
  return cfg.tau2 * prior.sigma_matrix * (phi_d.transpose() * alpha);
}

double SurrogateModel::predict(const Vec& x) const {
  return coefficients.dot(basis_vector(spec, x));
}

int SurrogateModel::nonzero_terms(double tol) const {
  int count = 0;
  for (Eigen::Index i = 0; i < c_hat.size(); ++i)
    if (c_hat[i] > tol) ++count;
  return count;
}

std::vector<double> default_m_grid(int nterms) {
  std::vector<double> grid(41);
  for (int i = 0; i < 41; ++i) grid[i] = nterms * i / 40.0;
  return grid;
}

std::pair<SurrogateModel, GarrotePath> fit_surrogate(
    const BasisSpec& spec, const KernelConfig& cfg, const TrainingSet& train,
    const TrainingSet& test, const std::vector<double>& m_grid,
    int prior_points) {
  test.validate();
  if (m_grid.empty() || m_grid.front() != 0.0)
    throw std::invalid_argument("fit_surrogate: m_grid must start at 0");
  for (std::size_t i = 1; i < m_grid.size(); ++i)
    if (!(m_grid[i] > m_grid[i - 1]))
      throw std::invalid_argument("fit_surrogate: m_grid must be increasing");

  const int p = spec.num_terms();
  int k = prior_points > 0 ? prior_points : std::max(10 * p, 200);
  PriorSimulation prior = simulate_prior(spec, cfg, k);
  Vec omega = posterior_mean(prior, spec, cfg, train);

  Mat phi_train = design_matrix(spec, train.inputs);
  Mat phi_test = design_matrix(spec, test.inputs);

  GarrotePath path;
  path.m_grid = m_grid;
  path.solutions.resize(m_grid.size());
  path.train_sse.resize(m_grid.size());
  path.test_rmspe.resize(m_grid.size());

  // independent budgets solved concurrently
  auto solve_one = [&](std::size_t i) {
    Vec c = garrote_solve(phi_train, train.outputs, omega, m_grid[i]);
    Vec coef = c.cwiseProduct(omega);
    path.train_sse[i] = (train.outputs - phi_train * coef).squaredNorm();
    Vec resid = test.outputs - phi_test * coef;
    path.test_rmspe[i] = std::sqrt(resid.squaredNorm() / test.size());
    path.solutions[i] = std::move(c);
  };
  std::vector<std::future<void>> jobs;
  jobs.reserve(m_grid.size());
  for (std::size_t i = 0; i < m_grid.size(); ++i)
    jobs.push_back(std::async(std::launch::async | std::launch::deferred,
                              solve_one, i));
  for (auto& j : jobs) j.get();

  path.best_index = 0;
  for (std::size_t i = 1; i < m_grid.size(); ++i)
    if (path.test_rmspe[i] < path.test_rmspe[path.best_index] - 1e-12)
      path.best_index = static_cast<int>(i);  // ties keep the smaller M

  SurrogateModel model;
  model.spec = spec;
  model.omega_tilde = omega;
  model.c_hat = path.solutions[path.best_index];
  model.coefficients = model.c_hat.cwiseProduct(omega);
  model.provenance.kernel = cfg;
  model.provenance.m_chosen = m_grid[path.best_index];
  model.provenance.rmspe = path.test_rmspe[path.best_index];
  model.provenance.prior_points = k;
  return {std::move(model), std::move(path)};
}

}  // namespace gpax
