// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <functional>

#include "gpax/approx.hpp"
#include "gpax/rng.hpp"
#include "test_util.hpp"

using namespace gpax;

namespace {

KernelConfig unit_kernel(int d, double tau2 = 1.0, double sigma2 = 0.0,
                         double k = 5.0 / 4.0) {
  KernelConfig cfg;
  cfg.tau2 = tau2;
  cfg.sigma2 = sigma2;
  cfg.corr_params = Vec::Constant(d, k);
  return cfg;
}

TrainingSet uniform_samples(const std::function<double(double)>& f, int n,
                            std::uint64_t seed, double noise = 0.0) {
  Rng rng(seed);
  TrainingSet set;
  set.inputs = Mat(n, 1);
  set.outputs = Vec(n);
  for (int i = 0; i < n; ++i) {
    double x = rng.uniform(-1.0, 1.0);
    set.inputs(i, 0) = x;
    set.outputs(i) = f(x) + (noise > 0.0 ? noise * rng.normal() : 0.0);
  }
  return set;
}

}  // namespace

TEST_CASE("space_filling univariate grids") {
  Mat g = space_filling({{-1.0, 1.0}}, 3);
  CHECK(g(0, 0) == doctest::Approx(-1.0));
  CHECK(g(1, 0) == doctest::Approx(0.0));
  CHECK(g(2, 0) == doctest::Approx(1.0));
  Mat g5 = space_filling({{0.0, 1.0}}, 5);
  for (int i = 0; i < 5; ++i) CHECK(g5(i, 0) == doctest::Approx(0.25 * i));
}

TEST_CASE("space_filling factorial grid in 2-D") {
  Mat g = space_filling({{-1.0, 1.0}, {-1.0, 1.0}}, 9);
  CHECK(g.rows() == 9);
  // 3x3 grid over {-1,0,1}^2 in lexicographic order
  int row = 0;
  for (double a : {-1.0, 0.0, 1.0})
    for (double b : {-1.0, 0.0, 1.0}) {
      CHECK(g(row, 0) == doctest::Approx(a));
      CHECK(g(row, 1) == doctest::Approx(b));
      ++row;
    }
}

TEST_CASE("simulate_prior reduces to the inverse Gram when Psi is identity") {
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 3, 1);
  // enormous correlation decay makes all off-diagonals vanish
  KernelConfig cfg = unit_kernel(1, 1.0, 0.0, 1e8);
  PriorSimulation prior = simulate_prior(spec, cfg, 200);
  Mat gram = prior.phi_S.transpose() * prior.phi_S;
  Mat expect = gram.ldlt().solve(Mat::Identity(4, 4));
  CHECK((prior.sigma_matrix - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("simulate_prior constant-only closed form") {
  BasisSpec spec = BasisSpec::with_terms({{-1.0, 1.0}}, {{0}});
  KernelConfig cfg = unit_kernel(1);
  const int k = 50;
  PriorSimulation prior = simulate_prior(spec, cfg, k);
  Mat psi = correlation_matrix(cfg, prior.points_S);
  double phi0sq = 0.5;
  double expect = psi.sum() * phi0sq / std::pow(k * phi0sq, 2);
  CHECK(prior.sigma_matrix(0, 0) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("simulate_prior rejects too few points and is symmetric PSD") {
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 5, 1);
  KernelConfig cfg = unit_kernel(1);
  CHECK_THROWS_AS(simulate_prior(spec, cfg, 30), std::invalid_argument);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    int deg = 1 + static_cast<int>(rng.index(8));
    BasisSpec s = BasisSpec::make({{-1.0, 1.0}}, deg, 1);
    KernelConfig c = unit_kernel(1, 1.0, 0.0, rng.uniform(0.5, 10.0));
    PriorSimulation prior = simulate_prior(s, c, 10 * s.num_terms() + 60);
    Mat sym = prior.sigma_matrix - prior.sigma_matrix.transpose();
    CHECK(sym.cwiseAbs().maxCoeff() < 1e-9);
    Eigen::SelfAdjointEigenSolver<Mat> es(prior.sigma_matrix);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("posterior_mean is zero on zero outputs and linear in y") {
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 6, 1);
  KernelConfig cfg = unit_kernel(1, 1.0, 1e-4);
  PriorSimulation prior = simulate_prior(spec, cfg, 200);
  TrainingSet train = uniform_samples([](double x) { return x * x * x; }, 50, 2);

  TrainingSet zero = train;
  zero.outputs.setZero();
  CHECK(posterior_mean(prior, spec, cfg, zero).cwiseAbs().maxCoeff() == 0.0);

  Vec w1 = posterior_mean(prior, spec, cfg, train);
  TrainingSet scaled = train;
  scaled.outputs *= 3.5;
  Vec w2 = posterior_mean(prior, spec, cfg, scaled);
  CHECK((w2 - 3.5 * w1).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("posterior_mean interpolates with a square design") {
  // N+1 training points, sigma^2 -> 0: Phi_D omega = y
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 4, 1);
  KernelConfig cfg = unit_kernel(1, 1.0, 0.0);
  PriorSimulation prior = simulate_prior(spec, cfg, 200);
  TrainingSet train;
  train.inputs = space_filling({{-0.9, 0.9}}, 5);
  train.outputs = Vec(5);
  for (int i = 0; i < 5; ++i)
    train.outputs(i) = std::exp(train.inputs(i, 0));
  Vec omega = posterior_mean(prior, spec, cfg, train);
  Vec fitted = design_matrix(spec, train.inputs) * omega;
  CHECK((fitted - train.outputs).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("posterior_mean recovers the Legendre projection of x squared") {
  // analytic projection: a0 = 2/(3 sqrt(2)), a2 = (4/15) sqrt(5/2)
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 10, 1);
  KernelConfig cfg = unit_kernel(1, 1.0, 1e-6);
  PriorSimulation prior = simulate_prior(spec, cfg, 200);
  TrainingSet train = uniform_samples([](double x) { return x * x; }, 100, 1);
  Vec omega = posterior_mean(prior, spec, cfg, train);
  CHECK(std::abs(omega(0) - 2.0 / (3.0 * std::sqrt(2.0))) < 0.05);
  CHECK(std::abs(omega(2) - (4.0 / 15.0) * std::sqrt(2.5)) < 0.05);
  for (int j : {1, 3, 4, 5, 6, 7, 8, 9, 10})
    CHECK(std::abs(omega(j)) < 0.05);
}

TEST_CASE("garrote_solve trivial budgets and the scalar closed form") {
  Rng rng(9);
  Mat A(30, 1);
  Vec y(30);
  for (int i = 0; i < 30; ++i) {
    A(i, 0) = rng.uniform(0.1, 1.0);
    y(i) = 2.0 * A(i, 0) + 0.01 * rng.normal();
  }
  Vec omega = Vec::Ones(1);
  CHECK(garrote_solve(A, y, omega, 0.0).cwiseAbs().maxCoeff() == 0.0);

  double unconstrained = A.col(0).dot(y) / A.col(0).squaredNorm();
  Vec c_big = garrote_solve(A, y, omega, 100.0);
  CHECK(c_big(0) == doctest::Approx(unconstrained).epsilon(1e-10));
  Vec c_small = garrote_solve(A, y, omega, 0.5);
  CHECK(c_small(0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("garrote_solve fixes zero-omega columns at zero") {
  Rng rng(10);
  Mat phi(40, 3);
  Vec y(40);
  for (int i = 0; i < 40; ++i) {
    phi(i, 0) = 1.0;
    phi(i, 1) = rng.uniform(-1.0, 1.0);
    phi(i, 2) = rng.uniform(-1.0, 1.0);
    y(i) = 0.5 + phi(i, 1) + 0.1 * rng.normal();
  }
  Vec omega(3);
  omega << 0.5, 1.0, 1e-14;  // third column is dropped
  Vec c = garrote_solve(phi, y, omega, 10.0);
  CHECK(c(2) == 0.0);
  CHECK(c(0) > 0.0);
  CHECK(c(1) > 0.0);
}

TEST_CASE("garrote_solve agrees with the projected-gradient oracle") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng rng(seed);
    int n = 15 + static_cast<int>(rng.index(25));
    int q = 2 + static_cast<int>(rng.index(5));
    Mat phi(n, q);
    Vec y(n), omega(q);
    for (int j = 0; j < q; ++j) omega(j) = rng.uniform(-1.5, 1.5);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < q; ++j) phi(i, j) = rng.uniform(-1.0, 1.0);
      y(i) = rng.uniform(-2.0, 2.0);
    }
    double M = rng.uniform(0.1, 1.0 * q);
    Vec c = garrote_solve(phi, y, omega, M);

    Mat A = phi * omega.asDiagonal();
    CHECK(test::garrote_kkt_residual(A, y, c, M) <= 1e-8);
    Vec c_ref = test::garrote_projected_gradient(A, y, M);
    double obj = (y - A * c).squaredNorm();
    double obj_ref = (y - A * c_ref).squaredNorm();
    CHECK(obj <= obj_ref + 1e-6);
    CHECK(std::abs(obj - obj_ref) <= 1e-6 * (1.0 + obj_ref));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("default_m_grid spans 0..nterms in 41 steps") {
  auto grid = default_m_grid(11);
  CHECK(grid.size() == 41);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(11.0));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("fit_surrogate on x squared: path invariants and accuracy") {
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 10, 1);
  KernelConfig cfg = unit_kernel(1, 1.0, 1e-6);
  TrainingSet train = uniform_samples([](double x) { return x * x; }, 100, 1);
  TrainingSet test = uniform_samples([](double x) { return x * x; }, 2000, 2);

  auto [model, path] = fit_surrogate(spec, cfg, train, test,
                                     default_m_grid(spec.num_terms()));
  CHECK(model.provenance.rmspe <= 0.01);
  CHECK(path.solutions.front().cwiseAbs().maxCoeff() == 0.0);
  for (std::size_t i = 0; i < path.m_grid.size(); ++i) {
    CHECK(path.solutions[i].minCoeff() >= -1e-10);
    CHECK(path.solutions[i].sum() <= path.m_grid[i] + 1e-8);
    if (i > 0) CHECK(path.train_sse[i] <= path.train_sse[i - 1] + 1e-8);
  }
  // prediction matches the truth mid-domain within projection error
  Vec x(1);
  x << 0.5;
  CHECK(std::abs(model.predict(x) - 0.25) < 0.01);
  // coefficients are exactly c_hat .* omega_tilde
  CHECK((model.coefficients - model.c_hat.cwiseProduct(model.omega_tilde))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  CHECK(model.nonzero_terms() <= spec.num_terms());
}

TEST_CASE("fit_surrogate breaks RMSPE ties toward the smaller budget") {
  // constant truth: every M >= the tiny needed budget gives the same
  // RMSPE, so the first such M must win
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 2, 1);
  KernelConfig cfg = unit_kernel(1, 1.0, 1e-8);
  TrainingSet train = uniform_samples([](double) { return 1.0; }, 60, 3);
  TrainingSet test = uniform_samples([](double) { return 1.0; }, 500, 4);
  auto [model, path] = fit_surrogate(spec, cfg, train, test,
                                     {0.0, 1.0, 2.0, 3.0});
  for (std::size_t i = 0; i < path.m_grid.size(); ++i)
    if (path.test_rmspe[i] < path.test_rmspe[path.best_index] - 1e-12)
      FAIL("best_index is not the minimizer");
  for (int i = 0; i < path.best_index; ++i)
    CHECK(path.test_rmspe[i] > path.test_rmspe[path.best_index] + 1e-12);
}

TEST_CASE("fit_surrogate validates the m_grid") {
  BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 2, 1);
  KernelConfig cfg = unit_kernel(1);
  TrainingSet train = uniform_samples([](double x) { return x; }, 30, 5);
  TrainingSet test = uniform_samples([](double x) { return x; }, 30, 6);
  CHECK_THROWS_AS(fit_surrogate(spec, cfg, train, test, {1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fit_surrogate(spec, cfg, train, test, {0.0, 2.0, 2.0}),
                  std::invalid_argument);
}
