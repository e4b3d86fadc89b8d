// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Built-in example runs use their default seeds.
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gpax/examples.hpp"
#include "gpax/rng.hpp"
#include "test_util.hpp"

using namespace gpax;

namespace {

struct Criterion {
  std::string label;
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

int model_order(const SurrogateModel& model) {
  int order = 0;
  for (int j = 0; j < model.spec.num_terms(); ++j) {
    if (model.c_hat[j] <= 1e-10) continue;
    int total = 0;
    for (int n : model.spec.terms[j]) total += n;
    order = std::max(order, total);
  }
  return order;
}

bool even_terms_only(const SurrogateModel& model) {
  for (int j = 0; j < model.spec.num_terms(); ++j) {
    if (model.c_hat[j] <= 1e-10) continue;
    for (int n : model.spec.terms[j])
      if (n % 2 != 0) return false;
  }
  return true;
}

// monomial-basis coefficient of x_i in the expanded surrogate
Vec monomial_main_effects(const SurrogateModel& model) {
  Poly p = surrogate_poly(model);
  const int d = model.spec.dimension();
  Vec effects = Vec::Zero(d);
  for (int i = 0; i < d; ++i) {
    MultiIndex mono(d, 0);
    mono[i] = 1;
    auto it = p.coeffs.find(mono);
    if (it != p.coeffs.end()) effects(i) = it->second;
  }
  return effects;
}

// ordinary least squares on the raw main + two-factor-interaction design
Vec ols_main_effects(const TrainingSet& train) {
  const int d = static_cast<int>(train.inputs.cols());
  const int p = 1 + d + d * (d - 1) / 2;
  Mat B(train.inputs.rows(), p);
  for (Eigen::Index r = 0; r < train.inputs.rows(); ++r) {
    int col = 0;
    B(r, col++) = 1.0;
    for (int i = 0; i < d; ++i) B(r, col++) = train.inputs(r, i);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        B(r, col++) = train.inputs(r, i) * train.inputs(r, j);
  }
  Vec beta = (B.transpose() * B).ldlt().solve(B.transpose() * train.outputs);
  return beta.segment(1, d);
}

bool matches_signs(const Vec& effects, const std::vector<int>& signs) {
  for (int i = 0; i < effects.size(); ++i)
    if (effects(i) * signs[i] <= 0.0) return false;
  return true;
}

SurrogateModel random_surrogate(Rng& rng, int dim) {
  BasisSpec spec = dim == 1 ? BasisSpec::make({{-1.0, 1.0}}, 4, 1)
                            : BasisSpec::make({{-1.0, 1.0}, {-1.0, 1.0}}, 3, 2);
  SurrogateModel model;
  model.spec = spec;
  model.omega_tilde = Vec(spec.num_terms());
  for (int j = 0; j < spec.num_terms(); ++j)
    model.omega_tilde(j) = rng.uniform(-0.8, 0.8);
  model.c_hat = Vec::Ones(spec.num_terms());
  model.coefficients = model.omega_tilde;
  return model;
}

}  // namespace

int main() {
  std::vector<Criterion> results;
  auto add = [&](const std::string& label,
                 const std::function<std::pair<bool, std::string>()>& body) {
    Criterion c;
    c.label = label;
    try {
      auto [ok, detail] = body();
      c.pass = ok;
      c.detail = detail;
    } catch (const std::exception& e) {
      c.pass = false;
      c.detail = std::string("exception: ") + e.what();
    }
    results.push_back(c);
  };

  add("1  uni-a accuracy", [] {
    RunReport r = run_modeling(make_example("uni-a", 0), "", "csv");
    return std::make_pair(r.rmspe <= 0.01,
                          "rmspe=" + fmt(r.rmspe) + " (limit 0.01)");
  });

  add("2  uni-b accuracy and model order", [] {
    RunReport r = run_modeling(make_example("uni-b", 0), "", "csv");
    int order = model_order(r.model);
    bool ok = r.rmspe <= 0.05 && order <= 8;
    return std::make_pair(ok, "rmspe=" + fmt(r.rmspe) +
                                  " (limit 0.05), order=" +
                                  std::to_string(order) + " (limit 8)");
  });

  add("3  uni-c accuracy, parity, GP comparison", [] {
    RunReport r = run_modeling(make_example("uni-c", 0), "", "csv");
    bool even = even_terms_only(r.model);
    bool beats = r.baseline_rmspe && r.rmspe < *r.baseline_rmspe;
    bool ok = r.rmspe <= 0.03 && even && beats;
    return std::make_pair(
        ok, "rmspe=" + fmt(r.rmspe) + " (limit 0.03), even-only=" +
                (even ? "yes" : "no") + ", gp-baseline=" +
                (r.baseline_rmspe ? fmt(*r.baseline_rmspe) : "n/a"));
  });

  add("4  uni-d accuracy", [] {
    RunReport r = run_modeling(make_example("uni-d", 0), "", "csv");
    return std::make_pair(r.rmspe <= 0.05,
                          "rmspe=" + fmt(r.rmspe) + " (limit 0.05)");
  });

  add("5  bivar accuracy", [] {
    RunReport r = run_modeling(make_example("bivar", 0), "", "csv");
    return std::make_pair(r.rmspe <= 0.12,
                          "rmspe=" + fmt(r.rmspe) + " (limit 0.12)");
  });

  add("6  ev beats least squares with matching main-effect signs", [] {
    ExampleDef def = make_example("ev", 0);
    RunReport r = run_modeling(def, "", "csv");
    auto [train, test] = generate_example(def);
    const std::vector<int> expected = {+1, -1, +1, -1, +1};
    bool signs_model = matches_signs(monomial_main_effects(r.model), expected);
    bool signs_ols = matches_signs(ols_main_effects(train), expected);
    bool beats = r.baseline_rmspe && r.rmspe < *r.baseline_rmspe;
    bool ok = beats && signs_model && signs_ols;
    return std::make_pair(
        ok, "rmspe=" + fmt(r.rmspe) + " < ols=" +
                (r.baseline_rmspe ? fmt(*r.baseline_rmspe) : "n/a") +
                ", signs model/ols=" + (signs_model ? "yes" : "no") + "/" +
                (signs_ols ? "yes" : "no"));
  });

  add("7  setpoint tracking from both starts", [] {
    RunReport a = run_control_example(make_example("ctrl-a1", 0), "", "csv");
    RunReport b = run_control_example(make_example("ctrl-a2", 0), "", "csv");
    auto gap = [](const RunReport& r, double target) {
      const ControlStep& last = r.trace->steps.back();
      return std::abs(target - last.y_true);
    };
    double ga = gap(a, 0.5), gb = gap(b, 0.1);
    bool ok = ga <= 0.01 && a.trace->steps.back().k <= 50 && gb <= 0.01 &&
              b.trace->steps.back().k <= 50;
    return std::make_pair(ok, "|f-0.5|=" + fmt(ga) + " in " +
                                  std::to_string(a.trace->steps.back().k) +
                                  " steps, |f-0.1|=" + fmt(gb) + " in " +
                                  std::to_string(b.trace->steps.back().k) +
                                  " steps");
  });

  add("8  stall vs two-stage recovery", [] {
    RunReport single = run_control_example(make_example("ctrl-d", 0), "", "csv");
    RunReport twostage =
        run_control_example(make_example("ctrl-d-twostage", 0), "", "csv");
    double gap_single = std::abs(0.4 - single.trace->steps.back().y_true);
    double gap_two = std::abs(0.4 - twostage.trace->steps.back().y_true);
    bool ok = single.termination == "stalled" && gap_single > 0.1 &&
              twostage.termination == "converged" && gap_two <= 0.01;
    return std::make_pair(ok, "single=" + single.termination + " gap=" +
                                  fmt(gap_single) + ", two-stage=" +
                                  twostage.termination + " gap=" +
                                  fmt(gap_two));
  });

  add("9  per-step descent inequality across 20 seeded runs", [] {
    int total_checked = 0, total_violations = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      Rng rng(seed);
      int dim = seed <= 10 ? 1 : 2;
      SurrogateModel model = random_surrogate(rng, dim);
      ControlConfig cfg;
      cfg.y_star = rng.uniform(-0.5, 0.5);
      cfg.x0 = Vec(dim);
      for (int i = 0; i < dim; ++i) cfg.x0(i) = rng.uniform(-1.0, 1.0);
      cfg.w1 = rng.uniform(0.5, 5.0);
      cfg.w2 = rng.uniform(0.1, 2.0);
      cfg.max_steps = 40;
      ControlTrace trace = run_control(model, PlantFn(), cfg);
      ContractionReport rep =
          check_contraction(trace, model, cfg.w1, cfg.w2, cfg.y_star);
      total_checked += rep.checked;
      total_violations += rep.violations;
    }
    return std::make_pair(total_violations == 0 && total_checked > 0,
                          std::to_string(total_violations) + " violations in " +
                              std::to_string(total_checked) +
                              " checked steps");
  });

  add("10 oracle suites", [] {
    std::string detail;

    // (a) garrote optimality on 50 random instances
    double worst_kkt = 0.0, worst_gap = 0.0;
    for (std::uint64_t seed = 101; seed <= 150; ++seed) {
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
      worst_kkt = std::max(worst_kkt, test::garrote_kkt_residual(A, y, c, M));
      Vec c_ref = test::garrote_projected_gradient(A, y, M);
      double gap = (y - A * c).squaredNorm() - (y - A * c_ref).squaredNorm();
      worst_gap = std::max(worst_gap, gap);
    }
    bool ok_a = worst_kkt <= 1e-8 && worst_gap <= 1e-6;
    detail += "kkt=" + fmt(worst_kkt) + " gap=" + fmt(worst_gap);

    // (b) bisection bound vs direct minimization on 100 random costs
    double worst_q = 0.0;
    {
      Rng rng(200);
      for (int rep = 0; rep < 100; ++rep) {
        BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 3, 1);
        SurrogateModel model;
        model.spec = spec;
        model.omega_tilde = Vec(spec.num_terms());
        for (int j = 0; j < spec.num_terms(); ++j)
          model.omega_tilde(j) = rng.uniform(-1.0, 1.0);
        model.c_hat = Vec::Ones(spec.num_terms());
        model.coefficients = model.omega_tilde;
        Vec xp = Vec::Constant(1, rng.uniform(-1.0, 1.0));
        PolyCost cost = compose_cost(model, rng.uniform(-1.0, 1.0), xp,
                                     rng.uniform(0.5, 2.0),
                                     rng.uniform(0.0, 1.0));
        double q = sos_largest_q(cost, 1e-8);
        double jmin = minimize_univariate(cost).j;
        worst_q = std::max(worst_q, std::abs(q - jmin));
      }
    }
    bool ok_b = worst_q <= 1e-6;
    detail += ", sos-vs-min=" + fmt(worst_q);

    // (c) analytic gradient vs central differences
    double worst_grad = 0.0;
    {
      Rng rng(300);
      BasisSpec spec = BasisSpec::make({{-1.0, 1.0}, {-1.0, 1.0}}, 3, 2);
      SurrogateModel model;
      model.spec = spec;
      model.omega_tilde = Vec(spec.num_terms());
      for (int j = 0; j < spec.num_terms(); ++j)
        model.omega_tilde(j) = rng.uniform(-1.0, 1.0);
      model.c_hat = Vec::Ones(spec.num_terms());
      model.coefficients = model.omega_tilde;
      PolyCost cost = compose_cost(model, 0.3, Vec::Zero(2), 1.0, 0.5);
      const double h = 1e-6;
      for (int rep = 0; rep < 100; ++rep) {
        Vec x(2);
        x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
        Vec g = cost.poly.gradient(x);
        for (int i = 0; i < 2; ++i) {
          Vec xp = x, xm = x;
          xp(i) += h;
          xm(i) -= h;
          double fd = (cost.eval(xp) - cost.eval(xm)) / (2.0 * h);
          double rel = std::abs(g(i) - fd) / std::max(1.0, std::abs(fd));
          worst_grad = std::max(worst_grad, rel);
        }
      }
    }
    bool ok_c = worst_grad <= 1e-5;
    detail += ", grad-fd=" + fmt(worst_grad);

    // (d) posterior mean of the quadratic truth vs its analytic projection
    bool ok_d;
    {
      BasisSpec spec = BasisSpec::make({{-1.0, 1.0}}, 10, 1);
      KernelConfig cfg;
      cfg.tau2 = 1.0;
      cfg.sigma2 = 1e-6;
      cfg.corr_params = Vec::Constant(1, 5.0 / 4.0);
      PriorSimulation prior = simulate_prior(spec, cfg, 200);
      Rng rng(1);
      TrainingSet train;
      train.inputs = Mat(100, 1);
      train.outputs = Vec(100);
      for (int i = 0; i < 100; ++i) {
        double x = rng.uniform(-1.0, 1.0);
        train.inputs(i, 0) = x;
        train.outputs(i) = x * x;
      }
      Vec omega = posterior_mean(prior, spec, cfg, train);
      double e0 = std::abs(omega(0) - 2.0 / (3.0 * std::sqrt(2.0)));
      double e2 = std::abs(omega(2) - (4.0 / 15.0) * std::sqrt(2.5));
      ok_d = e0 <= 0.05 && e2 <= 0.05;
      detail += ", projection-err=" + fmt(std::max(e0, e2));
    }

    return std::make_pair(ok_a && ok_b && ok_c && ok_d, detail);
  });

  int failures = 0;
  for (const auto& c : results) {
    std::printf("%s  %s  [%s]\n", c.pass ? "PASS" : "FAIL", c.label.c_str(),
                c.detail.c_str());
    failures += !c.pass;
  }
  if (failures)
    std::printf("%d of %zu criteria failed\n", failures, results.size());
  else
    std::printf("all %zu criteria passed\n", results.size());
  return failures ? 1 : 0;
}
