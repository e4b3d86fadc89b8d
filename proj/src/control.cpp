// SPDX-License-Identifier: Apache-2.0
#include "gpax/control.hpp"

#include <cmath>
#include <stdexcept>

namespace gpax {

void ControlConfig::validate() const {
  if (!(w1 > 0.0)) throw std::invalid_argument("ControlConfig: w1 must be > 0");
  if (!(w2 >= 0.0)) throw std::invalid_argument("ControlConfig: w2 must be >= 0");
  if (max_steps < 1)
    throw std::invalid_argument("ControlConfig: max_steps must be >= 1");
  if (!(switch_eps > stop_eps && stop_eps > 0.0))
    throw std::invalid_argument(
        "ControlConfig: need switch_eps > stop_eps > 0");
  if (x0.size() == 0) throw std::invalid_argument("ControlConfig: empty x0");
  if (two_stage && !(w1_boost > 0.0))
    throw std::invalid_argument("ControlConfig: w1_boost must be > 0");
}

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::max_steps: return "max_steps";
    case Termination::stalled: return "stalled";
  }
  return "unknown";
}

namespace {

int constant_term_index(const BasisSpec& spec) {
  for (int j = 0; j < spec.num_terms(); ++j) {
    bool all_zero = true;
    for (int n : spec.terms[j]) all_zero &= (n == 0);
    if (all_zero) return j;
  }
  return -1;
}

}  // namespace

SurrogateModel bias_adjust(const SurrogateModel& model, const Vec& x_k,
                           double y_observed) {
  int c0 = constant_term_index(model.spec);
  if (c0 < 0)
    throw std::invalid_argument(
        "bias_adjust: basis has no constant term to shift");
  double phi0 = basis_vector(model.spec, x_k)[c0];
  SurrogateModel adjusted = model;
  adjusted.coefficients[c0] += (y_observed - model.predict(x_k)) / phi0;
  return adjusted;
}

ControlStep control_step(const ControlState& state, const PlantFn& plant,
                         const ControlConfig& cfg, ControlState* next) {
  double w1_eff = (state.stage == 1) ? cfg.w1_boost : cfg.w1;
  PolyCost cost = compose_cost(state.model, cfg.y_star, state.x, w1_eff,
                               cfg.w2);
  MinResult opt = minimize_cost(cost);

  ControlStep step;
  step.x = opt.x;
  step.j = opt.j;
  step.j_at_prev = cost.eval(state.x);
  step.stage = state.stage;
  step.bias = state.bias;
  step.y_hat = state.model.predict(opt.x);
  if (plant) {
    step.y_true = plant(opt.x);
    step.has_true = true;
  }
  if (next) {
    next->x = opt.x;
    next->stage = state.stage;
    next->bias = state.bias;
    next->model = state.model;
  }
  return step;
}

ControlTrace run_control(const SurrogateModel& model, const PlantFn& plant,
                         const ControlConfig& cfg) {
  cfg.validate();
  if (cfg.x0.size() != model.spec.dimension())
    throw std::invalid_argument("run_control: x0 dimension mismatch");

  int c0 = constant_term_index(model.spec);

  ControlTrace trace;
  ControlState state;
  state.x = cfg.x0;
  state.stage = cfg.two_stage ? 1 : 2;
  state.bias = 0.0;
  state.model = model;

  ControlStep init;
  init.k = 0;
  init.x = cfg.x0;
  init.stage = state.stage;
  init.y_hat = model.predict(cfg.x0);
  if (plant) {
    init.y_true = plant(cfg.x0);
    init.has_true = true;
  }
  trace.steps.push_back(init);

  trace.terminated = Termination::max_steps;
  for (int k = 1; k <= cfg.max_steps; ++k) {
    const ControlStep& prev = trace.steps.back();

    if (cfg.bias_adjust && prev.has_true) {
      state.model = bias_adjust(state.model, prev.x, prev.y_true);
      if (c0 >= 0)
        state.bias = state.model.coefficients[c0] - model.coefficients[c0];
    }
    if (cfg.two_stage && state.stage == 1 &&
        std::abs(cfg.y_star - state.model.predict(prev.x)) < cfg.switch_eps)
      state.stage = 2;

    ControlStep step = control_step(state, plant, cfg, &state);
    step.k = k;
    bool same_stage = (step.stage == prev.stage);
    trace.contraction_log.push_back(!same_stage ||
                                    step.j <= step.j_at_prev + 1e-9);
    double dx = (step.x - prev.x).norm();
    trace.steps.push_back(step);

    double driver = plant ? step.y_true : step.y_hat;
    if (std::abs(cfg.y_star - driver) <= cfg.stop_eps) {
      trace.terminated = Termination::converged;
      break;
    }
    if (dx < 1e-10) {
      trace.terminated = Termination::stalled;
      break;
    }
  }
  return trace;
}

ContractionReport check_contraction(const ControlTrace& trace,
                                    const SurrogateModel& model, double w1,
                                    double w2, double y_star) {
  ContractionReport report;
  report.product_defined = (w2 > 0.0);
  report.product_criterion = 1.0;

  Poly yhat = surrogate_poly(model);
  double prev_gap = -1.0;
  for (std::size_t i = 1; i < trace.steps.size(); ++i) {
    const ControlStep& a = trace.steps[i - 1];
    const ControlStep& b = trace.steps[i];
    if (a.stage == b.stage) {
      ++report.checked;
      double lhs = w1 * std::pow(y_star - b.y_hat, 2) +
                   w2 * (b.x - a.x).squaredNorm();
      double rhs = w1 * std::pow(y_star - a.y_hat, 2);
      if (lhs > rhs + 1e-9) ++report.violations;
    }
    if (report.product_defined) {
      double slope2 = yhat.gradient(b.x).squaredNorm();
      report.product_criterion *= 1.0 + (w1 / w2) * slope2;
    }
    double gap = std::abs(y_star - b.y_hat);
    if (prev_gap >= 0.0 && gap > prev_gap + 1e-12)
      report.monotone_decrease = false;
    prev_gap = gap;
  }
  return report;
}

}  // namespace gpax
