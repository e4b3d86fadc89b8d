// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>

#include "gpax/polyopt.hpp"

namespace gpax {

// Access to the true system output at a queried input.
using PlantFn = std::function<double(const Vec&)>;

struct ControlConfig {
  double y_star = 0.0;
  Vec x0;
  double w1 = 1.0;
  double w2 = 1.0;
  double w1_boost = 50.0;    // stage-1 weight in two-stage mode
  double switch_eps = 0.05;  // |y* - yhat| threshold to leave stage 1
  int max_steps = 100;
  double stop_eps = 1e-3;  // |y* - f(x)| stopping tolerance
  bool bias_adjust = false;
  bool two_stage = false;

  void validate() const;
};

enum class Termination { converged, max_steps, stalled };

struct ControlStep {
  int k = 0;
  Vec x;
  double y_hat = 0.0;   // model prediction at x, under the step's model
  double y_true = 0.0;  // plant output at x (0 when no probe)
  bool has_true = false;
  double j = 0.0;          // optimal cost of the step's problem
  double j_at_prev = 0.0;  // that problem's cost evaluated at x_{k-1}
  int stage = 1;           // 1 = boosted w1, 2 = standard (always 2 if not two_stage)
  double bias = 0.0;       // constant-coefficient offset in effect
};

struct ControlTrace {
  std::vector<ControlStep> steps;  // steps[0] is the initial state, no solve
  Termination terminated = Termination::max_steps;
  std::vector<bool> contraction_log;  // per solved step, same-stage descent
};

const char* termination_name(Termination t);

// Shifts only the constant coefficient so the model reproduces
// y_observed at x_k exactly.
SurrogateModel bias_adjust(const SurrogateModel& model, const Vec& x_k,
                           double y_observed);

struct ControlState {
  Vec x;
  int stage = 1;
  double bias = 0.0;
  SurrogateModel model;  // bias-adjusted working copy
};

// One predictive-control step: compose the cost at the current stage
// weights, minimize it, move there, record predictions.
ControlStep control_step(const ControlState& state, const PlantFn& plant,
                         const ControlConfig& cfg, ControlState* next);

// Full loop. plant may be empty; then stopping tests |y* - yhat|.
ControlTrace run_control(const SurrogateModel& model, const PlantFn& plant,
                         const ControlConfig& cfg);

struct ContractionReport {
  int checked = 0;
  int violations = 0;
  bool product_defined = false;  // false when w2 = 0
  double product_criterion = 0.0;
  bool monotone_decrease = true;  // |y* - yhat_k| nonincreasing
};

// Verifies the per-step descent inequality and evaluates the divergence
// product prod(1 + (w1/w2) yhat'_k^2) over the trace.
ContractionReport check_contraction(const ControlTrace& trace,
                                    const SurrogateModel& model, double w1,
                                    double w2, double y_star);

}  // namespace gpax
