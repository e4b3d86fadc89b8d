// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gpax/control.hpp"
#include "gpax/model_io.hpp"

namespace gpax {

struct SamplingConfig {
  int train_size = 100;
  int test_size = 10000;
  double noise = 0.0;  // observation noise sigma added to training outputs
  std::uint64_t seed = 0;
};

struct FitConfig {
  int max_degree = 10;
  int max_interaction_order = 1;
  std::optional<std::vector<MultiIndex>> terms;  // overrides enumeration
  double tau = 1.0;
  double sigma2 = 1e-8;
  std::optional<Vec> corr_params;  // default 5/range^2 when absent
  int m_grid_count = 41;
  int prior_points = 0;  // 0 = library default
};

enum class BaselineKind { none, gp, ols };

struct ExampleDef {
  std::string name;
  std::string description;
  Box domain;
  PlantFn truth;  // deterministic for a given def (GP draw is pre-seeded)
  SamplingConfig sampling;
  FitConfig fit;
  BaselineKind baseline = BaselineKind::none;
  bool is_control = false;
  std::optional<ControlConfig> control;
  // Control examples run against a fixed published model when present;
  // otherwise the surrogate is fitted first.
  std::optional<SurrogateModel> fixed_model;
  bool discrete_levels = false;  // EV-style factorial sampling
};

struct RunReport {
  std::string example;
  std::uint64_t seed = 0;
  double rmspe = -1.0;
  std::optional<double> baseline_rmspe;
  SurrogateModel model;
  std::optional<ControlTrace> trace;
  std::optional<ContractionReport> contraction;
  std::string termination;  // control runs only
  std::vector<std::string> files;
};

std::vector<std::string> example_names();

// Fully specified, seeded definition. The seed offsets the def's base
// seed so --seed reproduces or varies a whole run. Throws on unknown
// names.
ExampleDef make_example(const std::string& name, std::uint64_t seed);

// Seeded data generation: uniform sampling plus noise, or the EV
// factorial design (10 draws per 3^4 treatment, lognormal distance).
std::pair<TrainingSet, TrainingSet> generate_example(const ExampleDef& def);

// format: "csv" or "json" for emitted curve/trace artifacts; out_dir ""
// suppresses file output.
RunReport run_modeling(const ExampleDef& def, const std::string& out_dir,
                       const std::string& format);
RunReport run_control_example(const ExampleDef& def,
                              const std::string& out_dir,
                              const std::string& format);
RunReport run_example(const ExampleDef& def, const std::string& out_dir,
                      const std::string& format);

std::string report_to_json(const RunReport& report);

// Trace serialization used by both the CLI and the C API.
std::string trace_to_csv(const ControlTrace& trace);
std::string trace_to_json(const ControlTrace& trace);

// Key-value config files ("key = value", '#' comments). Recognized keys
// mirror ExampleDef fields; "example" selects a base definition.
ExampleDef example_from_config(const std::string& path, std::uint64_t seed);
ControlConfig control_from_config(const std::string& path, int dimension);

}  // namespace gpax
