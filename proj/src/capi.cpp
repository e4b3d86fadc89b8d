// SPDX-License-Identifier: Apache-2.0
#include "gpax.h"

#include <cstring>
#include <exception>
#include <string>

#include <json.hpp>

#include "gpax/examples.hpp"

struct gpax_model {
  gpax::SurrogateModel impl;
};

struct gpax_trace {
  gpax::ControlTrace impl;
};

namespace {

thread_local std::string g_last_error;

gpax_status fail(gpax_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// maps C++ exceptions onto status codes
gpax_status run_guarded(const std::function<gpax_status()>& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    return fail(GPAX_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    std::string what = e.what();
    if (what.find("model file") != std::string::npos ||
        what.find("config") != std::string::npos)
      return fail(GPAX_ERR_PARSE, what);
    if (what.find("cannot open") != std::string::npos ||
        what.find("cannot write") != std::string::npos ||
        what.find("write failed") != std::string::npos)
      return fail(GPAX_ERR_IO, what);
    return fail(GPAX_ERR_NUMERIC, what);
  } catch (const std::exception& e) {
    return fail(GPAX_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(GPAX_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* gpax_status_name(gpax_status status) {
  switch (status) {
    case GPAX_OK: return "ok";
    case GPAX_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case GPAX_ERR_IO: return "io_error";
    case GPAX_ERR_PARSE: return "parse_error";
    case GPAX_ERR_NUMERIC: return "numeric_error";
    case GPAX_ERR_UNKNOWN_EXAMPLE: return "unknown_example";
    case GPAX_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* gpax_last_error(void) { return g_last_error.c_str(); }

void gpax_string_free(char* s) { std::free(s); }

gpax_status gpax_model_load(const char* path, gpax_model** out) {
  if (!path || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  return run_guarded([&] {
    auto* handle = new gpax_model{gpax::load_model(path)};
    *out = handle;
    return GPAX_OK;
  });
}

gpax_status gpax_model_save(const gpax_model* model, const char* path) {
  if (!model || !path)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  return run_guarded([&] {
    gpax::save_model(model->impl, path);
    return GPAX_OK;
  });
}

gpax_status gpax_model_from_json(const char* json, gpax_model** out) {
  if (!json || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  return run_guarded([&] {
    *out = new gpax_model{gpax::model_from_json(json)};
    return GPAX_OK;
  });
}

gpax_status gpax_model_to_json(const gpax_model* model, char** out) {
  if (!model || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  return run_guarded([&] {
    *out = dup_string(gpax::model_to_json(model->impl));
    return GPAX_OK;
  });
}

void gpax_model_free(gpax_model* model) { delete model; }

gpax_status gpax_model_dimension(const gpax_model* model, int* out) {
  if (!model || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  *out = model->impl.spec.dimension();
  return GPAX_OK;
}

gpax_status gpax_model_num_terms(const gpax_model* model, int* out) {
  if (!model || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  *out = model->impl.spec.num_terms();
  return GPAX_OK;
}

gpax_status gpax_model_predict(const gpax_model* model, const double* x,
                               int dim, double* y_out) {
  if (!model || !x || !y_out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  if (dim != model->impl.spec.dimension())
    return fail(GPAX_ERR_INVALID_ARGUMENT,
                "point dimension does not match the model");
  return run_guarded([&] {
    gpax::Vec xv = Eigen::Map<const gpax::Vec>(x, dim);
    *y_out = model->impl.predict(xv);
    return GPAX_OK;
  });
}

gpax_status gpax_fit(const char* config_path, uint64_t seed,
                     gpax_model** model_out, char** report_json) {
  if (!config_path || !model_out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  return run_guarded([&] {
    gpax::ExampleDef def = gpax::example_from_config(config_path, seed);
    def.is_control = false;
    gpax::RunReport report = gpax::run_modeling(def, "", "csv");
    *model_out = new gpax_model{report.model};
    if (report_json) *report_json = dup_string(gpax::report_to_json(report));
    return GPAX_OK;
  });
}

gpax_status gpax_control_run(const gpax_model* model, const char* config_path,
                             gpax_plant_fn plant, void* user,
                             const char* plant_example,
                             gpax_trace** trace_out) {
  if (!model || !config_path || !trace_out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  if (plant && plant_example)
    return fail(GPAX_ERR_INVALID_ARGUMENT,
                "pass either a plant callback or a plant example, not both");
  return run_guarded([&] {
    int dim = model->impl.spec.dimension();
    gpax::ControlConfig cc = gpax::control_from_config(config_path, dim);
    gpax::PlantFn probe;
    if (plant) {
      probe = [plant, user, dim](const gpax::Vec& x) {
        return plant(x.data(), dim, user);
      };
    } else if (plant_example) {
      gpax::ExampleDef def = gpax::make_example(plant_example, 0);
      if (static_cast<int>(def.domain.size()) != dim)
        return fail(GPAX_ERR_INVALID_ARGUMENT,
                    "plant example dimension does not match the model");
      probe = def.truth;
    }
    *trace_out = new gpax_trace{gpax::run_control(model->impl, probe, cc)};
    return GPAX_OK;
  });
}

gpax_status gpax_trace_num_steps(const gpax_trace* trace, int* out) {
  if (!trace || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  *out = static_cast<int>(trace->impl.steps.size());
  return GPAX_OK;
}

gpax_status gpax_trace_termination(const gpax_trace* trace, const char** out) {
  if (!trace || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  *out = gpax::termination_name(trace->impl.terminated);
  return GPAX_OK;
}

gpax_status gpax_trace_to_csv(const gpax_trace* trace, char** out) {
  if (!trace || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  return run_guarded([&] {
    *out = dup_string(gpax::trace_to_csv(trace->impl));
    return GPAX_OK;
  });
}

gpax_status gpax_trace_to_json(const gpax_trace* trace, char** out) {
  if (!trace || !out)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  return run_guarded([&] {
    *out = dup_string(gpax::trace_to_json(trace->impl));
    return GPAX_OK;
  });
}

void gpax_trace_free(gpax_trace* trace) { delete trace; }

gpax_status gpax_example_list(char** names_json) {
  if (!names_json) return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  nlohmann::json names = gpax::example_names();
  *names_json = dup_string(names.dump());
  return GPAX_OK;
}

gpax_status gpax_example_run(const char* name, uint64_t seed,
                             const char* out_dir, const char* format,
                             char** report_json, gpax_model** model_out) {
  if (!name || !report_json)
    return fail(GPAX_ERR_INVALID_ARGUMENT, "null argument");
  gpax_status st = run_guarded([&] {
    gpax::ExampleDef def = gpax::make_example(name, seed);
    gpax::RunReport report = gpax::run_example(
        def, out_dir ? out_dir : "", format ? format : "csv");
    *report_json = dup_string(gpax::report_to_json(report));
    if (model_out) *model_out = new gpax_model{report.model};
    return GPAX_OK;
  });
  if (st == GPAX_ERR_INVALID_ARGUMENT &&
      g_last_error.find("unknown example") != std::string::npos)
    return GPAX_ERR_UNKNOWN_EXAMPLE;
  return st;
}

}  // extern "C"
