// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end for the gpax shared library. Talks to the core
// exclusively through the C API in gpax.h.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpax.h"

namespace {

int fail_with(gpax_status status) {
  nlohmann::json err = {{"error", gpax_status_name(status)},
                        {"message", gpax_last_error()}};
  std::cerr << err.dump() << std::endl;
  return static_cast<int>(status);
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { gpax_string_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gpax: sparse Legendre surrogates for Gaussian processes "
               "with predictive control"};
  app.require_subcommand(1);
  app.fallthrough();  // allow global flags after the subcommand name

  std::uint64_t seed = 0;
  std::string out_dir = "out";
  std::string format = "csv";
  std::string config_path;
  app.add_option("--seed", seed, "seed (0 = example default)");
  app.add_option("--out-dir", out_dir, "directory for emitted artifacts");
  app.add_option("--format", format, "artifact format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "key-value config file");

  auto* list_cmd = app.add_subcommand("list-examples", "list built-in examples");

  std::string example_name;
  auto* example_cmd =
      app.add_subcommand("example", "run a built-in example end to end");
  example_cmd->add_option("name", example_name, "example name")->required();

  std::string model_out = "model.json";
  auto* fit_cmd = app.add_subcommand("fit", "fit a surrogate from a config");
  fit_cmd->add_option("--model-out", model_out, "path for the fitted model");

  std::string model_path, x_text, points_path;
  auto* predict_cmd =
      app.add_subcommand("predict", "evaluate a saved surrogate");
  predict_cmd->add_option("--model", model_path, "model file")->required();
  predict_cmd->add_option("--x", x_text, "comma-separated point");
  predict_cmd->add_option("--points", points_path,
                          "CSV of points, one per row");

  std::string plant_name, trace_out;
  auto* control_cmd =
      app.add_subcommand("control", "run the predictive control loop");
  control_cmd->add_option("--model", model_path, "model file")->required();
  control_cmd->add_option("--plant", plant_name,
                          "built-in example whose truth acts as the plant");
  control_cmd->add_option("--trace-out", trace_out, "path for the trace");

  CLI11_PARSE(app, argc, argv);

  if (*list_cmd) {
    OwnedString names;
    gpax_status st = gpax_example_list(&names.ptr);
    if (st != GPAX_OK) return fail_with(st);
    for (const auto& n : nlohmann::json::parse(names.ptr))
      std::cout << n.get<std::string>() << "\n";
    return 0;
  }

  if (*example_cmd) {
    OwnedString report;
    gpax_status st = gpax_example_run(example_name.c_str(), seed,
                                      out_dir.c_str(), format.c_str(),
                                      &report.ptr, nullptr);
    if (st != GPAX_OK) return fail_with(st);
    std::cout << report.ptr << std::endl;
    return 0;
  }

  if (*fit_cmd) {
    if (config_path.empty()) {
      std::cerr << R"({"error":"invalid_argument","message":"fit requires --config"})"
                << std::endl;
      return 1;
    }
    gpax_model* model = nullptr;
    OwnedString report;
    gpax_status st = gpax_fit(config_path.c_str(), seed, &model, &report.ptr);
    if (st != GPAX_OK) return fail_with(st);
    st = gpax_model_save(model, model_out.c_str());
    gpax_model_free(model);
    if (st != GPAX_OK) return fail_with(st);
    std::cout << report.ptr << std::endl;
    return 0;
  }

  if (*predict_cmd) {
    gpax_model* model = nullptr;
    gpax_status st = gpax_model_load(model_path.c_str(), &model);
    if (st != GPAX_OK) return fail_with(st);
    int dim = 0;
    gpax_model_dimension(model, &dim);

    std::vector<std::vector<double>> points;
    if (!x_text.empty()) points.push_back(parse_point(x_text));
    if (!points_path.empty()) {
      std::ifstream in(points_path);
      if (!in) {
        gpax_model_free(model);
        std::cerr << R"({"error":"io_error","message":"cannot open points file"})"
                  << std::endl;
        return 2;
      }
      std::string line;
      while (std::getline(in, line))
        if (!line.empty()) points.push_back(parse_point(line));
    }
    if (points.empty()) {
      gpax_model_free(model);
      std::cerr << R"({"error":"invalid_argument","message":"predict requires --x or --points"})"
                << std::endl;
      return 1;
    }
    for (const auto& p : points) {
      double y = 0.0;
      st = gpax_model_predict(model, p.data(), static_cast<int>(p.size()),
                              &y);
      if (st != GPAX_OK) {
        gpax_model_free(model);
        return fail_with(st);
      }
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", y);
      std::cout << buf << "\n";
    }
    gpax_model_free(model);
    return 0;
  }

  if (*control_cmd) {
    if (config_path.empty()) {
      std::cerr << R"({"error":"invalid_argument","message":"control requires --config"})"
                << std::endl;
      return 1;
    }
    gpax_model* model = nullptr;
    gpax_status st = gpax_model_load(model_path.c_str(), &model);
    if (st != GPAX_OK) return fail_with(st);
    gpax_trace* trace = nullptr;
    st = gpax_control_run(model, config_path.c_str(), nullptr, nullptr,
                          plant_name.empty() ? nullptr : plant_name.c_str(),
                          &trace);
    gpax_model_free(model);
    if (st != GPAX_OK) return fail_with(st);

    const char* term = nullptr;
    gpax_trace_termination(trace, &term);
    OwnedString text;
    st = (format == "json") ? gpax_trace_to_json(trace, &text.ptr)
                            : gpax_trace_to_csv(trace, &text.ptr);
    if (st != GPAX_OK) {
      gpax_trace_free(trace);
      return fail_with(st);
    }
    if (!trace_out.empty()) {
      std::ofstream out(trace_out);
      out << text.ptr;
    } else {
      std::cout << text.ptr;
    }
    std::cout << "terminated: " << term << std::endl;
    gpax_trace_free(trace);
    return 0;
  }

  return 0;
}
