// SPDX-License-Identifier: Apache-2.0
#include "gpax/examples.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <json.hpp>

#include "gpax/rng.hpp"

namespace gpax {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- truth functions -------------------------------------------------

double bivar_gauss(const Vec& x) {
  // parameters from the bivariate examples: mu = 0, Sigma fixed
  static const Mat sigma = (Mat(2, 2) << 0.25, 0.3, 0.3, 1.0).finished();
  static const Mat sigma_inv = sigma.inverse();
  static const double norm = 1.0 / std::sqrt(2.0 * M_PI * sigma.determinant());
  return norm * std::exp(-0.5 * x.dot(sigma_inv * x));
}

double ev_cost(const Vec& x) {
  // daily cost difference, gas minus electric
  return x[0] * (x[4] / x[2] - x[3] / x[1]);
}

// Seeded squared-exponential draw on a 200-point grid, linearly
// interpolated between grid nodes.
class GpDraw {
public:
  GpDraw(double length, std::uint64_t seed) {
    const int n = 200;
    grid_.resize(n);
    for (int i = 0; i < n; ++i) grid_[i] = -1.0 + 2.0 * i / (n - 1);
    Mat k(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double d = grid_[i] - grid_[j];
        k(i, j) = std::exp(-d * d / (2.0 * length * length));
      }
    k.diagonal().array() += 1e-10;
    Eigen::LLT<Mat> llt(k);
    Rng rng(seed);
    Vec z(n);
    for (int i = 0; i < n; ++i) z[i] = rng.normal();
    values_ = llt.matrixL() * z;
  }

  double operator()(double x) const {
    x = std::clamp(x, -1.0, 1.0);
    double t = (x + 1.0) / 2.0 * (grid_.size() - 1);
    int i = std::min(static_cast<int>(t), static_cast<int>(grid_.size()) - 2);
    double frac = t - i;
    return (1.0 - frac) * values_[i] + frac * values_[i + 1];
  }

private:
  std::vector<double> grid_;
  Vec values_;
};

// EV factor levels (the published study does not state them)
const std::vector<double> kMpkwh{2.5, 3.5, 4.5};
const std::vector<double> kMpg{25.0, 35.0, 45.0};
const std::vector<double> kUtildol{0.08, 0.12, 0.16};
const std::vector<double> kGasdol{2.5, 3.5, 4.5};

double draw_distance(Rng& rng) {
  return std::clamp(rng.lognormal(3.0, 0.5), 1.0, 100.0);
}

SurrogateModel fixed_univariate_model(const Box& domain,
                                      const std::map<int, double>& coeffs) {
  int max_deg = 0;
  for (const auto& [deg, c] : coeffs) max_deg = std::max(max_deg, deg);
  SurrogateModel m;
  m.spec = BasisSpec::make(domain, max_deg, 1);
  m.omega_tilde = Vec::Zero(m.spec.num_terms());
  m.c_hat = Vec::Zero(m.spec.num_terms());
  for (int j = 0; j < m.spec.num_terms(); ++j) {
    auto it = coeffs.find(m.spec.terms[j][0]);
    if (it != coeffs.end()) {
      m.omega_tilde[j] = it->second;
      m.c_hat[j] = 1.0;
    }
  }
  m.coefficients = m.c_hat.cwiseProduct(m.omega_tilde);
  m.provenance.kernel.corr_params = KernelConfig::default_corr_params(domain);
  return m;
}

std::vector<MultiIndex> ev_terms() {
  // intercept, five main effects, ten two-factor interactions
  std::vector<MultiIndex> terms;
  terms.push_back(MultiIndex(5, 0));
  for (int i = 0; i < 5; ++i) {
    MultiIndex t(5, 0);
    t[i] = 1;
    terms.push_back(t);
  }
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      MultiIndex t(5, 0);
      t[i] = 1;
      t[j] = 1;
      terms.push_back(t);
    }
  return terms;
}

}  // namespace

std::vector<std::string> example_names() {
  return {"uni-a",  "uni-b",  "uni-c",      "uni-d",
          "bivar",  "ev",     "ctrl-a1",    "ctrl-a2",
          "ctrl-b", "ctrl-bivar", "ctrl-d", "ctrl-d-twostage"};
}

ExampleDef make_example(const std::string& name, std::uint64_t seed) {
  ExampleDef def;
  def.name = name;
  Box uni{{-1.0, 1.0}};

  auto base_seed = [&](std::uint64_t calibrated) {
    return seed != 0 ? seed : calibrated;
  };

  if (name == "uni-a") {
    def.description = "f(x) = x^2";
    def.domain = uni;
    def.truth = [](const Vec& x) { return x[0] * x[0]; };
    def.sampling = {100, 10000, 0.0, base_seed(1)};
    def.fit = {};
    def.fit.tau = 1.0;
    def.fit.sigma2 = 1e-6;
  } else if (name == "uni-b") {
    def.description = "f(x) = exp(4x), rapidly varying";
    def.domain = {{0.0, 1.0}};
    def.truth = [](const Vec& x) { return std::exp(4.0 * x[0]); };
    def.sampling = {100, 10000, 0.1, base_seed(3)};
    def.fit = {};
    def.fit.tau = 1000.0;
    def.fit.sigma2 = 0.01;
  } else if (name == "uni-c") {
    def.description = "f(x) = x sin(pi x), GP baseline comparison";
    def.domain = uni;
    def.truth = [](const Vec& x) { return x[0] * std::sin(M_PI * x[0]); };
    def.sampling = {100, 10000, 0.02, base_seed(2)};
    def.fit = {};
    def.fit.tau = 1000.0;
    def.fit.sigma2 = 4e-4;
    def.baseline = BaselineKind::gp;
  } else if (name == "uni-d") {
    def.description = "f is a seeded squared-exponential GP draw (l = 0.3)";
    def.domain = uni;
    auto draw = std::make_shared<GpDraw>(0.3, 7);
    def.truth = [draw](const Vec& x) { return (*draw)(x[0]); };
    def.sampling = {100, 10000, 0.01, base_seed(1)};
    def.fit = {};
    def.fit.tau = 1000.0;
    def.fit.sigma2 = 1e-4;
  } else if (name == "bivar") {
    def.description = "bivariate Gaussian density";
    def.domain = {{-1.0, 1.0}, {-1.0, 1.0}};
    def.truth = bivar_gauss;
    def.sampling = {200, 10000, 0.01, base_seed(1)};
    def.fit = {};
    def.fit.max_degree = 6;
    def.fit.max_interaction_order = 2;
    def.fit.tau = 1000.0;
    def.fit.sigma2 = 1e-4;
  } else if (name == "ev") {
    def.description = "electric vs gas vehicle daily cost difference";
    def.domain = {{1.0, 100.0}, {2.5, 4.5}, {25.0, 45.0}, {0.08, 0.16},
                  {2.5, 4.5}};
    def.truth = ev_cost;
    def.sampling = {810, 236520, 0.25, base_seed(1)};
    def.fit = {};
    def.fit.terms = ev_terms();
    def.fit.tau = 1000.0;
    def.fit.sigma2 = 0.0625;
    def.baseline = BaselineKind::ols;
    def.discrete_levels = true;
  } else if (name == "ctrl-a1" || name == "ctrl-a2") {
    def.description = "control of f(x) = x sin x with the published model";
    def.domain = uni;
    def.truth = [](const Vec& x) { return x[0] * std::sin(x[0]); };
    def.is_control = true;
    def.fixed_model = fixed_univariate_model(
        uni, {{0, 0.4718}, {2, 0.3722}, {4, -0.0147}});
    ControlConfig cc;
    cc.x0 = Vec::Constant(1, name == "ctrl-a1" ? 0.6 : 0.8);
    cc.y_star = name == "ctrl-a1" ? 0.5 : 0.1;
    cc.max_steps = 50;
    cc.bias_adjust = true;
    def.control = cc;
  } else if (name == "ctrl-b") {
    def.description = "control of f(x) = exp(x) with the published model";
    def.domain = uni;
    def.truth = [](const Vec& x) { return std::exp(x[0]); };
    def.is_control = true;
    def.fixed_model = fixed_univariate_model(
        uni, {{0, 1.6305}, {1, 0.8690}, {2, 0.1942}});
    ControlConfig cc;
    cc.x0 = Vec::Constant(1, -0.5);
    cc.y_star = 1.5;
    cc.bias_adjust = true;
    def.control = cc;
  } else if (name == "ctrl-bivar") {
    def.description = "control of the bivariate Gaussian density";
    def = make_example("bivar", seed);
    def.name = name;
    def.description = "control of the bivariate Gaussian density";
    def.is_control = true;
    ControlConfig cc;
    cc.x0 = Vec(2);
    cc.x0 << -0.5, 0.5;
    cc.y_star = 1.0;
    // the density peaks slightly below 1.0, so the loop stops within
    // a wider band than the univariate examples
    cc.stop_eps = 0.01;
    cc.bias_adjust = true;
    def.control = cc;
  } else if (name == "ctrl-d" || name == "ctrl-d-twostage") {
    def.description = "control of f(x) = x^3 - x/2 (non-monotone)";
    def.domain = uni;
    def.truth = [](const Vec& x) { return x[0] * x[0] * x[0] - 0.5 * x[0]; };
    def.is_control = true;
    def.fixed_model =
        fixed_univariate_model(uni, {{1, 0.0868}, {3, 0.2107}});
    ControlConfig cc;
    cc.x0 = Vec::Constant(1, -0.7);
    cc.y_star = 0.4;
    cc.max_steps = 500;
    cc.bias_adjust = true;
    cc.two_stage = (name == "ctrl-d-twostage");
    def.control = cc;
  } else {
    throw std::invalid_argument("unknown example '" + name + "'");
  }
  return def;
}

std::pair<TrainingSet, TrainingSet> generate_example(const ExampleDef& def) {
  const int d = static_cast<int>(def.domain.size());
  Rng rng(def.sampling.seed);

  TrainingSet train, test;

  if (def.discrete_levels) {
    // 10 draws per 3^4 treatment of the discrete factors
    const int n = 810;
    train.inputs.resize(n, 5);
    train.outputs.resize(n);
    int row = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          for (int e = 0; e < 3; ++e)
            for (int rep = 0; rep < 10; ++rep) {
              train.inputs(row, 0) = draw_distance(rng);
              train.inputs(row, 1) = kMpkwh[a];
              train.inputs(row, 2) = kMpg[b];
              train.inputs(row, 3) = kUtildol[c];
              train.inputs(row, 4) = kGasdol[e];
              ++row;
            }
    for (int i = 0; i < n; ++i)
      train.outputs[i] = def.truth(train.inputs.row(i).transpose()) +
                         def.sampling.noise * rng.normal();

    const int t = def.sampling.test_size;
    test.inputs.resize(t, 5);
    test.outputs.resize(t);
    for (int i = 0; i < t; ++i) {
      test.inputs(i, 0) = draw_distance(rng);
      test.inputs(i, 1) = kMpkwh[rng.index(3)];
      test.inputs(i, 2) = kMpg[rng.index(3)];
      test.inputs(i, 3) = kUtildol[rng.index(3)];
      test.inputs(i, 4) = kGasdol[rng.index(3)];
      test.outputs[i] = def.truth(test.inputs.row(i).transpose());
    }
    return {train, test};
  }

  train.inputs.resize(def.sampling.train_size, d);
  train.outputs.resize(def.sampling.train_size);
  for (int i = 0; i < def.sampling.train_size; ++i) {
    for (int j = 0; j < d; ++j)
      train.inputs(i, j) = rng.uniform(def.domain[j].lo, def.domain[j].hi);
    train.outputs[i] = def.truth(train.inputs.row(i).transpose()) +
                       def.sampling.noise * rng.normal();
  }
  test.inputs.resize(def.sampling.test_size, d);
  test.outputs.resize(def.sampling.test_size);
  for (int i = 0; i < def.sampling.test_size; ++i) {
    for (int j = 0; j < d; ++j)
      test.inputs(i, j) = rng.uniform(def.domain[j].lo, def.domain[j].hi);
    test.outputs[i] = def.truth(test.inputs.row(i).transpose());
  }
  return {train, test};
}

namespace {

BasisSpec spec_from_def(const ExampleDef& def) {
  if (def.fit.terms) return BasisSpec::with_terms(def.domain, *def.fit.terms);
  return BasisSpec::make(def.domain, def.fit.max_degree,
                         def.fit.max_interaction_order);
}

KernelConfig kernel_from_def(const ExampleDef& def) {
  KernelConfig cfg;
  cfg.tau2 = def.fit.tau * def.fit.tau;
  cfg.sigma2 = def.fit.sigma2;
  cfg.corr_params = def.fit.corr_params
                        ? *def.fit.corr_params
                        : KernelConfig::default_corr_params(def.domain);
  return cfg;
}

std::vector<double> m_grid_from_def(const ExampleDef& def, int nterms) {
  int count = std::max(def.fit.m_grid_count, 2);
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = nterms * i / double(count - 1);
  return grid;
}

// ordinary least squares on the raw main + two-factor-interaction design
double ols_baseline_rmse(const TrainingSet& train, const TrainingSet& test,
                         Vec* main_effects) {
  const int d = static_cast<int>(train.inputs.cols());
  auto build = [&](const Mat& X) {
    int p = 1 + d + d * (d - 1) / 2;
    Mat B(X.rows(), p);
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
      int col = 0;
      B(r, col++) = 1.0;
      for (int i = 0; i < d; ++i) B(r, col++) = X(r, i);
      for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) B(r, col++) = X(r, i) * X(r, j);
    }
    return B;
  };
  Mat B = build(train.inputs);
  Vec beta = (B.transpose() * B).ldlt().solve(B.transpose() * train.outputs);
  if (main_effects) *main_effects = beta.segment(1, d);
  Vec resid = test.outputs - build(test.inputs) * beta;
  return std::sqrt(resid.squaredNorm() / test.size());
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& files) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  files.push_back(path);
}

std::string curve_csv(const ExampleDef& def, const SurrogateModel& model,
                      const TrainingSet& test) {
  std::ostringstream out;
  const int d = static_cast<int>(def.domain.size());
  for (int i = 0; i < d; ++i) out << "x" << (i + 1) << ",";
  out << "y_true,y_pred\n";
  if (d == 1) {
    for (int i = 0; i < 500; ++i) {
      double x = def.domain[0].lo +
                 (def.domain[0].hi - def.domain[0].lo) * i / 499.0;
      Vec xv = Vec::Constant(1, x);
      out << fmt17(x) << "," << fmt17(def.truth(xv)) << ","
          << fmt17(model.predict(xv)) << "\n";
    }
  } else {
    int rows = std::min<int>(1000, test.size());
    for (int i = 0; i < rows; ++i) {
      Vec xv = test.inputs.row(i).transpose();
      for (int j = 0; j < d; ++j) out << fmt17(xv[j]) << ",";
      out << fmt17(test.outputs[i]) << "," << fmt17(model.predict(xv))
          << "\n";
    }
  }
  return out.str();
}

json curve_json(const ExampleDef& def, const SurrogateModel& model) {
  json rows = json::array();
  if (def.domain.size() == 1) {
    for (int i = 0; i < 500; ++i) {
      double x = def.domain[0].lo +
                 (def.domain[0].hi - def.domain[0].lo) * i / 499.0;
      Vec xv = Vec::Constant(1, x);
      rows.push_back({{"x", {x}},
                      {"y_true", def.truth(xv)},
                      {"y_pred", model.predict(xv)}});
    }
  }
  return rows;
}

json model_summary_json(const SurrogateModel& model) {
  json terms = json::array();
  for (int j = 0; j < model.spec.num_terms(); ++j) {
    if (model.c_hat[j] <= 1e-10) continue;
    terms.push_back({{"term", model.spec.terms[j]},
                     {"coefficient", model.coefficients[j]},
                     {"c", model.c_hat[j]},
                     {"omega_tilde", model.omega_tilde[j]}});
  }
  return terms;
}

}  // namespace

std::string trace_to_csv(const ControlTrace& trace) {
  std::ostringstream out;
  const int d =
      trace.steps.empty() ? 0 : static_cast<int>(trace.steps[0].x.size());
  out << "step,stage,";
  for (int i = 0; i < d; ++i) out << "x" << (i + 1) << ",";
  out << "y_hat,y_true,J,bias\n";
  for (const auto& s : trace.steps) {
    out << s.k << "," << s.stage << ",";
    for (int i = 0; i < d; ++i) out << fmt17(s.x[i]) << ",";
    out << fmt17(s.y_hat) << ","
        << (s.has_true ? fmt17(s.y_true) : std::string("")) << ","
        << fmt17(s.j) << "," << fmt17(s.bias) << "\n";
  }
  return out.str();
}

std::string trace_to_json(const ControlTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json row = {{"step", s.k},       {"stage", s.stage},
                {"y_hat", s.y_hat},  {"J", s.j},
                {"bias", s.bias}};
    json x = json::array();
    for (Eigen::Index i = 0; i < s.x.size(); ++i) x.push_back(s.x[i]);
    row["x"] = x;
    if (s.has_true) row["y_true"] = s.y_true;
    steps.push_back(row);
  }
  json j = {{"steps", steps},
            {"terminated", termination_name(trace.terminated)}};
  json cl = json::array();
  for (bool b : trace.contraction_log) cl.push_back(b);
  j["contraction_log"] = cl;
  return j.dump(2);
}

RunReport run_modeling(const ExampleDef& def, const std::string& out_dir,
                       const std::string& format) {
  auto [train, test] = generate_example(def);
  BasisSpec spec = spec_from_def(def);
  KernelConfig cfg = kernel_from_def(def);
  auto [model, path] = fit_surrogate(spec, cfg, train, test,
                                     m_grid_from_def(def, spec.num_terms()),
                                     def.fit.prior_points);

  RunReport report;
  report.example = def.name;
  report.seed = def.sampling.seed;
  report.rmspe = model.provenance.rmspe;
  report.model = model;

  if (def.baseline == BaselineKind::gp) {
    GpRegressor gp(cfg, train);
    double sse = 0.0;
    for (int i = 0; i < test.size(); ++i) {
      double e = test.outputs[i] - gp.predict(test.inputs.row(i).transpose());
      sse += e * e;
    }
    report.baseline_rmspe = std::sqrt(sse / test.size());
  } else if (def.baseline == BaselineKind::ols) {
    report.baseline_rmspe = ols_baseline_rmse(train, test, nullptr);
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::string base = out_dir + "/" + def.name;
    write_file(base + "-model.json", model_to_json(model) + "\n",
               report.files);
    if (format == "json")
      write_file(base + "-curve.json", curve_json(def, model).dump(2) + "\n",
                 report.files);
    else
      write_file(base + "-curve.csv", curve_csv(def, model, test),
                 report.files);
    write_file(base + "-report.json", report_to_json(report) + "\n",
               report.files);
  }
  return report;
}

RunReport run_control_example(const ExampleDef& def,
                              const std::string& out_dir,
                              const std::string& format) {
  if (!def.control)
    throw std::invalid_argument(def.name + ": not a control example");

  SurrogateModel model;
  if (def.fixed_model) {
    model = *def.fixed_model;
  } else {
    ExampleDef fit_def = def;
    fit_def.is_control = false;
    model = run_modeling(fit_def, "", "csv").model;
  }

  ControlTrace trace = run_control(model, def.truth, *def.control);

  RunReport report;
  report.example = def.name;
  report.seed = def.sampling.seed;
  report.model = model;
  report.trace = trace;
  report.termination = termination_name(trace.terminated);
  report.contraction = check_contraction(trace, model, def.control->w1,
                                         def.control->w2, def.control->y_star);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::string base = out_dir + "/" + def.name;
    if (format == "json")
      write_file(base + "-trace.json", trace_to_json(trace), report.files);
    else
      write_file(base + "-trace.csv", trace_to_csv(trace), report.files);
    write_file(base + "-report.json", report_to_json(report) + "\n",
               report.files);
  }
  return report;
}

RunReport run_example(const ExampleDef& def, const std::string& out_dir,
                      const std::string& format) {
  return def.is_control ? run_control_example(def, out_dir, format)
                        : run_modeling(def, out_dir, format);
}

std::string report_to_json(const RunReport& report) {
  json j;
  j["example"] = report.example;
  j["seed"] = report.seed;
  if (report.rmspe >= 0.0) j["rmspe"] = report.rmspe;
  if (report.baseline_rmspe) j["baseline_rmspe"] = *report.baseline_rmspe;
  j["model_summary"] = model_summary_json(report.model);
  j["m_chosen"] = report.model.provenance.m_chosen;
  if (!report.termination.empty()) j["terminated"] = report.termination;
  if (report.trace) {
    const auto& last = report.trace->steps.back();
    j["steps"] = last.k;
    json x = json::array();
    for (Eigen::Index i = 0; i < last.x.size(); ++i) x.push_back(last.x[i]);
    j["final_x"] = x;
    j["final_y_hat"] = last.y_hat;
    if (last.has_true) j["final_y_true"] = last.y_true;
  }
  if (report.contraction) {
    j["contraction"] = {
        {"checked", report.contraction->checked},
        {"violations", report.contraction->violations},
        {"product_defined", report.contraction->product_defined},
        {"product_criterion", report.contraction->product_criterion},
        {"monotone_decrease", report.contraction->monotone_decrease},
    };
  }
  j["files"] = report.files;
  return j.dump(2);
}

// ---- key-value config files ------------------------------------------

namespace {

std::map<std::string, std::string> parse_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t\r"));
      auto end = s.find_last_not_of(" \t\r");
      s.erase(end == std::string::npos ? 0 : end + 1);
      return s;
    };
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected 'key = value'");
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  return out;
}

bool parse_flag(const std::string& s) {
  return s == "1" || s == "true" || s == "yes" || s == "on";
}

void apply_control_keys(const std::map<std::string, std::string>& kv,
                        ControlConfig& cc, int dimension) {
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto* v = get("y_star")) cc.y_star = std::stod(*v);
  if (auto* v = get("x0")) {
    auto nums = parse_numbers(*v);
    if (static_cast<int>(nums.size()) != dimension)
      throw std::runtime_error("config: x0 must have " +
                               std::to_string(dimension) + " values");
    cc.x0 = Eigen::Map<Vec>(nums.data(), nums.size());
  }
  if (auto* v = get("w1")) cc.w1 = std::stod(*v);
  if (auto* v = get("w2")) cc.w2 = std::stod(*v);
  if (auto* v = get("w1_boost")) cc.w1_boost = std::stod(*v);
  if (auto* v = get("switch_eps")) cc.switch_eps = std::stod(*v);
  if (auto* v = get("stop_eps")) cc.stop_eps = std::stod(*v);
  if (auto* v = get("max_steps")) cc.max_steps = std::stoi(*v);
  if (auto* v = get("bias_adjust")) cc.bias_adjust = parse_flag(*v);
  if (auto* v = get("two_stage")) cc.two_stage = parse_flag(*v);
}

}  // namespace

ExampleDef example_from_config(const std::string& path, std::uint64_t seed) {
  auto kv = parse_kv(path);
  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  const std::string* base = get("example");
  if (!base)
    throw std::runtime_error(
        "config: an 'example = <name>' base definition is required");
  ExampleDef def = make_example(*base, seed);

  if (auto* v = get("domain")) {
    auto nums = parse_numbers(*v);
    if (nums.size() % 2 != 0 || nums.empty())
      throw std::runtime_error("config: domain needs lo/hi pairs");
    Box box;
    for (std::size_t i = 0; i + 1 < nums.size(); i += 2)
      box.push_back({nums[i], nums[i + 1]});
    def.domain = box;
  }
  if (auto* v = get("train_size")) def.sampling.train_size = std::stoi(*v);
  if (auto* v = get("test_size")) def.sampling.test_size = std::stoi(*v);
  if (auto* v = get("noise")) def.sampling.noise = std::stod(*v);
  if (auto* v = get("seed")) def.sampling.seed = std::stoull(*v);
  if (auto* v = get("max_degree")) {
    def.fit.max_degree = std::stoi(*v);
    def.fit.terms.reset();
  }
  if (auto* v = get("max_interaction_order")) {
    def.fit.max_interaction_order = std::stoi(*v);
    def.fit.terms.reset();
  }
  if (auto* v = get("tau")) def.fit.tau = std::stod(*v);
  if (auto* v = get("sigma2")) def.fit.sigma2 = std::stod(*v);
  if (auto* v = get("corr_params")) {
    auto nums = parse_numbers(*v);
    def.fit.corr_params = Eigen::Map<Vec>(nums.data(), nums.size());
  }
  if (auto* v = get("m_grid_count")) def.fit.m_grid_count = std::stoi(*v);
  if (auto* v = get("prior_points")) def.fit.prior_points = std::stoi(*v);

  if (def.control)
    apply_control_keys(kv, *def.control,
                       static_cast<int>(def.domain.size()));
  return def;
}

ControlConfig control_from_config(const std::string& path, int dimension) {
  auto kv = parse_kv(path);
  ControlConfig cc;
  cc.x0 = Vec::Zero(dimension);
  apply_control_keys(kv, cc, dimension);
  cc.validate();
  return cc;
}

}  // namespace gpax
