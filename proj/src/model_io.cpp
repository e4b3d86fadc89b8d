// SPDX-License-Identifier: Apache-2.0
#include "gpax/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace gpax {

namespace {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& a, const char* field) {
  if (!a.is_array())
    throw std::runtime_error(std::string("model file: field '") + field +
                             "' is not an array");
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

}  // namespace

std::string model_to_json(const SurrogateModel& model) {
  json j;
  j["format"] = "gpax-model";
  j["version"] = 1;

  json domain = json::array();
  for (const auto& iv : model.spec.domain)
    domain.push_back(json::array({iv.lo, iv.hi}));
  j["basis"] = {
      {"domain", domain},
      {"terms", model.spec.terms},
      {"max_degree", model.spec.max_degree},
      {"max_interaction_order", model.spec.max_interaction_order},
  };
  j["omega_tilde"] = vec_to_json(model.omega_tilde);
  j["c_hat"] = vec_to_json(model.c_hat);
  j["coefficients"] = vec_to_json(model.coefficients);
  j["provenance"] = {
      {"tau2", model.provenance.kernel.tau2},
      {"sigma2", model.provenance.kernel.sigma2},
      {"corr_params", vec_to_json(model.provenance.kernel.corr_params)},
      {"m_chosen", model.provenance.m_chosen},
      {"rmspe", model.provenance.rmspe},
      {"prior_points", model.provenance.prior_points},
  };
  return j.dump(2);
}

SurrogateModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("model file: ") + e.what());
  }
  if (j.value("format", "") != std::string("gpax-model"))
    throw std::runtime_error("model file: missing or wrong 'format' field");
  if (!j.contains("version") || !j["version"].is_number_integer())
    throw std::runtime_error("model file: missing 'version' field");
  int version = j["version"].get<int>();
  if (version != 1)
    throw std::runtime_error("model file: unsupported version " +
                             std::to_string(version) + " (supported: 1)");

  SurrogateModel model;
  try {
    const json& basis = j.at("basis");
    Box domain;
    for (const auto& iv : basis.at("domain"))
      domain.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    std::vector<MultiIndex> terms;
    for (const auto& t : basis.at("terms"))
      terms.push_back(t.get<MultiIndex>());
    model.spec = BasisSpec::with_terms(std::move(domain), std::move(terms));

    model.omega_tilde = vec_from_json(j.at("omega_tilde"), "omega_tilde");
    model.c_hat = vec_from_json(j.at("c_hat"), "c_hat");
    model.coefficients = vec_from_json(j.at("coefficients"), "coefficients");

    const json& prov = j.at("provenance");
    model.provenance.kernel.tau2 = prov.at("tau2").get<double>();
    model.provenance.kernel.sigma2 = prov.at("sigma2").get<double>();
    model.provenance.kernel.corr_params =
        vec_from_json(prov.at("corr_params"), "corr_params");
    model.provenance.m_chosen = prov.at("m_chosen").get<double>();
    model.provenance.rmspe = prov.at("rmspe").get<double>();
    model.provenance.prior_points = prov.value("prior_points", 0);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("model file: ") + e.what());
  }

  const int p = model.spec.num_terms();
  if (model.omega_tilde.size() != p || model.c_hat.size() != p ||
      model.coefficients.size() != p)
    throw std::runtime_error(
        "model file: coefficient arrays do not match the term count");
  return model;
}

void save_model(const SurrogateModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_model: cannot open " + path);
  out << model_to_json(model) << '\n';
  if (!out) throw std::runtime_error("save_model: write failed for " + path);
}

SurrogateModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_model: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json(text);
}

}  // namespace gpax
