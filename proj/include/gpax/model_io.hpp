// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "gpax/approx.hpp"

namespace gpax {

// JSON model file, format "gpax-model" version 1. Doubles round-trip
// bit-exactly. Parse failures throw std::runtime_error with field
// context; a version mismatch is reported explicitly.
void save_model(const SurrogateModel& model, const std::string& path);
SurrogateModel load_model(const std::string& path);

std::string model_to_json(const SurrogateModel& model);
SurrogateModel model_from_json(const std::string& text);

}  // namespace gpax
