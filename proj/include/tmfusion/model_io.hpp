#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "tmfusion/tsetlin.hpp"

namespace tmfusion {

inline constexpr int kModelFormatVersion = 1;

/// Versioned model document: hyperparameters, class labels, feature width and
/// names, then every clause (class, polarity, weight, 2f automaton states) in
/// pool order. Extra top-level keys (e.g. "config") are preserved by callers
/// and ignored on load.
nlohmann::json model_to_json(const TMClassifier& model);
TMClassifier model_from_json(const nlohmann::json& doc);

nlohmann::json params_to_json(const HyperParams& params);
HyperParams params_from_json(const nlohmann::json& j);

std::string serialize_model(const TMClassifier& model);
TMClassifier deserialize_model(const std::string& text);

void save_model(const TMClassifier& model, const std::filesystem::path& path);
TMClassifier load_model(const std::filesystem::path& path);

}  // namespace tmfusion
