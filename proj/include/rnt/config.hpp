#pragma once

#include <filesystem>

#include <json.hpp>

#include "rnt/pipeline.hpp"

namespace rnt {

// Every PipelineConfig field, nested "vectorizer" object included.
nlohmann::json to_json(const PipelineConfig& cfg);

// Overlays the keys present in `j` onto `base` and validates the result.
// Throws ConfigError whose message starts with the offending field path
// (e.g. "vectorizer.n_max: expected an integer").
PipelineConfig config_from_json(const nlohmann::json& j, PipelineConfig base = {});

// Reads and parses a JSON config file. Missing file -> MissingArtifact;
// malformed JSON -> ConfigError.
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

}  // namespace rnt
