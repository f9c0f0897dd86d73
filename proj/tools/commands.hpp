#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rnt/corpus.hpp"

namespace rnt::cli {

inline constexpr const char* kVersion = "0.1.0";

struct PrepareArgs {
  std::string input;
  std::string format;
  std::string test_file;
  std::string test_format;
  double labeled_fraction = 0.1;
  double dev_fraction = 0.1;
  double test_fraction = 0.0;
  double noise_rate = 0.0;
  double perturb_dev_rate = 0.0;
  double perturb_word_rate = 0.3;
  std::uint64_t seed = 1;
  std::string out;
};

struct RunArgs {
  std::string split;
  std::string variant;
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out;
  // Flag overrides of config values, as JSON; applied after the config file.
  nlohmann::json overrides = nlohmann::json::object();
};

struct EvalArgs {
  std::string run;
  std::vector<std::string> probes;
  int bins = 10;
  int proportions = 10;
  double selection_fraction = 0.7;
};

struct RankArgs {
  std::string model;
  std::string labeled;
  std::string input;
  std::string labels;
  std::string config;
  std::string out;
  std::string features_out;
  std::string index_out;
  double d_f = 0.2;
  int n_prototypes = 5;
};

int cmd_prepare(const PrepareArgs& a);
int cmd_run(const RunArgs& a);
int cmd_eval(const EvalArgs& a);
int cmd_rank(const RankArgs& a);

// Shared helpers.
std::string utc_now();
nlohmann::json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Split directory contents, labels resolved through labels.json.
struct SplitFiles {
  LabelMap labels;
  CorpusSplit split;
  nlohmann::json digests;
};
SplitFiles load_split(const std::filesystem::path& dir);

}  // namespace rnt::cli
