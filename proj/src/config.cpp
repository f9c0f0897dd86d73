#include "rnt/config.hpp"

#include <limits>
#include <set>
#include <string>

#include "rnt/io.hpp"

namespace rnt {

using nlohmann::json;

json to_json(const PipelineConfig& cfg) {
  json j = {
      {"pt_epochs", cfg.pt_epochs},
      {"nt_epochs", cfg.nt_epochs},
      {"selnt_epochs", cfg.selnt_epochs},
      {"lr", cfg.lr},
      {"nt_lr", cfg.nt_lr ? json(*cfg.nt_lr) : json(nullptr)},
      {"batch", cfg.batch},
      {"nt_negatives", cfg.nt_negatives},
      {"d_f", cfg.d_f},
      {"n_prototypes", cfg.n_prototypes},
      {"proportions", cfg.proportions},
      {"variant", to_string(cfg.variant)},
      {"ptconf_threshold", cfg.ptconf_threshold},
      {"rounds", cfg.rounds},
      {"embed_dim", cfg.embed_dim},
      {"init_std", cfg.init_std},
      {"seed", cfg.seed},
      {"vectorizer",
       {{"n_max", cfg.vectorizer.n_max},
        {"buckets_log2", cfg.vectorizer.buckets_log2},
        {"hash_seed", cfg.vectorizer.hash_seed}}},
  };
  return j;
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

int get_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) bad(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) bad(path, "out of range");
  return static_cast<int>(x);
}

std::uint64_t get_u64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) bad(path, "must be non-negative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  bad(path, "expected a non-negative integer");
}

double get_real(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [k, _] : j.items())
    if (!allowed.count(k)) bad(prefix + k, "unknown field");
}

}  // namespace

PipelineConfig config_from_json(const json& j, PipelineConfig c) {
  if (!j.is_object()) bad("config", "expected a JSON object");
  check_keys(j,
             {"pt_epochs", "nt_epochs", "selnt_epochs", "lr", "nt_lr", "batch", "nt_negatives", "d_f",
              "n_prototypes", "proportions", "variant", "ptconf_threshold", "rounds", "embed_dim", "init_std",
              "seed", "vectorizer"},
             "");
  for (const auto& [k, v] : j.items()) {
    if (k == "pt_epochs") c.pt_epochs = get_int(v, k);
    else if (k == "nt_epochs") c.nt_epochs = get_int(v, k);
    else if (k == "selnt_epochs") c.selnt_epochs = get_int(v, k);
    else if (k == "lr") c.lr = get_real(v, k);
    else if (k == "nt_lr") c.nt_lr = v.is_null() ? std::nullopt : std::optional<double>(get_real(v, k));
    else if (k == "batch") c.batch = get_int(v, k);
    else if (k == "nt_negatives") c.nt_negatives = get_int(v, k);
    else if (k == "d_f") c.d_f = get_real(v, k);
    else if (k == "n_prototypes") c.n_prototypes = get_int(v, k);
    else if (k == "proportions") c.proportions = get_int(v, k);
    else if (k == "variant") {
      if (!v.is_string()) bad(k, "expected a string");
      c.variant = parse_variant(v.get<std::string>());
    } else if (k == "ptconf_threshold") c.ptconf_threshold = get_real(v, k);
    else if (k == "rounds") c.rounds = get_int(v, k);
    else if (k == "embed_dim") c.embed_dim = get_int(v, k);
    else if (k == "init_std") c.init_std = get_real(v, k);
    else if (k == "seed") c.seed = get_u64(v, k);
    else if (k == "vectorizer") {
      if (!v.is_object()) bad(k, "expected an object");
      check_keys(v, {"n_max", "buckets_log2", "hash_seed"}, "vectorizer.");
      if (v.contains("n_max")) c.vectorizer.n_max = get_int(v["n_max"], "vectorizer.n_max");
      if (v.contains("buckets_log2")) c.vectorizer.buckets_log2 = get_int(v["buckets_log2"], "vectorizer.buckets_log2");
      if (v.contains("hash_seed")) c.vectorizer.hash_seed = get_u64(v["hash_seed"], "vectorizer.hash_seed");
    }
  }
  c.validate();
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
  io::require_file(path);
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config: malformed JSON in " + path.string() + ": " + e.what());
  }
  return config_from_json(j, std::move(base));
}

}  // namespace rnt
