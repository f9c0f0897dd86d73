#include <ctime>
#include <iomanip>
#include <sstream>

#include "commands.hpp"
#include "rnt/io.hpp"

namespace rnt::cli {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  io::require_file(path);
  try {
    return nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) { io::write_file(path, j.dump(2) + "\n"); }

SplitFiles load_split(const std::filesystem::path& dir) {
  SplitFiles out;
  for (const char* name : {"labels.json", "labeled.jsonl", "unlabeled.jsonl", "dev.jsonl", "test.jsonl",
                           "hidden_gold.jsonl"}) {
    io::require_file(dir / name);
    out.digests[name] = io::file_digest(dir / name);
  }
  out.labels = read_label_map(dir / "labels.json");
  auto& s = out.split;
  s.num_classes = out.labels.size();
  s.labeled = read_documents_jsonl(dir / "labeled.jsonl", out.labels);
  s.unlabeled = read_documents_jsonl(dir / "unlabeled.jsonl", out.labels);
  s.dev = read_documents_jsonl(dir / "dev.jsonl", out.labels);
  s.test = read_documents_jsonl(dir / "test.jsonl", out.labels);
  s.hidden_gold = read_hidden_gold(dir / "hidden_gold.jsonl", out.labels);
  for (const auto& d : s.unlabeled)
    if (d.gold_label) throw DataError("unlabeled.jsonl: document " + std::to_string(d.id) + " carries a label");
  return out;
}

}  // namespace rnt::cli
