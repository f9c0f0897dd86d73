#include "rnt/artifacts.hpp"

#include <algorithm>
#include <sstream>

#include "rnt/io.hpp"

namespace rnt {

using nlohmann::json;

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(line);
  return out;
}

ClassId class_of(const LabelMap& labels, const std::string& name, const std::string& where) {
  auto c = labels.find(name);
  if (!c) throw DataError(where + ": unknown label '" + name + "'");
  return *c;
}

json parse_line(const std::string& line, const std::string& where, std::size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(where + ":" + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace

std::string metrics_jsonl(std::span<const EpochRecord> log) {
  std::string out;
  for (const auto& r : log) {
    json j = {{"epoch", r.epoch},
              {"phase", r.phase},
              {"split", r.split},
              {"accuracy", r.accuracy},
              {"macro_f1", r.macro_f1},
              {"mean_conf_clean", opt(r.mean_conf_clean)},
              {"mean_conf_noisy", opt(r.mean_conf_noisy)}};
    if (r.split == "train") {
      j["loss"] = r.loss;
      j["trained"] = r.trained;
    }
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<EpochRecord> parse_metrics_jsonl(const std::string& text) {
  std::vector<EpochRecord> out;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(text)) {
    const json j = parse_line(line, "metrics", ++lineno);
    EpochRecord r;
    r.epoch = j.at("epoch").get<int>();
    r.phase = j.at("phase").get<std::string>();
    r.split = j.at("split").get<std::string>();
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    if (!j.at("mean_conf_clean").is_null()) r.mean_conf_clean = j["mean_conf_clean"].get<double>();
    if (!j.at("mean_conf_noisy").is_null()) r.mean_conf_noisy = j["mean_conf_noisy"].get<double>();
    if (j.contains("loss")) r.loss = j["loss"].get<double>();
    if (j.contains("trained")) r.trained = j["trained"].get<std::size_t>();
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

// Minimal RFC 4180 quoting for label names.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace

void write_ranked_csv(const std::filesystem::path& path, const RankedSet& ranked, const LabelMap& labels) {
  std::string out = "doc_id,pseudo_label,support,rank\n";
  for (std::size_t i = 0; i < ranked.entries.size(); ++i) {
    const auto& e = ranked.entries[i];
    out += std::to_string(e.doc_id) + "," + csv_field(labels.name(e.pseudo_label)) + "," +
           io::format_double(e.support) + "," + std::to_string(i + 1) + "\n";
  }
  io::write_file(path, out);
}

RankedSet read_ranked_csv(const std::filesystem::path& path, const LabelMap& labels) {
  const auto lines = lines_of(io::read_file(path));
  if (lines.empty() || lines[0] != "doc_id,pseudo_label,support,rank")
    throw DataError(path.string() + ": missing ranked CSV header");
  RankedSet out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 4) throw DataError(path.string() + ":" + std::to_string(i + 1) + ": expected 4 fields");
    RankedEntry e;
    e.doc_id = std::stoll(f[0]);
    e.pseudo_label = class_of(labels, f[1], path.string());
    e.support = std::stod(f[2]);
    out.entries.push_back(e);
  }
  return out;
}

void write_ranked_labels_jsonl(const std::filesystem::path& path, const RankedSet& ranked,
                               std::span<const RankedLabel> joined, const LabelMap& labels) {
  if (joined.size() != ranked.size()) throw InvalidArgument("write_ranked_labels_jsonl: size mismatch");
  std::string out;
  for (std::size_t i = 0; i < joined.size(); ++i) {
    const json j = {{"doc_id", joined[i].doc_id},
                    {"pseudo_label", labels.name(joined[i].pseudo_label)},
                    {"gold_label", labels.name(joined[i].gold_label)},
                    {"is_noisy", joined[i].is_noisy},
                    {"support", ranked.entries[i].support},
                    {"confidence", ranked.entries[i].confidence},
                    {"rank", i + 1}};
    out += j.dump() + "\n";
  }
  io::write_file(path, out);
}

std::vector<RankedLabel> read_ranked_labels_jsonl(const std::filesystem::path& path, const LabelMap& labels) {
  std::vector<RankedLabel> out;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(io::read_file(path))) {
    const json j = parse_line(line, path.string(), ++lineno);
    out.push_back({j.at("doc_id").get<DocId>(), class_of(labels, j.at("pseudo_label").get<std::string>(), path.string()),
                   class_of(labels, j.at("gold_label").get<std::string>(), path.string()),
                   j.at("is_noisy").get<bool>()});
  }
  return out;
}

json to_json(const Cutoff& cutoff, double theta, std::size_t n_selected) {
  return {{"lambda", cutoff.lambda},
          {"proportion_accuracies", cutoff.proportion_accuracies},
          {"prefix", cutoff.prefix},
          {"theta_raw", cutoff.theta},
          {"theta", theta},
          {"n_selected", n_selected}};
}

void write_assignments_jsonl(const std::filesystem::path& path, const Assignments& a, const LabelMap& labels) {
  std::string out;
  for (const auto& [id, c] : a) out += json{{"doc_id", id}, {"label", labels.name(c)}}.dump() + "\n";
  io::write_file(path, out);
}

Assignments read_assignments_jsonl(const std::filesystem::path& path, const LabelMap& labels) {
  Assignments out;
  std::size_t lineno = 0;
  for (const auto& line : lines_of(io::read_file(path))) {
    const json j = parse_line(line, path.string(), ++lineno);
    out[j.at("doc_id").get<DocId>()] = class_of(labels, j.at("label").get<std::string>(), path.string());
  }
  return out;
}

json to_json(const Metrics& m) { return {{"accuracy", m.accuracy}, {"macro_f1", m.macro_f1}}; }

json to_json(const RankingCurve& curve) {
  json rows = json::array();
  for (const auto& p : curve.proportions)
    rows.push_back({{"proportion_index", p.index}, {"n", p.n}, {"accuracy", p.accuracy}, {"macro_f1", p.macro_f1}});
  return {{"proportion_count", curve.proportions.size()}, {"proportions", rows}};
}

std::string curve_csv(const RankingCurve& curve) {
  std::string out = "proportion_index,accuracy\n";
  for (const auto& p : curve.proportions) out += std::to_string(p.index) + "," + io::format_double(p.accuracy) + "\n";
  return out;
}

json to_json(const ConfidenceHistogram& h) {
  return {{"bins", h.bins}, {"clean", h.clean}, {"noisy", h.noisy}, {"mean_clean", h.mean_clean},
          {"mean_noisy", h.mean_noisy}};
}

json to_json(const DenoiseReport& r) {
  return {{"clean_acc", r.clean_acc},
          {"noisy_acc", r.noisy_acc},
          {"denoising_accuracy", r.denoising_accuracy},
          {"selection_fraction", r.selection_fraction}};
}

std::string features_jsonl(std::span<const DocId> ids, std::span<const std::vector<EvidenceFeature>> features) {
  if (ids.size() != features.size()) throw InvalidArgument("features_jsonl: size mismatch");
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (const auto& f : features[i])
      out += json{{"doc_id", ids[i]}, {"kind", to_string(f.kind)}, {"class_id", f.class_id}, {"value", f.value()}}
                 .dump() +
             "\n";
  return out;
}

std::string index_jsonl(const FeatureIndex& index) {
  std::vector<std::pair<EvidenceFeature, FeatureCounts>> items(index.begin(), index.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  for (const auto& [f, c] : items)
    out += json{{"kind", to_string(f.kind)},
                {"class_id", f.class_id},
                {"value", f.value()},
                {"total", c.total},
                {"positive", c.positive}}
               .dump() +
           "\n";
  return out;
}

}  // namespace rnt
