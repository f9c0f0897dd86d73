#include "rnt/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "rnt/io.hpp"
#include "rnt/rng.hpp"

namespace rnt {

using nlohmann::json;

LabelMap::LabelMap(std::vector<std::string> names) {
  for (auto& n : names) intern(n);
}

ClassId LabelMap::intern(const std::string& name) {
  auto it = index_.find(name);
  if (it != index_.end()) return it->second;
  const ClassId id = size();
  names_.push_back(name);
  index_.emplace(name, id);
  return id;
}

std::optional<ClassId> LabelMap::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

CorpusFormat parse_format(std::string_view name) {
  if (name == "tsv") return CorpusFormat::kTsv;
  if (name == "csv") return CorpusFormat::kCsv;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw InvalidArgument("unknown corpus format '" + std::string(name) + "'");
}

namespace {

struct RawRecord {
  std::size_t line = 0;
  std::string text;
  std::optional<std::string> label;
};

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<RawRecord> read_tsv(std::istream& in) {
  std::vector<RawRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    RawRecord rec{lineno, line.substr(0, tab), std::nullopt};
    if (tab != std::string::npos) {
      std::string label = line.substr(tab + 1);
      if (label.find('\t') != std::string::npos)
        throw DataError("line " + std::to_string(lineno) + ": expected text<TAB>label");
      if (!label.empty()) rec.label = std::move(label);
    }
    if (rec.text.empty()) throw DataError("line " + std::to_string(lineno) + ": empty text");
    out.push_back(std::move(rec));
  }
  return out;
}

// RFC 4180 fields; quoted fields may contain separators, doubled quotes and newlines.
std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv_rows(
    const std::string& data) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.emplace_back(row_line, std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_row();
      ++line;
      row_line = line;
    } else if (c == '\r') {
      // dropped; handled by the following '\n'
    } else {
      if (c == '"') throw DataError("line " + std::to_string(line) + ": stray quote");
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(row_line) + ": unterminated quote");
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

std::vector<RawRecord> read_csv(const std::string& data) {
  auto rows = parse_csv_rows(data);
  if (rows.empty()) return {};
  const auto& header = rows.front().second;
  std::optional<std::size_t> text_col, label_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "text") text_col = i;
    if (header[i] == "label") label_col = i;
  }
  if (!text_col) throw DataError("line 1: CSV header has no 'text' column");
  std::vector<RawRecord> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [line, fields] = rows[r];
    if (fields.size() != header.size())
      throw DataError("line " + std::to_string(line) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    RawRecord rec{line, fields[*text_col], std::nullopt};
    if (rec.text.empty()) throw DataError("line " + std::to_string(line) + ": empty text");
    if (label_col && !fields[*label_col].empty()) rec.label = fields[*label_col];
    out.push_back(std::move(rec));
  }
  return out;
}

std::optional<std::string> json_label(const json& j, const std::string& where) {
  if (!j.contains("label") || j["label"].is_null()) return std::nullopt;
  const auto& l = j["label"];
  if (l.is_string()) return l.get<std::string>();
  if (l.is_number_integer()) return std::to_string(l.get<long long>());
  throw DataError(where + ": 'label' must be a string or integer");
}

std::vector<RawRecord> read_jsonl(std::istream& in) {
  std::vector<RawRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = strip_cr(std::move(line));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataError(where + ": invalid JSON object");
    if (!j.contains("text") || !j["text"].is_string())
      throw DataError(where + ": missing string field 'text'");
    out.push_back({lineno, j["text"].get<std::string>(), json_label(j, where)});
  }
  return out;
}

}  // namespace

std::vector<Document> load_corpus(const std::filesystem::path& path, CorpusFormat format,
                                  LabelMap& labels, DocId first_id) {
  const std::string data = io::read_file(path);
  std::vector<RawRecord> records;
  if (format == CorpusFormat::kCsv) {
    records = read_csv(data);
  } else {
    std::istringstream in(data);
    records = format == CorpusFormat::kTsv ? read_tsv(in) : read_jsonl(in);
  }
  if (records.empty()) throw DataError(path.string() + ": no records");
  std::vector<Document> docs;
  docs.reserve(records.size());
  DocId id = first_id;
  for (auto& rec : records) {
    Document d;
    d.id = id++;
    d.text = std::move(rec.text);
    if (rec.label) d.gold_label = labels.intern(*rec.label);
    docs.push_back(std::move(d));
  }
  return docs;
}

LoadedCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  LoadedCorpus out;
  out.docs = load_corpus(path, format, out.labels);
  return out;
}

namespace {

// Hamilton apportionment of `total` seats over `sizes`; remainder ties go to
// the lower class index.
std::vector<std::size_t> apportion(const std::vector<std::size_t>& sizes, std::size_t total,
                                   std::size_t n) {
  std::vector<std::size_t> quota(sizes.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    const double exact = static_cast<double>(total) * static_cast<double>(sizes[c]) /
                         static_cast<double>(n);
    quota[c] = std::min(sizes[c], static_cast<std::size_t>(std::floor(exact)));
    assigned += quota[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; assigned < total && i < remainders.size(); ++i) {
    const std::size_t c = remainders[i].second;
    if (quota[c] < sizes[c]) {
      ++quota[c];
      ++assigned;
    }
  }
  return quota;
}

std::size_t round_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
}

void sort_by_id(std::vector<Document>& docs) {
  std::sort(docs.begin(), docs.end(),
            [](const Document& a, const Document& b) { return a.id < b.id; });
}

}  // namespace

CorpusSplit split(std::span<const Document> docs, const SplitFractions& fractions,
                  int num_classes, std::uint64_t seed) {
  auto in_unit = [](double f) { return f > 0.0 && f < 1.0; };
  if (!in_unit(fractions.labeled) || !in_unit(fractions.dev))
    throw InvalidArgument("split: labeled and dev fractions must lie in (0,1)");
  if (fractions.test < 0.0 || fractions.labeled + fractions.dev + fractions.test >= 1.0)
    throw InvalidArgument("split: fractions must sum to less than 1");
  if (num_classes < 2) throw InvalidArgument("split: need at least two classes");

  const std::size_t n = docs.size();
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(num_classes));
  {
    std::vector<DocId> ids;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& d = docs[i];
      if (!d.gold_label) throw DataError("split: document " + std::to_string(d.id) + " has no label");
      if (*d.gold_label < 0 || *d.gold_label >= num_classes)
        throw DataError("split: label out of range in document " + std::to_string(d.id));
      by_class[static_cast<std::size_t>(*d.gold_label)].push_back(i);
      ids.push_back(d.id);
    }
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
      throw DataError("split: duplicate document ids");
  }

  Rng rng(derive_seed(seed, "split"));
  std::vector<std::size_t> sizes;
  for (auto& members : by_class) {
    std::shuffle(members.begin(), members.end(), rng);
    sizes.push_back(members.size());
  }
  const auto quota = apportion(sizes, round_count(fractions.labeled, n), n);

  CorpusSplit out;
  out.num_classes = num_classes;
  std::vector<std::size_t> rest;
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (quota[c] == 0)
      throw DataError("split: class " + std::to_string(c) + " has no labeled examples");
    for (std::size_t k = 0; k < by_class[c].size(); ++k) {
      if (k < quota[c]) {
        out.labeled.push_back(docs[by_class[c][k]]);
      } else {
        rest.push_back(by_class[c][k]);
      }
    }
  }
  std::sort(rest.begin(), rest.end());
  std::shuffle(rest.begin(), rest.end(), rng);
  const std::size_t n_dev = std::min(rest.size(), round_count(fractions.dev, n));
  const std::size_t n_test = std::min(rest.size() - n_dev, round_count(fractions.test, n));
  for (std::size_t k = 0; k < rest.size(); ++k) {
    const Document& d = docs[rest[k]];
    if (k < n_dev) {
      out.dev.push_back(d);
    } else if (k < n_dev + n_test) {
      out.test.push_back(d);
    } else {
      Document hidden = d;
      out.hidden_gold[d.id] = *d.gold_label;
      hidden.gold_label.reset();
      hidden.pseudo_label.reset();
      hidden.is_noisy = false;
      out.unlabeled.push_back(std::move(hidden));
    }
  }
  sort_by_id(out.labeled);
  sort_by_id(out.unlabeled);
  sort_by_id(out.dev);
  sort_by_id(out.test);
  return out;
}

std::vector<Document> inject_symmetric_noise(std::span<const Document> docs, double rate,
                                             int num_classes, std::uint64_t seed) {
  if (num_classes < 2) throw InvalidArgument("inject_symmetric_noise: K must be >= 2");
  if (!(rate >= 0.0 && rate <= 1.0))
    throw InvalidArgument("inject_symmetric_noise: rate must lie in [0,1]");
  std::vector<Document> out(docs.begin(), docs.end());
  for (auto& d : out) {
    if (!d.gold_label) throw DataError("inject_symmetric_noise: unlabeled document");
    d.is_noisy = false;
  }
  const std::size_t n_flip = round_count(rate, out.size());
  Rng rng(derive_seed(seed, "symmetric_noise"));
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::uniform_int_distribution<int> other(0, num_classes - 2);
  for (std::size_t k = 0; k < n_flip; ++k) {
    Document& d = out[order[k]];
    const int draw = other(rng);
    d.gold_label = draw < *d.gold_label ? draw : draw + 1;
    d.is_noisy = true;
  }
  return out;
}

namespace utf8 {

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 1;
    char32_t cp = b0;
    if (b0 >= 0xF0 && b0 < 0xF8) {
      len = 4;
      cp = b0 & 0x07;
    } else if (b0 >= 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if (b0 >= 0x80) {
      len = 1;  // stray continuation byte: pass through as U+FFFD
      cp = 0xFFFD;
    }
    if (i + static_cast<std::size_t>(len) > s.size()) {
      out.push_back(0xFFFD);
      break;
    }
    for (int k = 1; k < len; ++k) cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += static_cast<std::size_t>(len);
  }
  return out;
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

bool is_space(char32_t c) {
  switch (c) {
    case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return c >= 0x2000 && c <= 0x200A;
  }
}

}  // namespace utf8

void apply_perturbation(std::u32string& word, Perturbation kind, std::size_t pos,
                        char32_t letter) {
  const std::size_t n = word.size();
  switch (kind) {
    case Perturbation::kSwap:
      if (pos + 1 >= n) throw InvalidArgument("swap position out of range");
      std::swap(word[pos], word[pos + 1]);
      break;
    case Perturbation::kDelete:
      if (pos == 0 || pos + 1 >= n) throw InvalidArgument("delete position must be interior");
      word.erase(pos, 1);
      break;
    case Perturbation::kReplace:
      if (pos >= n) throw InvalidArgument("replace position out of range");
      word[pos] = letter;
      break;
    case Perturbation::kInsert:
      if (pos == 0 || pos > n) throw InvalidArgument("insert position out of range");
      word.insert(pos, 1, letter);
      break;
  }
}

namespace {

char32_t random_letter(Rng& rng, char32_t avoid) {
  if (avoid >= U'a' && avoid <= U'z') {
    std::uniform_int_distribution<int> pick(0, 24);
    const int k = pick(rng);
    const char32_t c = U'a' + static_cast<char32_t>(k);
    return c < avoid ? c : c + 1;
  }
  std::uniform_int_distribution<int> pick(0, 25);
  return U'a' + static_cast<char32_t>(pick(rng));
}

void perturb_word(std::u32string& word, Rng& rng) {
  const std::size_t n = word.size();
  std::uniform_int_distribution<int> kind_pick(0, n >= 3 ? 3 : 1);
  int k = kind_pick(rng);
  // Short words only get replace (0) or insert (1) in the reduced draw.
  Perturbation kind;
  if (n >= 3) {
    kind = static_cast<Perturbation>(k);
  } else {
    kind = k == 0 ? Perturbation::kReplace : Perturbation::kInsert;
  }
  switch (kind) {
    case Perturbation::kSwap: {
      std::uniform_int_distribution<std::size_t> p(0, n - 2);
      apply_perturbation(word, kind, p(rng));
      break;
    }
    case Perturbation::kDelete: {
      std::uniform_int_distribution<std::size_t> p(1, n - 2);
      apply_perturbation(word, kind, p(rng));
      break;
    }
    case Perturbation::kReplace: {
      std::uniform_int_distribution<std::size_t> p(0, n - 1);
      const std::size_t pos = p(rng);
      apply_perturbation(word, kind, pos, random_letter(rng, word[pos]));
      break;
    }
    case Perturbation::kInsert: {
      std::uniform_int_distribution<std::size_t> p(1, std::max<std::size_t>(1, n - 1));
      const std::size_t pos = p(rng);
      apply_perturbation(word, kind, pos, random_letter(rng, 0));
      break;
    }
  }
}

}  // namespace

std::string perturb_text(std::string_view text, double word_rate, std::uint64_t seed) {
  if (!(word_rate >= 0.0 && word_rate <= 1.0))
    throw InvalidArgument("perturb_text: word_rate must lie in [0,1]");
  if (text.empty() || word_rate == 0.0) return std::string(text);
  const std::u32string cps = utf8::decode(text);
  // Alternating runs: each run is either whitespace or a word.
  struct Run {
    std::u32string chars;
    bool word;
  };
  std::vector<Run> runs;
  for (char32_t c : cps) {
    const bool w = !utf8::is_space(c);
    if (runs.empty() || runs.back().word != w) runs.push_back({{}, w});
    runs.back().chars.push_back(c);
  }
  std::vector<std::size_t> words;
  for (std::size_t i = 0; i < runs.size(); ++i)
    if (runs[i].word) words.push_back(i);
  const std::size_t k = round_count(word_rate, words.size());
  Rng rng(derive_seed(seed, "perturb_text"));
  std::vector<std::size_t> chosen;
  std::sample(words.begin(), words.end(), std::back_inserter(chosen), k, rng);
  for (std::size_t idx : chosen) perturb_word(runs[idx].chars, rng);
  std::u32string joined;
  for (const auto& r : runs) joined += r.chars;
  return utf8::encode(joined);
}

std::vector<Document> perturb_documents(std::span<const Document> docs, double instance_rate,
                                        double word_rate, std::uint64_t seed) {
  if (!(instance_rate >= 0.0 && instance_rate <= 1.0))
    throw InvalidArgument("perturb_documents: instance_rate must lie in [0,1]");
  std::vector<Document> out(docs.begin(), docs.end());
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, "perturb_documents"));
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t k = round_count(instance_rate, out.size());
  for (std::size_t i = 0; i < k; ++i) {
    Document& d = out[order[i]];
    d.text = perturb_text(d.text, word_rate, mix64(seed ^ static_cast<std::uint64_t>(d.id)));
    d.is_noisy = true;
  }
  return out;
}

void write_documents_jsonl(const std::filesystem::path& path, std::span<const Document> docs,
                           const LabelMap& labels) {
  std::string out;
  for (const auto& d : docs) {
    json j;
    j["id"] = d.id;
    j["text"] = d.text;
    j["label"] = d.gold_label ? json(labels.name(*d.gold_label)) : json(nullptr);
    j["is_noisy"] = d.is_noisy;
    out += j.dump();
    out += '\n';
  }
  io::write_file(path, out);
}

std::vector<Document> read_documents_jsonl(const std::filesystem::path& path,
                                           const LabelMap& labels) {
  std::istringstream in(io::read_file(path));
  std::vector<Document> docs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + " line " + std::to_string(lineno);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw DataError(where + ": invalid JSON object");
    if (!j.contains("id") || !j["id"].is_number_integer())
      throw DataError(where + ": missing integer field 'id'");
    if (!j.contains("text") || !j["text"].is_string())
      throw DataError(where + ": missing string field 'text'");
    Document d;
    d.id = j["id"].get<DocId>();
    d.text = j["text"].get<std::string>();
    if (auto name = json_label(j, where)) {
      auto cls = labels.find(*name);
      if (!cls) throw DataError(where + ": unknown label '" + *name + "'");
      d.gold_label = *cls;
    }
    d.is_noisy = j.value("is_noisy", false);
    docs.push_back(std::move(d));
  }
  return docs;
}

void write_label_map(const std::filesystem::path& path, const LabelMap& labels) {
  json j = json::object();
  for (int i = 0; i < labels.size(); ++i) j[labels.name(i)] = i;
  io::write_file(path, j.dump(2) + "\n");
}

LabelMap read_label_map(const std::filesystem::path& path) {
  json j = json::parse(io::read_file(path), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError(path.string() + ": invalid label map");
  std::vector<std::string> names(j.size());
  for (auto& [name, idx] : j.items()) {
    if (!idx.is_number_integer()) throw DataError(path.string() + ": non-integer index");
    const auto i = idx.get<long long>();
    if (i < 0 || static_cast<std::size_t>(i) >= names.size() || !names[static_cast<std::size_t>(i)].empty())
      throw DataError(path.string() + ": label indices must be dense and unique");
    names[static_cast<std::size_t>(i)] = name;
  }
  return LabelMap(std::move(names));
}

void write_hidden_gold(const std::filesystem::path& path, const std::map<DocId, ClassId>& gold,
                       const LabelMap& labels) {
  std::string out;
  for (const auto& [id, label] : gold) {
    out += json{{"id", id}, {"label", labels.name(label)}}.dump();
    out += '\n';
  }
  io::write_file(path, out);
}

std::map<DocId, ClassId> read_hidden_gold(const std::filesystem::path& path,
                                          const LabelMap& labels) {
  std::map<DocId, ClassId> gold;
  std::istringstream in(io::read_file(path));
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::string where = path.string() + " line " + std::to_string(lineno);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("id") || !j["id"].is_number_integer())
      throw DataError(where + ": expected {\"id\", \"label\"}");
    auto name = json_label(j, where);
    if (!name) throw DataError(where + ": missing label");
    auto cls = labels.find(*name);
    if (!cls) throw DataError(where + ": unknown label '" + *name + "'");
    gold[j["id"].get<DocId>()] = *cls;
  }
  return gold;
}

}  // namespace rnt
