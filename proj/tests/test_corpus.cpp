#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "rnt/corpus.hpp"
#include "testing.hpp"

namespace rnt {
namespace {

using testing::TempDir;

std::vector<Document> labeled_docs(std::size_t n, int K) {
  std::vector<Document> docs;
  for (std::size_t i = 0; i < n; ++i)
    docs.push_back({static_cast<DocId>(i), "doc " + std::to_string(i), static_cast<ClassId>(i % K), {}, false});
  return docs;
}

TEST(LoadCorpus, TsvFirstSeenLabelOrder) {
  TempDir tmp;
  const auto path = tmp.write("c.tsv", "good film\tpos\nbad film\tneg\nfine\tpos\n");
  const auto c = load_corpus(path, CorpusFormat::kTsv);
  ASSERT_EQ(c.docs.size(), 3u);
  EXPECT_EQ(c.labels.size(), 2);
  EXPECT_EQ(*c.labels.find("pos"), 0);
  EXPECT_EQ(*c.labels.find("neg"), 1);
  EXPECT_EQ(c.docs[0].id, 0);
  EXPECT_EQ(c.docs[2].id, 2);
  EXPECT_EQ(*c.docs[1].gold_label, 1);
  EXPECT_EQ(c.docs[1].text, "bad film");
}

TEST(LoadCorpus, DistinctLabelsCountClasses) {
  TempDir tmp;
  const auto path = tmp.write("c.tsv", "w\ta\nx\tb\ny\tc\nz\ta\n");
  EXPECT_EQ(load_corpus(path, CorpusFormat::kTsv).labels.size(), 3);
}

TEST(LoadCorpus, JsonlMissingTextNamesRecord) {
  TempDir tmp;
  const auto path = tmp.write("c.jsonl", "{\"text\":\"ok\",\"label\":\"a\"}\n{\"label\":\"b\"}\n");
  try {
    load_corpus(path, CorpusFormat::kJsonl);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
}

TEST(LoadCorpus, CsvQuotedFields) {
  TempDir tmp;
  const auto path = tmp.write("c.csv", "label,text\nx,\"a, \"\"quoted\"\" one\"\ny,\"multi\nline\"\n");
  const auto c = load_corpus(path, CorpusFormat::kCsv);
  ASSERT_EQ(c.docs.size(), 2u);
  EXPECT_EQ(c.docs[0].text, "a, \"quoted\" one");
  EXPECT_EQ(c.docs[1].text, "multi\nline");
  EXPECT_EQ(*c.docs[1].gold_label, 1);
}

TEST(LoadCorpus, EmptyFileIsAnError) {
  TempDir tmp;
  EXPECT_THROW(load_corpus(tmp.write("e.tsv", ""), CorpusFormat::kTsv), DataError);
}

TEST(LoadCorpus, MissingFile) {
  TempDir tmp;
  EXPECT_THROW(load_corpus(tmp.path() / "nope.tsv", CorpusFormat::kTsv), MissingArtifact);
}

TEST(LoadCorpus, MalformedTsvLine) {
  TempDir tmp;
  try {
    load_corpus(tmp.write("c.tsv", "a\tx\ntoo\tmany\ttabs\n"), CorpusFormat::kTsv);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Split, SizesForHundredDocs) {
  const auto docs = labeled_docs(100, 2);
  const auto s = split(docs, {0.1, 0.1, 0.0}, 2, 7);
  EXPECT_EQ(s.labeled.size(), 10u);
  EXPECT_EQ(s.dev.size(), 10u);
  EXPECT_EQ(s.unlabeled.size(), 80u);
  EXPECT_TRUE(s.test.empty());
}

TEST(Split, PartitionsAreDisjointAndCover) {
  const auto docs = labeled_docs(257, 3);
  const auto s = split(docs, {0.13, 0.2, 0.1}, 3, 11);
  std::set<DocId> seen;
  for (const auto* part : {&s.labeled, &s.unlabeled, &s.dev, &s.test})
    for (const auto& d : *part) EXPECT_TRUE(seen.insert(d.id).second) << d.id;
  EXPECT_EQ(seen.size(), docs.size());
  for (const auto& d : s.unlabeled) {
    EXPECT_FALSE(d.gold_label.has_value());
    EXPECT_EQ(s.hidden_gold.at(d.id), docs[static_cast<std::size_t>(d.id)].gold_label);
  }
  EXPECT_EQ(s.hidden_gold.size(), s.unlabeled.size());
}

TEST(Split, StratifiedLabeledSample) {
  auto docs = labeled_docs(200, 4);
  const auto s = split(docs, {0.1, 0.1, 0.0}, 4, 3);
  std::vector<int> per(4, 0);
  for (const auto& d : s.labeled) ++per[static_cast<std::size_t>(*d.gold_label)];
  EXPECT_EQ(per, (std::vector<int>{5, 5, 5, 5}));
}

TEST(Split, Deterministic) {
  const auto docs = labeled_docs(120, 3);
  const auto a = split(docs, {0.2, 0.1, 0.0}, 3, 5);
  const auto b = split(docs, {0.2, 0.1, 0.0}, 3, 5);
  auto ids = [](const std::vector<Document>& v) {
    std::vector<DocId> out;
    for (const auto& d : v) out.push_back(d.id);
    return out;
  };
  EXPECT_EQ(ids(a.labeled), ids(b.labeled));
  EXPECT_EQ(ids(a.dev), ids(b.dev));
  EXPECT_EQ(ids(a.unlabeled), ids(b.unlabeled));
  const auto c = split(docs, {0.2, 0.1, 0.0}, 3, 6);
  EXPECT_NE(ids(a.labeled), ids(c.labeled));
}

TEST(Split, UnrepresentedClassIsAnError) {
  const auto docs = labeled_docs(10, 4);
  EXPECT_THROW(split(docs, {0.1, 0.1, 0.0}, 4, 1), DataError);
}

TEST(Split, BadFractions) {
  const auto docs = labeled_docs(10, 2);
  EXPECT_THROW(split(docs, {0.6, 0.5, 0.0}, 2, 1), InvalidArgument);
  EXPECT_THROW(split(docs, {0.0, 0.5, 0.0}, 2, 1), InvalidArgument);
}

TEST(SymmetricNoise, ZeroRateIsIdentity) {
  const auto docs = labeled_docs(50, 3);
  const auto out = inject_symmetric_noise(docs, 0.0, 3, 1);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    EXPECT_EQ(out[i].gold_label, docs[i].gold_label);
    EXPECT_FALSE(out[i].is_noisy);
  }
}

TEST(SymmetricNoise, ExactCountNeverSelfMapped) {
  const auto docs = labeled_docs(1000, 4);
  const auto out = inject_symmetric_noise(docs, 0.3, 4, 9);
  int flipped = 0;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const bool changed = out[i].gold_label != docs[i].gold_label;
    EXPECT_EQ(changed, out[i].is_noisy);
    flipped += changed;
  }
  EXPECT_EQ(flipped, 300);
}

TEST(SymmetricNoise, Deterministic) {
  const auto docs = labeled_docs(200, 4);
  const auto a = inject_symmetric_noise(docs, 0.3, 4, 42);
  const auto b = inject_symmetric_noise(docs, 0.3, 4, 42);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].gold_label, b[i].gold_label);
}

TEST(SymmetricNoise, RejectsSingleClass) {
  const auto docs = labeled_docs(5, 1);
  EXPECT_THROW(inject_symmetric_noise(docs, 0.3, 1, 1), InvalidArgument);
}

TEST(Perturbation, MechanicalEdits) {
  std::u32string w = U"word";
  apply_perturbation(w, Perturbation::kSwap, 1);
  EXPECT_EQ(w, U"wrod");
  w = U"word";
  apply_perturbation(w, Perturbation::kDelete, 2);
  EXPECT_EQ(w, U"wod");
  w = U"word";
  apply_perturbation(w, Perturbation::kReplace, 0, U'l');
  EXPECT_EQ(w, U"lord");
  w = U"word";
  apply_perturbation(w, Perturbation::kInsert, 2, U'x');
  EXPECT_EQ(w, U"woxrd");
  w = U"word";
  EXPECT_THROW(apply_perturbation(w, Perturbation::kDelete, 0), InvalidArgument);
}

TEST(Perturbation, ZeroRateIsIdentity) {
  const std::string t = "  some  text\twith\nspaces ";
  EXPECT_EQ(perturb_text(t, 0.0, 3), t);
  EXPECT_EQ(perturb_text("", 0.5, 3), "");
}

TEST(Perturbation, WordCountAndLengthBounds) {
  const std::string t = "alpha beta gamma delta epsilon zeta eta theta iota kappa";
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::string p = perturb_text(t, 0.3, seed);
    std::vector<std::string> a, b;
    std::istringstream ia(t), ib(p);
    for (std::string w; ia >> w;) a.push_back(w);
    for (std::string w; ib >> w;) b.push_back(w);
    ASSERT_EQ(a.size(), b.size());
    int changed = 0;
    long len_delta = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      changed += a[i] != b[i];
      len_delta += std::labs(static_cast<long>(a[i].size()) - static_cast<long>(b[i].size()));
    }
    EXPECT_LE(changed, 3);
    EXPECT_LE(len_delta, 3);
  }
}

TEST(Perturbation, ShortWordsOnlyReplaceOrInsert) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::string p = perturb_text("ab", 1.0, seed);
    const auto n = utf8::decode(p).size();
    EXPECT_TRUE(n == 2 || n == 3) << p;
    EXPECT_NE(p, "ab");
  }
}

TEST(Perturbation, PreservesWhitespaceAndUnicode) {
  const std::string t = "caf\xc3\xa9  na\xc3\xafve\tr\xc3\xa9sum\xc3\xa9";
  const std::string p = perturb_text(t, 1.0, 5);
  EXPECT_NE(p.find("  "), std::string::npos);
  EXPECT_NE(p.find('\t'), std::string::npos);
  EXPECT_EQ(utf8::encode(utf8::decode(p)), p);
}

TEST(Perturbation, DocumentsMarkedNoisy) {
  auto docs = labeled_docs(100, 2);
  for (auto& d : docs) d.text = "one two three four five six";
  const auto out = perturb_documents(docs, 0.3, 0.3, 8);
  int noisy = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    noisy += out[i].is_noisy;
    if (!out[i].is_noisy) EXPECT_EQ(out[i].text, docs[i].text);
    else EXPECT_NE(out[i].text, docs[i].text);
    EXPECT_EQ(out[i].gold_label, docs[i].gold_label);
  }
  EXPECT_EQ(noisy, 30);
}

TEST(SplitFiles, JsonlRoundTrip) {
  TempDir tmp;
  LabelMap labels({"neg", "pos"});
  std::vector<Document> docs = {{3, "x \"q\"\n", 1, {}, true}, {7, "y", std::nullopt, {}, false}};
  write_documents_jsonl(tmp.path() / "d.jsonl", docs, labels);
  const auto back = read_documents_jsonl(tmp.path() / "d.jsonl", labels);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].id, 3);
  EXPECT_EQ(back[0].text, docs[0].text);
  EXPECT_EQ(back[0].gold_label, 1);
  EXPECT_TRUE(back[0].is_noisy);
  EXPECT_FALSE(back[1].gold_label.has_value());

  write_label_map(tmp.path() / "labels.json", labels);
  EXPECT_EQ(read_label_map(tmp.path() / "labels.json").names(), labels.names());

  std::map<DocId, ClassId> gold = {{1, 0}, {4, 1}};
  write_hidden_gold(tmp.path() / "g.jsonl", gold, labels);
  EXPECT_EQ(read_hidden_gold(tmp.path() / "g.jsonl", labels), gold);
}

}  // namespace
}  // namespace rnt
