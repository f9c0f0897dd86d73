#include <iostream>
#include <sstream>

#include "commands.hpp"
#include "rnt/common.hpp"
#include "rnt/dst.hpp"

namespace {

enum Exit { kOk = 0, kError = 1, kUsage = 2, kMissing = 3, kDiverged = 4 };

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size()) throw CLI::ValidationError("--seeds", "not an integer: " + item);
    out.push_back(v);
  }
  if (out.empty()) throw CLI::ValidationError("--seeds", "empty seed list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace rnt::cli;
  CLI::App app{"Evidential filtering and negative training for semi-supervised text classification"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  PrepareArgs prep;
  auto* p = app.add_subcommand("prepare", "Split a labeled corpus into D_l / D_u / dev / test files");
  p->add_option("--input", prep.input, "Corpus file (tsv, csv or jsonl)")->required();
  p->add_option("--format", prep.format, "tsv | csv | jsonl (default: from the extension)");
  p->add_option("--test-file", prep.test_file, "Separate test corpus");
  p->add_option("--test-format", prep.test_format, "Format of --test-file (default: from the extension)");
  p->add_option("--labeled-fraction", prep.labeled_fraction, "Share of documents kept labeled")->capture_default_str();
  p->add_option("--dev-fraction", prep.dev_fraction, "Share of documents used as dev")->capture_default_str();
  p->add_option("--test-fraction", prep.test_fraction, "Share held out as test when no --test-file")
      ->capture_default_str();
  p->add_option("--noise-rate", prep.noise_rate, "Symmetric label noise applied to D_l")->capture_default_str();
  p->add_option("--perturb-dev-rate", prep.perturb_dev_rate, "Share of dev documents perturbed")
      ->capture_default_str();
  p->add_option("--perturb-word-rate", prep.perturb_word_rate, "Share of words perturbed per document")
      ->capture_default_str();
  p->add_option("--seed", prep.seed, "Root seed")->capture_default_str();
  p->add_option("--out", prep.out, "Output directory")->required();

  RunArgs run;
  std::string seeds;
  std::uint64_t seed = 0;
  int pt_epochs = 0, nt_epochs = 0, selnt_epochs = 0, batch = 0, rounds = 0;
  double lr = 0.0, d_f = 0.0, ptconf = 0.0;
  auto* r = app.add_subcommand("run", "Train PT, filter pseudo-labels and train NT + SelNT");
  r->add_option("--split", run.split, "Directory written by `prepare`")->required();
  r->add_option("--variant", run.variant, "rnt | rnt_pure | rnt_ptconf (overrides the config)");
  r->add_option("--config", run.config, "JSON config file");
  auto* seed_opt = r->add_option("--seed", seed, "Root seed (overrides the config)");
  auto* seeds_opt = r->add_option("--seeds", seeds, "Comma-separated seeds; one run directory each");
  seed_opt->excludes(seeds_opt);
  auto* o_pt = r->add_option("--pt-epochs", pt_epochs);
  auto* o_nt = r->add_option("--nt-epochs", nt_epochs);
  auto* o_sel = r->add_option("--selnt-epochs", selnt_epochs);
  auto* o_lr = r->add_option("--lr", lr);
  auto* o_batch = r->add_option("--batch", batch);
  auto* o_df = r->add_option("--d-f", d_f);
  auto* o_ptc = r->add_option("--ptconf-threshold", ptconf);
  auto* o_rounds = r->add_option("--rounds", rounds);
  r->add_option("--out", run.out, "Output directory")->required();

  EvalArgs ev;
  std::string probes = "metrics";
  auto* e = app.add_subcommand("eval", "Compute report files for a finished run");
  e->add_option("--run", ev.run, "Run directory")->required();
  e->add_option("--probes", probes, "Comma-separated subset of metrics,curve,hist,denoise")->capture_default_str();
  e->add_option("--bins", ev.bins)->capture_default_str();
  e->add_option("--proportions", ev.proportions)->capture_default_str();
  e->add_option("--selection-fraction", ev.selection_fraction)->capture_default_str();

  RankArgs rk;
  auto* k = app.add_subcommand("rank", "Rank a pseudo-labeled file by evidential support");
  k->add_option("--model", rk.model, "Checkpoint (.bin)")->required();
  k->add_option("--labeled", rk.labeled, "Labeled split file (.jsonl)")->required();
  k->add_option("--input", rk.input, "Documents to rank (.jsonl)")->required();
  k->add_option("--labels", rk.labels, "labels.json")->required();
  k->add_option("--config", rk.config, "JSON config (vectorizer settings)");
  k->add_option("--d-f", rk.d_f)->capture_default_str();
  k->add_option("--n-prototypes", rk.n_prototypes)->capture_default_str();
  k->add_option("--features-out", rk.features_out, "Feature dump (.jsonl)");
  k->add_option("--index-out", rk.index_out, "Index dump (.jsonl)");
  k->add_option("--out", rk.out, "Ranked CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*p) return cmd_prepare(prep);
    if (*r) {
      if (*seeds_opt) run.seeds = parse_seed_list(seeds);
      if (*seed_opt) run.seeds = {seed};
      auto& ov = run.overrides;
      if (*o_pt) ov["pt_epochs"] = pt_epochs;
      if (*o_nt) ov["nt_epochs"] = nt_epochs;
      if (*o_sel) ov["selnt_epochs"] = selnt_epochs;
      if (*o_lr) ov["lr"] = lr;
      if (*o_batch) ov["batch"] = batch;
      if (*o_df) ov["d_f"] = d_f;
      if (*o_ptc) ov["ptconf_threshold"] = ptconf;
      if (*o_rounds) ov["rounds"] = rounds;
      if (!run.variant.empty()) ov["variant"] = run.variant;
      return cmd_run(run);
    }
    if (*e) {
      std::stringstream in(probes);
      std::string item;
      while (std::getline(in, item, ','))
        if (!item.empty()) ev.probes.push_back(item);
      return cmd_eval(ev);
    }
    if (*k) return cmd_rank(rk);
  } catch (const CLI::ValidationError& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const rnt::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kUsage;
  } catch (const rnt::InvalidArgument& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kUsage;
  } catch (const rnt::MissingArtifact& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kMissing;
  } catch (const rnt::DivergenceError& err) {
    std::cerr << "training diverged: " << err.what() << "\n";
    return kDiverged;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kError;
  }
  return kUsage;
}
