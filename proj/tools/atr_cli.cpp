// Command-line front end: atr <subcommand> [options]

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "atr/cache.hpp"
#include "atr/config.hpp"
#include "atr/error.hpp"
#include "atr/evaluation.hpp"
#include "atr/log.hpp"
#include "atr/parallel.hpp"
#include "atr/pipeline.hpp"
#include "atr/ranking.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Options {
  std::string config;
  std::string corpus, gold, reference, link_stats, embeddings;
  std::string out;
  std::string cache_dir;
  bool no_cache = false;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  bool quiet = false;
  // grid-search / cv-select
  std::string grid, datasets, results, held_out;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "Pipeline configuration (JSON); built-in defaults when omitted");
  cmd->add_option("--corpus", o.corpus, "Annotated corpus file or directory of plain-text files");
  cmd->add_option("--gold", o.gold, "Gold-standard term list");
  cmd->add_option("--reference", o.reference, "Reference-corpus frequency table");
  cmd->add_option("--link-stats", o.link_stats, "Hyperlink statistics table");
  cmd->add_option("--embeddings", o.embeddings, "Word embeddings in text format");
  cmd->add_option("--out", o.out, "Output file (directory for `score`); stdout when omitted");
  cmd->add_option("--cache-dir", o.cache_dir, "Stage cache directory (default $ATR_CACHE_DIR or ./.atr-cache)");
  cmd->add_flag("--no-cache", o.no_cache, "Neither read nor write the stage cache");
  cmd->add_option("--threads", o.threads, "Worker threads, 0 for all cores");
  cmd->add_option("--seed", o.seed, "Overrides every random seed in the configuration");
  cmd->add_flag("-v,--verbose", o.verbose, "Log stage timings and progress");
  cmd->add_flag("-q,--quiet", o.quiet, "Log errors only");
}

atr::PipelineConfig load(const Options& o) {
  auto cfg = o.config.empty() ? atr::PipelineConfig::defaults() : atr::load_config(o.config);
  if (o.seed) atr::apply_seed(cfg, *o.seed);
  return cfg;
}

atr::PipelinePaths paths(const Options& o) { return {o.corpus, o.gold, o.reference, o.link_stats, o.embeddings}; }

atr::CacheStore cache(const Options& o) {
  return atr::CacheStore(o.cache_dir.empty() ? atr::default_cache_dir() : std::filesystem::path(o.cache_dir),
                         !o.no_cache);
}

// Writes through `fn` to --out, or to stdout.
template <typename Fn>
void emit(const Options& o, Fn fn) {
  if (o.out.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(o.out);
  if (!out) throw atr::IoError("cannot write " + o.out);
  fn(out);
  if (!out) throw atr::IoError("error writing " + o.out);
}

atr::PipelineResult run(const Options& o, atr::Stage until) {
  atr::RunOptions opts{until, cache(o)};
  return atr::run_pipeline(load(o), paths(o), opts);
}

int cmd_candidates(const Options& o) {
  const auto r = run(o, atr::Stage::candidates);
  emit(o, [&](std::ostream& out) { atr::write_candidates_tsv(out, r.candidates); });
  return 0;
}

int cmd_score(const Options& o) {
  if (o.out.empty()) throw atr::ConfigError("score needs --out <directory>");
  const auto r = run(o, atr::Stage::scores);
  std::filesystem::create_directories(o.out);
  for (const auto& table : r.scores) {
    const auto file = std::filesystem::path(o.out) / (table.method + ".tsv");
    std::ofstream out(file);
    if (!out) throw atr::IoError("cannot write " + file.string());
    atr::write_score_table(out, table);
  }
  return 0;
}

int cmd_rank(const Options& o) {
  const auto r = run(o, atr::Stage::ranking);
  emit(o, [&](std::ostream& out) { atr::write_ranking(out, r.ranking); });
  return 0;
}

int cmd_evaluate(const Options& o) {
  const auto r = run(o, atr::Stage::evaluation);
  emit(o, [&](std::ostream& out) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", r.evaluation->avp);
    out << "K\t" << r.evaluation->k << "\nAvP\t" << buf << '\n';
  });
  return 0;
}

int cmd_grid_search(const Options& o) {
  const auto base = load(o);
  const auto spec = atr::load_grid_spec(o.grid);
  const auto datasets = atr::load_dataset_manifest(o.datasets);
  const auto results = atr::run_grid(base, spec, datasets, cache(o));
  emit(o, [&](std::ostream& out) { atr::write_results_csv(out, spec.label(base), results); });
  return 0;
}

int cmd_cv_select(const Options& o) {
  std::ifstream in(o.results);
  if (!in) throw atr::IoError("cannot read " + o.results);
  const auto results = atr::read_results_csv(in, o.results);
  const auto sel = atr::cv_select(results, o.held_out);
  emit(o, [&](std::ostream& out) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", sel.goodness);
    out << "param_set\t" << sel.param_set << "\ngoodness\t" << buf << '\n';
    if (!o.held_out.empty() && std::find(results.datasets.begin(), results.datasets.end(), o.held_out) !=
                                   results.datasets.end()) {
      std::snprintf(buf, sizeof buf, "%.6f", results.avp(sel.param_set, o.held_out));
      out << "held_out_avp\t" << buf << '\n';
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automatic term recognition: candidate extraction, scoring, ranking and evaluation"};
  app.require_subcommand(1);
  Options o;

  auto* candidates = app.add_subcommand("candidates", "Collect term candidates (TSV)");
  auto* score = app.add_subcommand("score", "Score candidates with every configured method (one TSV per method)");
  auto* rank = app.add_subcommand("rank", "Rank candidates with the configured ranker");
  auto* evaluate = app.add_subcommand("evaluate", "Rank and report AvP@K against a gold standard");
  auto* grid = app.add_subcommand("grid-search", "Evaluate a parameter grid on several datasets (CSV)");
  auto* cv = app.add_subcommand("cv-select", "Pick a parameter set by leave-one-dataset-out relative goodness");
  for (auto* cmd : {candidates, score, rank, evaluate, grid, cv}) add_common(cmd, o);
  grid->add_option("--grid", o.grid, "Grid specification (JSON)")->required();
  grid->add_option("--datasets", o.datasets, "Dataset manifest (JSON)")->required();
  cv->add_option("--results", o.results, "Grid-search results CSV")->required();
  cv->add_option("--held-out", o.held_out, "Dataset excluded from selection")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  atr::log::set_level(o.quiet ? atr::log::Level::error : o.verbose ? atr::log::Level::info : atr::log::Level::warn);
  atr::set_thread_count(o.threads);

  try {
    if (candidates->parsed()) return cmd_candidates(o);
    if (score->parsed()) return cmd_score(o);
    if (rank->parsed()) return cmd_rank(o);
    if (evaluate->parsed()) return cmd_evaluate(o);
    if (grid->parsed()) return cmd_grid_search(o);
    return cmd_cv_select(o);
  } catch (const atr::ConfigError& e) {
    std::cerr << "atr: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "atr: " << e.what() << '\n';
    return kExitData;
  }
}
