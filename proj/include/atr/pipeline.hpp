#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atr/cache.hpp"
#include "atr/candidates.hpp"
#include "atr/config.hpp"
#include "atr/corpus.hpp"
#include "atr/evaluation.hpp"
#include "atr/score_table.hpp"

namespace atr {

struct PipelinePaths {
  std::filesystem::path corpus;
  std::filesystem::path gold;
  std::filesystem::path reference;
  std::filesystem::path link_stats;
  std::filesystem::path embeddings;
};

/// Last stage to run.
enum class Stage { candidates, scores, ranking, evaluation };

struct StageReport {
  std::string name;  // "corpus", "candidates", "score:<method>", "ranking", "evaluation"
  std::string key;   // empty for uncached stages
  bool cache_hit = false;
  double seconds = 0.0;
};

struct PipelineResult {
  CandidateSet candidates;
  std::vector<ScoreTable> scores;  // configured scorer order
  ScoreTable ranking;
  std::vector<std::string> ranked;  // ranking order
  std::optional<EvalResult> evaluation;
  std::vector<StageReport> reports;

  /// nullptr when the stage did not run.
  const StageReport* report(const std::string& name) const;
};

struct RunOptions {
  Stage until = Stage::ranking;
  CacheStore cache;  // disabled by default
};

/// Checks that every file the configured stages need is given and exists.
/// Throws ConfigError for a missing flag and IoError for a missing file.
void validate_resources(const PipelineConfig& cfg, const PipelinePaths& paths, Stage until);

/// Runs the stages in order, consulting the cache before each one. Resources
/// are validated and loaded before any computation starts.
PipelineResult run_pipeline(const PipelineConfig& cfg, const PipelinePaths& paths, const RunOptions& options = {});

/// Stage payload encodings, exposed for tests.
nlohmann::json candidates_to_json(const CandidateSet& set);
CandidateSet candidates_from_json(const nlohmann::json& j);
nlohmann::json score_table_to_json(const ScoreTable& table);
ScoreTable score_table_from_json(const nlohmann::json& j);

/// A parameter sweep over either one scorer (ranking by that scorer alone) or
/// the configured ranker.
struct GridSpec {
  std::string target;  // "scorer" or "ranker"
  std::string method;  // scorer method when target is "scorer"
  std::map<std::string, std::vector<nlohmann::json>> axes;

  std::vector<ParamSet> param_sets() const;
  /// `base` with one parameter set applied.
  PipelineConfig apply(const PipelineConfig& base, const ParamSet& params) const;
  /// Name used in the results CSV.
  std::string label(const PipelineConfig& base) const;
};

GridSpec parse_grid_spec(const nlohmann::json& j);
GridSpec load_grid_spec(const std::filesystem::path& path);

struct Dataset {
  std::string name;
  PipelinePaths paths;
};

/// {"datasets": [{"name", "corpus", "gold", "reference", "link_stats",
/// "embeddings"}]}; relative paths resolve against the manifest's directory.
std::vector<Dataset> load_dataset_manifest(const std::filesystem::path& path);

/// Evaluates every parameter set on every dataset through run_pipeline.
GridResults run_grid(const PipelineConfig& base, const GridSpec& spec, const std::vector<Dataset>& datasets,
                     const CacheStore& cache);

}  // namespace atr
