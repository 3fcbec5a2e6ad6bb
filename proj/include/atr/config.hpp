#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "atr/candidates.hpp"
#include "atr/ranking.hpp"
#include "atr/scoring_context.hpp"
#include "atr/scoring_freq.hpp"
#include "atr/scoring_topic.hpp"
#include "atr/scoring_wiki.hpp"

namespace atr {

using Json = nlohmann::json;

struct PreprocessingConfig {
  std::string input_format = "auto";  // auto | annotated | plain
};

struct CandidatesStageConfig {
  int min_order = 1;
  int max_order = 4;
  int min_lemma_length = 3;
  std::string noise_pattern = kDefaultNoisePattern;
  std::string pos_pattern = kDefaultPosPattern;
  int min_term_frequency = 2;
  std::string stop_words = "smart";  // "smart" for the bundled list, otherwise a file path
};

/// One scoring method with its parameters. `params` always holds every
/// parameter the method accepts, defaults filled in.
struct ScorerConfig {
  std::string method;
  Json params = Json::object();
};

/// type: single (rank by one scorer), linear, voting or pu_atr. Features are
/// the configured scorers in order.
struct RankerConfig {
  std::string type = "pu_atr";
  Json params = Json::object();
};

struct EvaluationConfig {
  int k = 0;  // 0 picks K as the number of gold terms among the candidates
  bool lemmatize_gold = false;
};

struct PipelineConfig {
  PreprocessingConfig preprocessing;
  CandidatesStageConfig candidates;
  std::vector<ScorerConfig> scorers;
  RankerConfig ranker;
  EvaluationConfig evaluation;

  /// Six-feature PU-ATR setup.
  static PipelineConfig defaults();
  friend bool operator==(const PipelineConfig& a, const PipelineConfig& b);
};

/// Every known scoring method name.
const std::vector<std::string>& scorer_methods();

/// Default parameters of a method; throws ConfigError for an unknown method.
Json scorer_defaults(const std::string& method);
Json ranker_defaults(const std::string& type);

/// Merges `overrides` into the method's defaults. Unknown keys and values of
/// the wrong type raise ConfigError naming the key.
ScorerConfig make_scorer_config(const std::string& method, const Json& overrides = Json::object());
RankerConfig make_ranker_config(const std::string& type, const Json& overrides = Json::object());

Json to_json(const PipelineConfig& cfg);
/// Strict: unknown fields raise ConfigError naming the field; missing fields
/// take their defaults.
PipelineConfig config_from_json(const Json& j);
PipelineConfig load_config(const std::filesystem::path& path);
PipelineConfig parse_config(const std::string& text);

/// Compact JSON with sorted keys; integers and reals keep distinct forms.
std::string canonical_dump(const Json& j);
std::string canonical_dump(const PipelineConfig& cfg);

/// Overrides every seed in the tree (topic model and PU-ATR).
void apply_seed(PipelineConfig& cfg, std::uint64_t seed);

CandidateFilterConfig to_filter_config(const CandidatesStageConfig& cfg);
FreqScoringConfig freq_config(const ScorerConfig& cfg);
DomainCoherenceConfig coherence_config(const ScorerConfig& cfg);
TopicModelConfig topic_config(const ScorerConfig& cfg);
KeyConceptConfig key_concept_config(const ScorerConfig& cfg);
PuConfig pu_config(const RankerConfig& cfg);

/// Which external resource a method needs, if any.
enum class Resource { none, reference, link_stats, embeddings };
Resource required_resource(const std::string& method);

}  // namespace atr
