#include "atr/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>
#include <regex>
#include <set>
#include <sstream>

#include "atr/error.hpp"
#include "atr/log.hpp"
#include "atr/parallel.hpp"
#include "atr/ranking.hpp"
#include "atr/scoring_context.hpp"
#include "atr/scoring_freq.hpp"
#include "atr/scoring_reference.hpp"
#include "atr/scoring_topic.hpp"
#include "atr/scoring_wiki.hpp"

namespace atr {

namespace fs = std::filesystem;
using nlohmann::json;

const StageReport* PipelineResult::report(const std::string& name) const {
  for (const auto& r : reports) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

namespace {

const char* flag_for(Resource r) {
  switch (r) {
    case Resource::reference:
      return "--reference";
    case Resource::link_stats:
      return "--link-stats";
    case Resource::embeddings:
      return "--embeddings";
    case Resource::none:
      break;
  }
  return "";
}

const fs::path& path_for(Resource r, const PipelinePaths& paths) {
  switch (r) {
    case Resource::reference:
      return paths.reference;
    case Resource::link_stats:
      return paths.link_stats;
    default:
      return paths.embeddings;
  }
}

void require_file(const fs::path& path, const std::string& flag, const std::string& needed_by) {
  if (path.empty()) throw ConfigError(flag + " is required by " + needed_by);
  std::error_code ec;
  if (!fs::exists(path, ec)) throw IoError(path.string() + " (" + flag + ", needed by " + needed_by + ") does not exist");
}

class StageTimer {
 public:
  StageTimer(std::vector<StageReport>& reports, std::string name, std::string key)
      : reports_(reports), report_{std::move(name), std::move(key), false, 0.0},
        start_(std::chrono::steady_clock::now()) {}

  void hit() { report_.cache_hit = true; }

  ~StageTimer() {
    report_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    char buf[128];
    std::snprintf(buf, sizeof buf, "stage %s: %s in %.3f s", report_.name.c_str(),
                  report_.cache_hit ? "cache hit" : "computed", report_.seconds);
    log::info(buf);
    reports_.push_back(std::move(report_));
  }

 private:
  std::vector<StageReport>& reports_;
  StageReport report_;
  std::chrono::steady_clock::time_point start_;
};

AnnotatedCorpus read_corpus(const fs::path& path, const std::string& format) {
  const bool dir = fs::is_directory(path);
  if (format == "annotated" && dir) throw IoError(path.string() + " is a directory, expected an annotated file");
  if (format == "plain" && !dir) throw IoError(path.string() + " is not a directory of plain-text files");
  return dir ? load_plain_corpus(path) : load_annotated_corpus(path);
}

json scorer_stage_json(const ScorerConfig& s) {
  json j = s.params;
  j["method"] = s.method;
  return {{"stage", "score"}, {"scorer", std::move(j)}};
}

struct Resources {
  std::optional<ReferenceTable> reference;
  std::optional<LinkStatsTable> link_stats;
  std::optional<EmbeddingModel> embeddings;
  std::string reference_digest, link_stats_digest, embeddings_digest;
};

TokenPredicate topic_vocabulary_filter(const CandidateFilterConfig& f) {
  auto noise = std::make_shared<std::regex>(f.noise_pattern);
  auto stop = std::make_shared<std::set<std::string>>(f.stop_words);
  const auto min_len = static_cast<std::size_t>(f.min_lemma_length);
  return [noise, stop, min_len](const Token& t) {
    return t.lemma.size() >= min_len && !stop->contains(t.lemma) && std::regex_match(t.lemma, *noise);
  };
}

ScoreTable compute_score(const ScorerConfig& s, const CandidateSet& set, const AnnotatedCorpus& corpus,
                         const Resources& res, const CandidateFilterConfig& filter) {
  const auto& m = s.method;
  const auto freq = freq_config(s);
  if (m == "TF") return score_tf(set);
  if (m == "ATF") return score_atf(set);
  if (m == "TFIDF") return score_tfidf(set, set.document_count);
  if (m == "RIDF") return score_ridf(set, set.document_count);
  if (m == "CValue") return score_cvalue(set);
  if (m == "Basic") return score_basic(set, freq.alpha, freq.basic_multiword_only);
  if (m == "ComboBasic") return score_combobasic(set, freq.alpha, freq.beta);
  if (m == "DomainCoherence") return score_domain_coherence(set, corpus, coherence_config(s));
  if (m == "DomainPertinence" || m == "Weirdness" || m == "Relevance") {
    ReferenceTable ref = *res.reference;
    ref.smoothing = s.params["smoothing"].get<double>();
    if (m == "DomainPertinence") return score_domain_pertinence(set, ref);
    if (m == "Weirdness") return score_weirdness(set, corpus, ref);
    return score_relevance(set, corpus, ref);
  }
  if (m == "NovelTopicModel") {
    const auto model = fit_topic_model(corpus, topic_config(s), topic_vocabulary_filter(filter));
    return score_novel_topic_model(set, model);
  }
  if (m == "WikiPresence" || m == "LinkProbability") {
    LinkStatsTable links = *res.link_stats;
    if (m == "WikiPresence") return score_wiki_presence(set, links);
    links.threshold = s.params["threshold"].get<double>();
    return score_link_probability(set, links);
  }
  if (m == "KeyConceptRelatedness") {
    const auto kc = key_concept_config(s);
    const auto keys = extract_key_concepts(corpus, set, *res.embeddings, kc);
    return score_key_concept_relatedness(set, *res.embeddings, keys, kc);
  }
  throw ConfigError("unknown scoring method '" + m + "'");
}

ScoreTable compute_ranking(const PipelineConfig& cfg, const CandidateSet& set, const std::vector<ScoreTable>& tables) {
  const auto& type = cfg.ranker.type;
  if (type == "single") {
    const auto method = cfg.ranker.params["method"].get<std::string>();
    for (const auto& t : tables) {
      if (t.method == method) return t;
    }
    throw ConfigError("ranker.method '" + method + "' is not among the configured scorers");
  }
  const auto matrix = build_feature_matrix(tables, set);
  if (type == "linear") {
    auto weights = cfg.ranker.params["weights"].get<std::vector<double>>();
    if (weights.empty()) weights.assign(matrix.cols(), 1.0);
    return linear_combination(matrix, weights);
  }
  if (type == "voting") return voting(matrix);
  return pu_atr(matrix, set, pu_config(cfg.ranker));
}

}  // namespace

void validate_resources(const PipelineConfig& cfg, const PipelinePaths& paths, Stage until) {
  if (paths.corpus.empty()) throw ConfigError("--corpus is required");
  std::error_code ec;
  if (!fs::exists(paths.corpus, ec)) throw IoError("corpus " + paths.corpus.string() + " does not exist");
  if (cfg.candidates.stop_words != "smart") {
    require_file(cfg.candidates.stop_words, "candidates.stop_words", "the candidate filter");
  }
  if (until != Stage::candidates) {
    for (const auto& s : cfg.scorers) {
      const auto r = required_resource(s.method);
      if (r != Resource::none) require_file(path_for(r, paths), flag_for(r), s.method);
    }
  }
  if (until == Stage::evaluation) require_file(paths.gold, "--gold", "evaluation");
}

json candidates_to_json(const CandidateSet& set) {
  json list = json::array();
  for (const auto& [canonical, c] : set.candidates) {
    std::vector<std::uint32_t> occ;
    occ.reserve(3 * c.occurrences.size());
    for (const auto& o : c.occurrences) {
      occ.push_back(o.doc);
      occ.push_back(o.sentence);
      occ.push_back(o.offset);
    }
    list.push_back(json::array({canonical, c.words, c.length_words, c.tf, c.doc_tf, occ}));
  }
  return {{"document_count", set.document_count}, {"total_word_count", set.total_word_count}, {"candidates", list}};
}

CandidateSet candidates_from_json(const json& j) {
  CandidateSet set;
  set.document_count = j.at("document_count").get<std::size_t>();
  set.total_word_count = j.at("total_word_count").get<std::size_t>();
  for (const auto& row : j.at("candidates")) {
    TermCandidate c;
    c.canonical = row.at(0).get<std::string>();
    c.words = row.at(1).get<std::vector<std::string>>();
    c.length_words = row.at(2).get<int>();
    c.tf = row.at(3).get<std::uint64_t>();
    c.doc_tf = row.at(4).get<std::map<std::string, std::uint64_t>>();
    const auto occ = row.at(5).get<std::vector<std::uint32_t>>();
    if (occ.size() % 3 != 0) throw std::runtime_error("bad occurrence list");
    for (std::size_t i = 0; i < occ.size(); i += 3) c.occurrences.push_back({occ[i], occ[i + 1], occ[i + 2]});
    auto key = c.canonical;
    set.candidates.emplace(std::move(key), std::move(c));
  }
  build_containment(set);
  return set;
}

json score_table_to_json(const ScoreTable& table) {
  json scores = json::array();
  for (const auto& [c, v] : table.scores) scores.push_back(json::array({c, v}));
  return {{"method", table.method}, {"scores", scores}};
}

ScoreTable score_table_from_json(const json& j) {
  ScoreTable t;
  t.method = j.at("method").get<std::string>();
  for (const auto& row : j.at("scores")) t.scores.emplace(row.at(0).get<std::string>(), row.at(1).get<double>());
  return t;
}

namespace {

// Decodes a cached payload; a payload that fails to decode counts as a miss.
template <typename T, typename Decode>
std::optional<T> cached(const CacheStore& cache, const std::string& key, Decode decode) {
  auto payload = cache.load(key);
  if (!payload) return std::nullopt;
  try {
    return decode(*payload);
  } catch (const std::exception& e) {
    log::warn("undecodable cache entry " + cache.entry_path(key).string() + " (" + e.what() + "); recomputing");
    return std::nullopt;
  }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, const PipelinePaths& paths, const RunOptions& options) {
  validate_resources(cfg, paths, options.until);
  const auto& cache = options.cache;
  const auto filter = to_filter_config(cfg.candidates);

  Resources res;
  if (options.until != Stage::candidates) {
    for (const auto& s : cfg.scorers) {
      switch (required_resource(s.method)) {
        case Resource::reference:
          if (!res.reference) {
            res.reference = load_reference_table(paths.reference);
            res.reference_digest = content_digest(paths.reference);
          }
          break;
        case Resource::link_stats:
          if (!res.link_stats) {
            res.link_stats = load_link_stats(paths.link_stats);
            res.link_stats_digest = content_digest(paths.link_stats);
          }
          break;
        case Resource::embeddings:
          if (!res.embeddings) {
            res.embeddings = load_embeddings(paths.embeddings);
            res.embeddings_digest = content_digest(paths.embeddings);
          }
          break;
        case Resource::none:
          break;
      }
    }
  }
  std::optional<GoldStandard> gold;
  if (options.until == Stage::evaluation) gold = load_gold_standard(paths.gold, cfg.evaluation.lemmatize_gold);

  PipelineResult result;

  // Preprocessing.
  const std::string corpus_key =
      cache_key({{"stage", "corpus"}, {"preprocessing", to_json(cfg).at("preprocessing")}},
                {content_digest(paths.corpus)});
  AnnotatedCorpus corpus;
  {
    StageTimer timer(result.reports, "corpus", corpus_key);
    auto hit = cached<AnnotatedCorpus>(cache, corpus_key, [](const json& p) {
      std::istringstream in(p.get<std::string>());
      return parse_annotated_corpus(in, "<cache>");
    });
    if (hit) {
      corpus = std::move(*hit);
      timer.hit();
    } else {
      corpus = read_corpus(paths.corpus, cfg.preprocessing.input_format);
      std::ostringstream out;
      write_annotated_corpus(out, corpus);
      cache.store(corpus_key, out.str());
    }
  }

  // Candidate collection.
  std::vector<std::string> upstream{corpus_key};
  if (cfg.candidates.stop_words != "smart") upstream.push_back(content_digest(cfg.candidates.stop_words));
  const std::string candidates_key =
      cache_key({{"stage", "candidates"}, {"candidates", to_json(cfg).at("candidates")}}, upstream);
  {
    StageTimer timer(result.reports, "candidates", candidates_key);
    auto hit = cached<CandidateSet>(cache, candidates_key, candidates_from_json);
    if (hit) {
      result.candidates = std::move(*hit);
      timer.hit();
    } else {
      result.candidates = collect_candidates(corpus, filter);
      cache.store(candidates_key, candidates_to_json(result.candidates));
    }
  }
  if (result.candidates.empty()) throw Error("no term candidates survived the filters");
  if (options.until == Stage::candidates) return result;

  // Scoring.
  std::vector<std::string> score_keys;
  for (const auto& s : cfg.scorers) {
    std::vector<std::string> up{candidates_key, corpus_key};
    switch (required_resource(s.method)) {
      case Resource::reference:
        up.push_back(res.reference_digest);
        break;
      case Resource::link_stats:
        up.push_back(res.link_stats_digest);
        break;
      case Resource::embeddings:
        up.push_back(res.embeddings_digest);
        break;
      case Resource::none:
        break;
    }
    const auto key = cache_key(scorer_stage_json(s), up);
    score_keys.push_back(key);
    StageTimer timer(result.reports, "score:" + s.method, key);
    auto hit = cached<ScoreTable>(cache, key, score_table_from_json);
    if (hit) {
      result.scores.push_back(std::move(*hit));
      timer.hit();
    } else {
      result.scores.push_back(compute_score(s, result.candidates, corpus, res, filter));
      cache.store(key, score_table_to_json(result.scores.back()));
    }
  }
  if (options.until == Stage::scores) return result;

  // Ranking.
  json features = json::array();
  for (const auto& s : cfg.scorers) features.push_back(s.method);
  json ranker = cfg.ranker.params;
  ranker["type"] = cfg.ranker.type;
  score_keys.push_back(candidates_key);
  const auto ranking_key = cache_key({{"stage", "ranking"}, {"ranker", ranker}, {"features", features}}, score_keys);
  {
    StageTimer timer(result.reports, "ranking", ranking_key);
    auto hit = cached<ScoreTable>(cache, ranking_key, score_table_from_json);
    if (hit) {
      result.ranking = std::move(*hit);
      timer.hit();
    } else {
      result.ranking = compute_ranking(cfg, result.candidates, result.scores);
      cache.store(ranking_key, score_table_to_json(result.ranking));
    }
  }
  result.ranked = rank_by_score(result.ranking);
  if (options.until == Stage::ranking) return result;

  // Evaluation.
  {
    StageTimer timer(result.reports, "evaluation", "");
    const std::size_t k =
        cfg.evaluation.k > 0 ? static_cast<std::size_t>(cfg.evaluation.k) : choose_k(result.candidates, *gold);
    if (k > result.ranked.size()) {
      throw EvaluationError("K=" + std::to_string(k) + " exceeds the " + std::to_string(result.ranked.size()) +
                            " ranked candidates");
    }
    result.evaluation = average_precision(result.ranked, *gold, k);
  }
  return result;
}

std::vector<ParamSet> GridSpec::param_sets() const { return cartesian_grid(axes); }

PipelineConfig GridSpec::apply(const PipelineConfig& base, const ParamSet& params) const {
  PipelineConfig cfg = base;
  if (target == "scorer") {
    json overrides = params;
    for (const auto& s : base.scorers) {
      if (s.method != method) continue;
      overrides = s.params;
      for (const auto& [k, v] : params.items()) overrides[k] = v;
    }
    cfg.scorers = {make_scorer_config(method, overrides)};
    cfg.ranker = make_ranker_config("single", {{"method", method}});
  } else {
    json overrides = base.ranker.params;
    for (const auto& [k, v] : params.items()) overrides[k] = v;
    cfg.ranker = make_ranker_config(base.ranker.type, overrides);
  }
  return cfg;
}

std::string GridSpec::label(const PipelineConfig& base) const {
  return target == "scorer" ? method : base.ranker.type;
}

GridSpec parse_grid_spec(const json& j) {
  if (!j.is_object()) throw ConfigError("grid spec must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "target" && key != "method" && key != "axes") throw ConfigError("unknown field '" + key + "' in grid");
  }
  GridSpec spec;
  spec.target = j.value("target", std::string("scorer"));
  if (spec.target != "scorer" && spec.target != "ranker") throw ConfigError("grid.target must be scorer or ranker");
  if (spec.target == "scorer") {
    if (!j.contains("method") || !j["method"].is_string()) throw ConfigError("grid.method is required for a scorer grid");
    spec.method = j["method"].get<std::string>();
    scorer_defaults(spec.method);
  }
  if (!j.contains("axes") || !j["axes"].is_object()) throw ConfigError("grid.axes must be an object");
  for (const auto& [name, values] : j["axes"].items()) {
    if (!values.is_array()) throw ConfigError("grid.axes." + name + " must be an array");
    spec.axes[name] = values.get<std::vector<json>>();
  }
  return spec;
}

GridSpec load_grid_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read grid spec " + path.string());
  try {
    return parse_grid_spec(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("malformed grid spec " + path.string() + ": " + e.what());
  }
}

std::vector<Dataset> load_dataset_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read dataset manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed dataset manifest " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("datasets") || !j["datasets"].is_array()) {
    throw ConfigError("dataset manifest needs a 'datasets' array");
  }
  const auto base = path.parent_path();
  auto resolve = [&](const json& entry, const char* field) -> fs::path {
    if (!entry.contains(field)) return {};
    const fs::path p = entry[field].get<std::string>();
    return p.is_absolute() ? p : base / p;
  };
  std::vector<Dataset> out;
  for (const auto& entry : j["datasets"]) {
    for (const auto& [key, _] : entry.items()) {
      static const std::set<std::string> known{"name", "corpus", "gold", "reference", "link_stats", "embeddings"};
      if (!known.contains(key)) throw ConfigError("unknown field '" + key + "' in dataset manifest");
    }
    if (!entry.contains("name") || !entry.contains("corpus")) throw ConfigError("each dataset needs name and corpus");
    Dataset d;
    d.name = entry["name"].get<std::string>();
    d.paths = {resolve(entry, "corpus"), resolve(entry, "gold"), resolve(entry, "reference"),
               resolve(entry, "link_stats"), resolve(entry, "embeddings")};
    out.push_back(std::move(d));
  }
  return out;
}

GridResults run_grid(const PipelineConfig& base, const GridSpec& spec, const std::vector<Dataset>& datasets,
                     const CacheStore& cache) {
  const auto grid = spec.param_sets();
  std::vector<PipelineConfig> configs;
  for (const auto& p : grid) configs.push_back(spec.apply(base, p));
  std::map<std::string, const Dataset*> by_name;
  std::vector<std::string> names;
  for (const auto& d : datasets) {
    if (!by_name.emplace(d.name, &d).second) throw ConfigError("dataset '" + d.name + "' listed twice");
    names.push_back(d.name);
    for (const auto& c : configs) validate_resources(c, d.paths, Stage::evaluation);
  }
  RunOptions opts{Stage::evaluation, cache};
  // Shared upstream stages are computed once per dataset before the cells fan out.
  if (!grid.empty() && cache.enabled()) {
    for (const auto& d : datasets) run_pipeline(configs.front(), d.paths, opts);
  }
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < grid.size(); ++i) index[param_key(grid[i])] = i;
  return grid_search(grid, names, [&](const ParamSet& p, const std::string& ds) {
    return *run_pipeline(configs[index.at(param_key(p))], by_name.at(ds)->paths, opts).evaluation;
  });
}

}  // namespace atr
