#include "atr/config.hpp"

#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>

#include "atr/error.hpp"

namespace atr {

namespace {

const std::map<std::string, Json>& scorer_table() {
  static const std::map<std::string, Json> table = [] {
    std::map<std::string, Json> t;
    for (const char* m : {"TF", "ATF", "TFIDF", "RIDF", "CValue", "WikiPresence"}) t[m] = Json::object();
    t["Basic"] = {{"alpha", 0.75}, {"multiword_only", false}};
    t["ComboBasic"] = {{"alpha", 0.75}, {"beta", 0.1}};
    t["DomainCoherence"] = {{"window", 5}, {"seed_count", 200}, {"context_words", 50}, {"basic_alpha", 0.75}};
    for (const char* m : {"DomainPertinence", "Weirdness", "Relevance"}) t[m] = {{"smoothing", 1.0}};
    t["NovelTopicModel"] = {{"topics", 20},           {"alpha_topic", 2.5},   {"beta_word", 0.01},
                            {"lambda_background", 0.1}, {"lambda_docspec", 0.1}, {"lambda_general", 0.8},
                            {"iterations", 500},      {"top_words", 200},     {"seed", 0}};
    t["LinkProbability"] = {{"threshold", 0.018}};
    t["KeyConceptRelatedness"] = {
        {"per_document", 15}, {"total", 500}, {"neighbors", 2}, {"first_words_limit", 800}};
    return t;
  }();
  return table;
}

const std::map<std::string, Json>& ranker_table() {
  static const std::map<std::string, Json> table = {
      {"single", {{"method", "CValue"}}},
      {"linear", {{"weights", Json::array()}}},
      {"voting", Json::object()},
      {"pu_atr",
       {{"seed_count", 100},
        {"spy_fraction", 0.15},
        {"neg_threshold", 0.05},
        {"seed_alpha", 0.75},
        {"seed_beta", 0.1},
        {"rng_seed", 0},
        {"learning_rate", 0.1},
        {"l2", 1e-4},
        {"epochs", 500}}},
  };
  return table;
}

std::string type_name(const Json& v) {
  if (v.is_boolean()) return "a boolean";
  if (v.is_number_integer()) return "an integer";
  if (v.is_number()) return "a number";
  if (v.is_string()) return "a string";
  if (v.is_array()) return "an array";
  return "an object";
}

// Coerces `value` to the kind of `like`: integers stay integers, reals become
// doubles (so 1 and 1.0 serialize alike), arrays hold numbers only.
Json coerce(const Json& like, const Json& value, const std::string& path) {
  auto mismatch = [&] { return ConfigError("field '" + path + "' must be " + type_name(like)); };
  if (like.is_boolean()) {
    if (!value.is_boolean()) throw mismatch();
    return value;
  }
  if (like.is_number_integer()) {
    if (!value.is_number_integer()) throw mismatch();
    if (value.is_number_unsigned()) {
      const auto u = value.get<std::uint64_t>();
      if (u > static_cast<std::uint64_t>(INT64_MAX)) throw ConfigError("field '" + path + "' is out of range");
      return Json(static_cast<std::int64_t>(u));
    }
    return Json(value.get<std::int64_t>());
  }
  if (like.is_number()) {
    if (!value.is_number()) throw mismatch();
    return Json(value.get<double>());
  }
  if (like.is_string()) {
    if (!value.is_string()) throw mismatch();
    return value;
  }
  if (like.is_array()) {
    if (!value.is_array()) throw mismatch();
    Json out = Json::array();
    for (const auto& x : value) {
      if (!x.is_number()) throw ConfigError("field '" + path + "' must hold numbers only");
      out.push_back(x.get<double>());
    }
    return out;
  }
  throw mismatch();
}

Json merge_params(const Json& defaults, const Json& overrides, const std::string& where,
                  const std::set<std::string>& reserved = {}) {
  if (!overrides.is_object()) throw ConfigError("'" + where + "' must be an object");
  Json out = defaults;
  for (const auto& [key, value] : overrides.items()) {
    if (reserved.contains(key)) continue;
    if (!defaults.contains(key)) throw ConfigError("unknown field '" + key + "' in " + where);
    out[key] = coerce(defaults[key], value, where + "." + key);
  }
  return out;
}

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!known.contains(key)) throw ConfigError("unknown field '" + key + "' in " + where);
  }
}

template <typename T>
T read_field(const Json& obj, const std::string& key, const T& fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return coerce(Json(fallback), obj.at(key), where + "." + key).template get<T>();
}

template <typename F>
void check(F&& validate) {
  try {
    validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::regex_error& e) {
    throw ConfigError(std::string("invalid regular expression: ") + e.what());
  }
}

}  // namespace

const std::vector<std::string>& scorer_methods() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, _] : scorer_table()) v.push_back(name);
    return v;
  }();
  return names;
}

Json scorer_defaults(const std::string& method) {
  const auto it = scorer_table().find(method);
  if (it == scorer_table().end()) throw ConfigError("unknown scoring method '" + method + "'");
  return it->second;
}

Json ranker_defaults(const std::string& type) {
  const auto it = ranker_table().find(type);
  if (it == ranker_table().end()) throw ConfigError("unknown ranker type '" + type + "'");
  return it->second;
}

ScorerConfig make_scorer_config(const std::string& method, const Json& overrides) {
  ScorerConfig cfg{method, merge_params(scorer_defaults(method), overrides, "scorer " + method, {"method"})};
  if (method == "NovelTopicModel") check([&] { topic_config(cfg).validate(); });
  if (method == "DomainCoherence") {
    const auto c = coherence_config(cfg);
    if (c.window < 1 || c.seed_count < 1 || c.context_words < 1) {
      throw ConfigError("DomainCoherence window, seed_count and context_words must be positive");
    }
  }
  if (method == "KeyConceptRelatedness") {
    const auto c = key_concept_config(cfg);
    if (c.per_document < 1 || c.total < 1 || c.neighbors < 1 || c.first_words_limit < 1) {
      throw ConfigError("KeyConceptRelatedness parameters must be positive");
    }
  }
  if (method == "LinkProbability") {
    const double t = cfg.params["threshold"].get<double>();
    if (t < 0 || t > 1) throw ConfigError("LinkProbability threshold must lie in [0, 1]");
  }
  if (cfg.params.contains("smoothing") && !(cfg.params["smoothing"].get<double>() > 0)) {
    throw ConfigError(method + " smoothing must be positive");
  }
  return cfg;
}

RankerConfig make_ranker_config(const std::string& type, const Json& overrides) {
  RankerConfig cfg{type, merge_params(ranker_defaults(type), overrides, "ranker", {"type"})};
  if (type == "pu_atr") check([&] { pu_config(cfg).validate(); });
  return cfg;
}

PipelineConfig PipelineConfig::defaults() {
  PipelineConfig cfg;
  for (const char* m :
       {"CValue", "DomainCoherence", "Relevance", "NovelTopicModel", "LinkProbability", "KeyConceptRelatedness"}) {
    cfg.scorers.push_back(make_scorer_config(m));
  }
  cfg.ranker = make_ranker_config("pu_atr");
  return cfg;
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) { return canonical_dump(a) == canonical_dump(b); }

Json to_json(const PipelineConfig& cfg) {
  Json j;
  j["preprocessing"] = {{"input_format", cfg.preprocessing.input_format}};
  const auto& c = cfg.candidates;
  j["candidates"] = {{"min_order", c.min_order},
                     {"max_order", c.max_order},
                     {"min_lemma_length", c.min_lemma_length},
                     {"noise_pattern", c.noise_pattern},
                     {"pos_pattern", c.pos_pattern},
                     {"min_term_frequency", c.min_term_frequency},
                     {"stop_words", c.stop_words}};
  j["scorers"] = Json::array();
  for (const auto& s : cfg.scorers) {
    Json entry = s.params;
    entry["method"] = s.method;
    j["scorers"].push_back(std::move(entry));
  }
  Json ranker = cfg.ranker.params;
  ranker["type"] = cfg.ranker.type;
  j["ranker"] = std::move(ranker);
  j["evaluation"] = {{"k", cfg.evaluation.k}, {"lemmatize_gold", cfg.evaluation.lemmatize_gold}};
  return j;
}

PipelineConfig config_from_json(const Json& j) {
  reject_unknown(j, {"preprocessing", "candidates", "scorers", "ranker", "evaluation"}, "config");
  PipelineConfig cfg;

  const Json pre = j.value("preprocessing", Json::object());
  reject_unknown(pre, {"input_format"}, "preprocessing");
  cfg.preprocessing.input_format = read_field(pre, "input_format", cfg.preprocessing.input_format, "preprocessing");
  const auto& fmt = cfg.preprocessing.input_format;
  if (fmt != "auto" && fmt != "annotated" && fmt != "plain") {
    throw ConfigError("preprocessing.input_format must be auto, annotated or plain");
  }

  const Json cand = j.value("candidates", Json::object());
  reject_unknown(cand,
                 {"min_order", "max_order", "min_lemma_length", "noise_pattern", "pos_pattern", "min_term_frequency",
                  "stop_words"},
                 "candidates");
  auto& c = cfg.candidates;
  c.min_order = read_field(cand, "min_order", c.min_order, "candidates");
  c.max_order = read_field(cand, "max_order", c.max_order, "candidates");
  c.min_lemma_length = read_field(cand, "min_lemma_length", c.min_lemma_length, "candidates");
  c.noise_pattern = read_field(cand, "noise_pattern", c.noise_pattern, "candidates");
  c.pos_pattern = read_field(cand, "pos_pattern", c.pos_pattern, "candidates");
  c.min_term_frequency = read_field(cand, "min_term_frequency", c.min_term_frequency, "candidates");
  c.stop_words = read_field(cand, "stop_words", c.stop_words, "candidates");
  check([&] {
    CandidateFilterConfig f;
    f.min_order = c.min_order;
    f.max_order = c.max_order;
    f.min_lemma_length = c.min_lemma_length;
    f.min_term_frequency = c.min_term_frequency;
    f.validate();
    std::regex(c.noise_pattern);
    std::regex(c.pos_pattern);
  });

  const Json scorers = j.value("scorers", Json::array());
  if (!scorers.is_array()) throw ConfigError("'scorers' must be an array");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < scorers.size(); ++i) {
    const auto& s = scorers[i];
    if (!s.is_object() || !s.contains("method") || !s["method"].is_string()) {
      throw ConfigError("scorers[" + std::to_string(i) + "] needs a string 'method'");
    }
    const auto method = s["method"].get<std::string>();
    if (!seen.insert(method).second) throw ConfigError("scoring method '" + method + "' listed twice");
    cfg.scorers.push_back(make_scorer_config(method, s));
  }
  if (cfg.scorers.empty()) throw ConfigError("at least one scorer is required");

  const Json ranker = j.value("ranker", Json{{"type", "pu_atr"}});
  if (!ranker.is_object()) throw ConfigError("'ranker' must be an object");
  const std::string type = ranker.contains("type") ? ranker["type"].get<std::string>() : "pu_atr";
  cfg.ranker = make_ranker_config(type, ranker);
  if (type == "single") {
    const auto m = cfg.ranker.params["method"].get<std::string>();
    if (!seen.contains(m)) throw ConfigError("ranker.method '" + m + "' is not among the configured scorers");
  }
  if (type == "linear") {
    const auto n = cfg.ranker.params["weights"].size();
    if (n != 0 && n != cfg.scorers.size()) throw ConfigError("ranker.weights needs one weight per scorer");
  }

  const Json eval = j.value("evaluation", Json::object());
  reject_unknown(eval, {"k", "lemmatize_gold"}, "evaluation");
  cfg.evaluation.k = read_field(eval, "k", cfg.evaluation.k, "evaluation");
  cfg.evaluation.lemmatize_gold = read_field(eval, "lemmatize_gold", cfg.evaluation.lemmatize_gold, "evaluation");
  if (cfg.evaluation.k < 0) throw ConfigError("evaluation.k must be non-negative");
  return cfg;
}

PipelineConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string canonical_dump(const Json& j) { return j.dump(); }

std::string canonical_dump(const PipelineConfig& cfg) { return canonical_dump(to_json(cfg)); }

void apply_seed(PipelineConfig& cfg, std::uint64_t seed) {
  const auto s = static_cast<std::int64_t>(seed & static_cast<std::uint64_t>(INT64_MAX));
  for (auto& scorer : cfg.scorers) {
    if (scorer.params.contains("seed")) scorer.params["seed"] = s;
  }
  if (cfg.ranker.params.contains("rng_seed")) cfg.ranker.params["rng_seed"] = s;
}

CandidateFilterConfig to_filter_config(const CandidatesStageConfig& c) {
  CandidateFilterConfig f;
  f.min_order = c.min_order;
  f.max_order = c.max_order;
  f.min_lemma_length = c.min_lemma_length;
  f.noise_pattern = c.noise_pattern;
  f.pos_pattern = c.pos_pattern;
  f.min_term_frequency = c.min_term_frequency;
  f.stop_words = c.stop_words == "smart" ? smart_stop_words() : load_stop_words(c.stop_words);
  return f;
}

FreqScoringConfig freq_config(const ScorerConfig& cfg) {
  FreqScoringConfig f;
  f.alpha = cfg.params.value("alpha", f.alpha);
  f.beta = cfg.params.value("beta", f.beta);
  f.basic_multiword_only = cfg.params.value("multiword_only", f.basic_multiword_only);
  return f;
}

DomainCoherenceConfig coherence_config(const ScorerConfig& cfg) {
  DomainCoherenceConfig d;
  d.window = cfg.params.value("window", d.window);
  d.seed_count = cfg.params.value("seed_count", d.seed_count);
  d.context_words = cfg.params.value("context_words", d.context_words);
  d.basic_alpha = cfg.params.value("basic_alpha", d.basic_alpha);
  return d;
}

TopicModelConfig topic_config(const ScorerConfig& cfg) {
  TopicModelConfig t;
  const auto& p = cfg.params;
  t.topics = p.value("topics", t.topics);
  t.alpha_topic = p.value("alpha_topic", t.alpha_topic);
  t.beta_word = p.value("beta_word", t.beta_word);
  t.lambda_background = p.value("lambda_background", t.lambda_background);
  t.lambda_docspec = p.value("lambda_docspec", t.lambda_docspec);
  t.lambda_general = p.value("lambda_general", t.lambda_general);
  t.iterations = p.value("iterations", t.iterations);
  t.top_words = p.value("top_words", t.top_words);
  t.seed = static_cast<std::uint64_t>(p.value("seed", std::int64_t{0}));
  return t;
}

KeyConceptConfig key_concept_config(const ScorerConfig& cfg) {
  KeyConceptConfig k;
  k.per_document = cfg.params.value("per_document", k.per_document);
  k.total = cfg.params.value("total", k.total);
  k.neighbors = cfg.params.value("neighbors", k.neighbors);
  k.first_words_limit = cfg.params.value("first_words_limit", k.first_words_limit);
  return k;
}

PuConfig pu_config(const RankerConfig& cfg) {
  PuConfig pu;
  const auto& p = cfg.params;
  pu.seed_count = p.value("seed_count", pu.seed_count);
  pu.spy_fraction = p.value("spy_fraction", pu.spy_fraction);
  pu.neg_threshold = p.value("neg_threshold", pu.neg_threshold);
  pu.seed_alpha = p.value("seed_alpha", pu.seed_alpha);
  pu.seed_beta = p.value("seed_beta", pu.seed_beta);
  pu.rng_seed = static_cast<std::uint64_t>(p.value("rng_seed", std::int64_t{0}));
  pu.logreg.learning_rate = p.value("learning_rate", pu.logreg.learning_rate);
  pu.logreg.l2 = p.value("l2", pu.logreg.l2);
  pu.logreg.epochs = p.value("epochs", pu.logreg.epochs);
  return pu;
}

Resource required_resource(const std::string& method) {
  if (method == "DomainPertinence" || method == "Weirdness" || method == "Relevance") return Resource::reference;
  if (method == "WikiPresence" || method == "LinkProbability") return Resource::link_stats;
  if (method == "KeyConceptRelatedness") return Resource::embeddings;
  return Resource::none;
}

}  // namespace atr
