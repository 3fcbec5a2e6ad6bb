#include "atr/scoring_wiki.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "atr/error.hpp"
#include "atr/log.hpp"
#include "atr/parallel.hpp"
#include "atr/text.hpp"

namespace atr {

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
  s = text::trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_float(const std::string& s, float& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtof(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

}  // namespace

LinkStatsTable parse_link_stats(std::istream& in, const std::string& source) {
  LinkStatsTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 3) throw ParseError(source, line_no, "expected term<TAB>H<TAB>W");
    const std::string term(text::trim(fields[0]));
    LinkStats stats;
    if (term.empty()) throw ParseError(source, line_no, "empty term");
    if (!parse_u64(fields[1], stats.hyperlinks) || !parse_u64(fields[2], stats.total)) {
      throw ParseError(source, line_no, "non-numeric count for '" + term + "'");
    }
    if (stats.hyperlinks > stats.total) throw ParseError(source, line_no, "H > W for '" + term + "'");
    if (!table.entries.emplace(term, stats).second) throw ParseError(source, line_no, "duplicate term '" + term + "'");
  }
  return table;
}

LinkStatsTable load_link_stats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read link statistics " + path.string());
  return parse_link_stats(in, path.string());
}

void write_link_stats(std::ostream& out, const LinkStatsTable& table) {
  for (const auto& [term, s] : table.entries) out << term << '\t' << s.hyperlinks << '\t' << s.total << '\n';
}

std::span<const float> EmbeddingModel::vector(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return {};
  return {data_.data() + it->second * dimension_, dimension_};
}

void EmbeddingModel::add(const std::string& token, std::vector<float> values) {
  if (values.size() != dimension_) throw std::invalid_argument("vector dimension mismatch for '" + token + "'");
  if (std::any_of(values.begin(), values.end(), [](float v) { return std::isnan(v); })) {
    throw std::invalid_argument("NaN component in vector for '" + token + "'");
  }
  if (!index_.emplace(token, index_.size()).second) throw std::invalid_argument("duplicate token '" + token + "'");
  tokens_.push_back(token);
  data_.insert(data_.end(), values.begin(), values.end());
}

EmbeddingModel parse_embeddings(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing '<vocab_size> <dimension>' header");
  ++line_no;
  std::istringstream header(line);
  std::string vocab_field, dim_field, extra;
  header >> vocab_field >> dim_field;
  std::uint64_t vocab_size = 0, dimension = 0;
  if (!parse_u64(vocab_field, vocab_size) || !parse_u64(dim_field, dimension) || dimension == 0 || (header >> extra)) {
    throw ParseError(source, line_no, "expected header '<vocab_size> <dimension>'");
  }

  EmbeddingModel model(dimension);
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    std::istringstream row(line);
    std::string token, field;
    row >> token;
    std::vector<float> values;
    while (row >> field) {
      float v = 0;
      if (!parse_float(field, v)) throw ParseError(source, line_no, "non-numeric vector component '" + field + "'");
      values.push_back(v);
    }
    if (values.size() != dimension) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(dimension) + " components, got " + std::to_string(values.size()));
    }
    try {
      model.add(token, std::move(values));
    } catch (const std::invalid_argument& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  if (model.size() != vocab_size) {
    throw ParseError(source, 0,
                     "header declares " + std::to_string(vocab_size) + " vectors, found " + std::to_string(model.size()));
  }
  return model;
}

EmbeddingModel load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read embeddings " + path.string());
  return parse_embeddings(in, path.string());
}

void write_embeddings(std::ostream& out, const EmbeddingModel& model) {
  out << model.size() << ' ' << model.dimension() << '\n';
  char buf[32];
  for (const auto& token : model.tokens()) {
    out << token;
    for (const float v : model.vector(token)) {
      std::snprintf(buf, sizeof buf, " %.9g", static_cast<double>(v));
      out << buf;
    }
    out << '\n';
  }
}

double cosine(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine of vectors with different dimensions");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

ScoreTable score_wiki_presence(const CandidateSet& set, const LinkStatsTable& links) {
  ScoreTable out{"WikiPresence", {}};
  for (const auto& [key, c] : set.candidates) {
    const auto it = links.entries.find(key);
    out.scores.emplace_hint(out.scores.end(), key, it != links.entries.end() && it->second.hyperlinks > 0 ? 1.0 : 0.0);
  }
  return out;
}

ScoreTable score_link_probability(const CandidateSet& set, const LinkStatsTable& links) {
  ScoreTable out{"LinkProbability", {}};
  for (const auto& [key, c] : set.candidates) {
    double score = 0.0;
    const auto it = links.entries.find(key);
    if (it != links.entries.end() && it->second.total > 0) {
      const double p = static_cast<double>(it->second.hyperlinks) / static_cast<double>(it->second.total);
      if (p >= links.threshold) score = p;
    }
    out.scores.emplace_hint(out.scores.end(), key, score);
  }
  return out;
}

std::vector<std::pair<std::string, int>> extract_key_concepts(const AnnotatedCorpus& corpus, const CandidateSet& set,
                                                              const EmbeddingModel& embeddings,
                                                              const KeyConceptConfig& cfg) {
  if (cfg.per_document < 1 || cfg.total < 1) throw std::invalid_argument("key concept counts must be positive");
  const auto& docs = corpus.documents();

  // Token offset of each sentence within its document.
  std::vector<std::vector<std::size_t>> sentence_start(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::size_t pos = 0;
    for (const auto& s : docs[d].sentences) {
      sentence_start[d].push_back(pos);
      pos += s.size();
    }
  }

  struct Stat {
    std::uint64_t count = 0;
    std::size_t first = SIZE_MAX;
  };
  std::vector<std::map<std::string, Stat>> per_doc(docs.size());
  for (const auto& [key, cand] : set.candidates) {
    if (!embeddings.contains(key)) continue;
    for (const auto& occ : cand.occurrences) {
      auto& st = per_doc[occ.doc][key];
      ++st.count;
      st.first = std::min(st.first, sentence_start[occ.doc][occ.sentence] + occ.offset);
    }
  }

  std::vector<std::vector<std::string>> chosen(docs.size());
  parallel_for(docs.size(), [&](std::size_t d) {
    std::vector<std::pair<std::string, double>> ranked;
    for (const auto& [key, st] : per_doc[d]) {
      if (st.count < 2 || st.first >= static_cast<std::size_t>(cfg.first_words_limit)) continue;
      ranked.emplace_back(key, static_cast<double>(set.at(key).length_words) * static_cast<double>(st.count));
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(cfg.per_document); ++i) {
      chosen[d].push_back(ranked[i].first);
    }
  });

  std::map<std::string, int> selections;
  for (const auto& keys : chosen) {
    for (const auto& k : keys) ++selections[k];
  }
  std::vector<std::pair<std::string, int>> out(selections.begin(), selections.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (out.size() > static_cast<std::size_t>(cfg.total)) out.resize(static_cast<std::size_t>(cfg.total));
  return out;
}

ScoreTable score_key_concept_relatedness(const CandidateSet& set, const EmbeddingModel& embeddings,
                                         const std::vector<std::pair<std::string, int>>& key_concepts,
                                         const KeyConceptConfig& cfg) {
  if (cfg.neighbors < 1) throw std::invalid_argument("neighbor count must be positive");
  std::vector<std::span<const float>> keys;
  for (const auto& [concept_name, count] : key_concepts) {
    const auto v = embeddings.vector(concept_name);
    if (v.empty()) throw std::invalid_argument("key concept '" + concept_name + "' has no embedding");
    keys.push_back(v);
  }
  ScoreTable out{"KeyConceptRelatedness", {}};
  if (keys.empty()) {
    log::warn("KeyConceptRelatedness: no key concepts; all scores are 0");
    for (const auto& [key, c] : set.candidates) out.scores.emplace_hint(out.scores.end(), key, 0.0);
    return out;
  }
  const std::size_t k = std::min(static_cast<std::size_t>(cfg.neighbors), keys.size());
  if (k < static_cast<std::size_t>(cfg.neighbors)) {
    log::warn("KeyConceptRelatedness: fewer key concepts than neighbors; using k=" + std::to_string(k));
  }

  std::vector<const TermCandidate*> all;
  for (const auto& [key, c] : set.candidates) all.push_back(&c);
  std::vector<double> scores(all.size(), 0.0);
  parallel_for(all.size(), [&](std::size_t i) {
    const auto v = embeddings.vector(all[i]->canonical);
    if (v.empty()) return;
    std::vector<double> sims;
    sims.reserve(keys.size());
    for (const auto& key : keys) sims.push_back(cosine(v, key));
    std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(k), sims.end(), std::greater<>());
    double sum = 0.0;
    for (std::size_t j = 0; j < k; ++j) sum += sims[j];
    scores[i] = sum / static_cast<double>(k);
  });
  for (std::size_t i = 0; i < all.size(); ++i) out.scores.emplace_hint(out.scores.end(), all[i]->canonical, scores[i]);
  return out;
}

}  // namespace atr
