#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "atr/candidates.hpp"
#include "atr/corpus.hpp"
#include "atr/score_table.hpp"

namespace atr {

struct LinkStats {
  std::uint64_t hyperlinks = 0;  // H: occurrences as a hyperlink caption
  std::uint64_t total = 0;       // W: all occurrences
};

struct LinkStatsTable {
  std::map<std::string, LinkStats> entries;
  double threshold = 0.018;
};

/// Rows "term<TAB>H<TAB>W" with 0 <= H <= W.
LinkStatsTable load_link_stats(const std::filesystem::path& path);
LinkStatsTable parse_link_stats(std::istream& in, const std::string& source = "<stream>");
void write_link_stats(std::ostream& out, const LinkStatsTable& table);

/// Dense vectors in the common text format: a "<vocab_size> <dimension>"
/// header, then "token v1 ... vdim" lines.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  explicit EmbeddingModel(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return index_.size(); }
  bool contains(const std::string& token) const { return index_.contains(token); }
  /// Empty span when the token is missing.
  std::span<const float> vector(const std::string& token) const;
  /// Throws std::invalid_argument on a dimension mismatch, duplicate or NaN.
  void add(const std::string& token, std::vector<float> values);
  /// Tokens in insertion order.
  const std::vector<std::string>& tokens() const { return tokens_; }

 private:
  std::size_t dimension_ = 0;
  std::map<std::string, std::size_t> index_;
  std::vector<std::string> tokens_;
  std::vector<float> data_;
};

EmbeddingModel load_embeddings(const std::filesystem::path& path);
EmbeddingModel parse_embeddings(std::istream& in, const std::string& source = "<stream>");
void write_embeddings(std::ostream& out, const EmbeddingModel& model);

/// Cosine similarity; 0 when either vector is zero.
double cosine(std::span<const float> a, std::span<const float> b);

struct KeyConceptConfig {
  int per_document = 15;       // d
  int total = 500;             // N
  int neighbors = 2;           // k
  int first_words_limit = 800;
};

/// 1 when the term was seen as a hyperlink caption at least once.
ScoreTable score_wiki_presence(const CandidateSet& set, const LinkStatsTable& links);

/// H / W, or 0 when the term is unknown or H / W is below the threshold.
ScoreTable score_link_probability(const CandidateSet& set, const LinkStatsTable& links);

/// Per document, candidates occurring at least twice, once within the first
/// `first_words_limit` tokens, and present in the embedding vocabulary are
/// ranked by length_words * occurrences (ties by canonical); the top
/// `per_document` are selected. Concepts are then ranked by how many documents
/// selected them and the top `total` returned with those counts.
std::vector<std::pair<std::string, int>> extract_key_concepts(const AnnotatedCorpus& corpus, const CandidateSet& set,
                                                              const EmbeddingModel& embeddings,
                                                              const KeyConceptConfig& cfg);

/// Mean of the k largest cosines between the candidate and the key concepts;
/// 0 for candidates missing from the embedding vocabulary. k is clamped to the
/// number of key concepts.
ScoreTable score_key_concept_relatedness(const CandidateSet& set, const EmbeddingModel& embeddings,
                                         const std::vector<std::pair<std::string, int>>& key_concepts,
                                         const KeyConceptConfig& cfg);

}  // namespace atr
