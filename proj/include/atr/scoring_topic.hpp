#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "atr/candidates.hpp"
#include "atr/corpus.hpp"
#include "atr/score_table.hpp"

namespace atr {

struct TopicModelConfig {
  int topics = 20;
  double alpha_topic = 2.5;  // 50 / topics
  double beta_word = 0.01;
  // Fixed route priors: background, document-specific, general topics.
  double lambda_background = 0.1;
  double lambda_docspec = 0.1;
  double lambda_general = 0.8;
  int iterations = 500;
  int top_words = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Distribution stored as explicit probabilities for observed words plus one
/// shared probability for every other vocabulary word.
struct SparseDistribution {
  std::vector<int> words;      // ascending word ids
  std::vector<double> probs;   // aligned with `words`
  double default_prob = 0.0;

  double at(int word) const;
};

/// Word distributions of the general, background and per-document topics, with
/// the most probable words of each. Word ids index the sorted vocabulary.
struct TopicModel {
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> phi_general;  // [topic][word]
  std::vector<double> phi_background;            // [word]
  std::vector<SparseDistribution> phi_docspec;   // [document]
  std::vector<std::vector<int>> top_general;
  std::vector<int> top_background;
  std::vector<std::vector<int>> top_docspec;
  TopicModelConfig config;

  /// -1 when the word is not in the vocabulary.
  int word_id(const std::string& word) const;
  /// Largest probability of `word` over every distribution.
  std::vector<double> max_probabilities() const;
  /// Membership in the union of all top-word sets.
  std::vector<char> top_word_mask() const;
};

using TokenPredicate = std::function<bool(const Token&)>;

/// Collapsed Gibbs sampler. Each token is jointly assigned a route (background,
/// its document's own topic, or one of the general topics) weighted by the
/// fixed route priors and the smoothed counts. Deterministic for a given seed.
/// Only tokens accepted by `keep` (all tokens when empty) enter the model.
TopicModel fit_topic_model(const AnnotatedCorpus& corpus, const TopicModelConfig& cfg,
                           const TokenPredicate& keep = {});

/// Indices of the `n` largest values, ties by ascending index.
std::vector<int> top_indices(const std::vector<double>& values, int n);

/// ln(tf) * sum over the candidate's words that appear in some top-word set of
/// the word's largest topic probability.
ScoreTable score_novel_topic_model(const CandidateSet& set, const TopicModel& model);

/// TSV dump "topic<TAB>rank<TAB>word<TAB>probability" of the general and
/// background top words.
void write_topic_words(std::ostream& out, const TopicModel& model);

}  // namespace atr
