#pragma once

#include <map>
#include <string>
#include <vector>

#include "atr/candidates.hpp"
#include "atr/corpus.hpp"
#include "atr/score_table.hpp"

namespace atr {

struct DomainCoherenceConfig {
  int window = 5;            // context words on each side of an occurrence
  int seed_count = 200;      // |T|, best candidates by Basic
  int context_words = 50;    // |W|
  double basic_alpha = 0.75;
};

/// Normalized PMI: ln(p_tw / (p_t p_w)) / -ln(p_tw). Returns 0 when p_tw == 1.
double npmi(double p_tw, double p_t, double p_w);

/// Nouns, adjectives, verbs and adverbs (tags starting NN, JJ, VB, RB).
bool is_context_tag(const std::string& pos);

/// Intermediate statistics, exposed for inspection and tests.
struct DomainCoherenceDetails {
  std::vector<std::string> seeds;                       // T
  std::vector<std::pair<std::string, double>> context;  // W with s(w), best first
};

/// Three steps: take the best `seed_count` candidates by Basic; keep context
/// words (eligible tag, document frequency >= ceil(D/4)) ranked by mean NPMI
/// against those seeds; score every candidate by its mean NPMI against the
/// kept words. A candidate/word pair that never co-occurs counts as NPMI -1.
/// Candidates co-occurring with none of the kept words get the lowest observed
/// score minus one. Context windows stay inside the sentence.
ScoreTable score_domain_coherence(const CandidateSet& set, const AnnotatedCorpus& corpus,
                                  const DomainCoherenceConfig& cfg = {},
                                  DomainCoherenceDetails* details = nullptr);

}  // namespace atr
