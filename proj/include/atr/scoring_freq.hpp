#pragma once

#include <cstddef>

#include "atr/candidates.hpp"
#include "atr/score_table.hpp"

// Frequency-based termhood: TF, ATF, TF-IDF, residual IDF, C-Value, Basic and
// ComboBasic. Natural logarithms unless noted (C-Value keeps log2).
namespace atr {

struct FreqScoringConfig {
  double alpha = 0.75;
  double beta = 0.1;
  /// Restricts Basic to multi-word candidates; single words are left out of the table.
  bool basic_multiword_only = false;
};

ScoreTable score_tf(const CandidateSet& set);

/// tf / DTF
ScoreTable score_atf(const CandidateSet& set);

/// tf * ln(D / DTF)
ScoreTable score_tfidf(const CandidateSet& set, std::size_t document_count);

/// tf * ln(D / DTF) + ln(1 - exp(-ATF))
ScoreTable score_ridf(const CandidateSet& set, std::size_t document_count);

/// Ventura's C-Value variant, defined for single words too:
///   log2(|t| + 0.1) * (tf - mean tf of the candidates containing t)
/// with the mean term dropped when nothing contains t.
ScoreTable score_cvalue(const CandidateSet& set);

/// |t| ln(tf) + alpha * e_t, where e_t counts candidates containing t.
ScoreTable score_basic(const CandidateSet& set, double alpha, bool multiword_only = false);

/// Basic + beta * e'_t, where e'_t counts candidates contained in t.
ScoreTable score_combobasic(const CandidateSet& set, double alpha, double beta);

}  // namespace atr
