#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "atr/candidates.hpp"
#include "atr/score_table.hpp"

namespace atr {

/// Candidates x features, row-major.
struct FeatureMatrix {
  std::vector<std::string> candidates;
  std::vector<std::string> features;
  std::vector<double> values;

  std::size_t rows() const { return candidates.size(); }
  std::size_t cols() const { return features.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * cols() + col]; }
  double& at(std::size_t row, std::size_t col) { return values[row * cols() + col]; }
  std::vector<double> column(std::size_t col) const;
  /// Throws std::invalid_argument on a size mismatch or NaN.
  void validate() const;
};

/// One column per table over `candidates` (sorted canonicals). A candidate
/// missing from a table takes that table's minimum value.
FeatureMatrix build_feature_matrix(const std::vector<ScoreTable>& tables, const std::vector<std::string>& candidates);
FeatureMatrix build_feature_matrix(const std::vector<ScoreTable>& tables, const CandidateSet& set);

/// Each column rescaled to [0, 1]; constant columns become 0.
FeatureMatrix min_max_normalized(const FeatureMatrix& matrix);

/// Descending score, ties by ascending canonical.
std::vector<std::string> rank_by_score(const ScoreTable& table);

/// Weighted sum of min-max normalized columns.
ScoreTable linear_combination(const FeatureMatrix& matrix, const std::vector<double>& weights);

/// Sum over features of 1 / rank, ranks 1-based by rank_by_score per column.
ScoreTable voting(const FeatureMatrix& matrix);

struct LogRegParams {
  double learning_rate = 0.1;
  double l2 = 1e-4;
  int epochs = 500;
};

/// Affine model with a logistic link.
struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;
  /// Mean log-loss before each epoch and after the last one (epochs + 1 values).
  std::vector<double> loss_history;

  double probability(const double* features) const;
};

/// Full-batch gradient descent on the L2-regularized mean log-loss (bias not
/// penalized), starting from zero with centred columns. X is row-major with `cols` columns; labels are 0/1. Throws
/// std::invalid_argument when only one class is present.
LogisticModel train_logreg(const std::vector<double>& X, std::size_t cols, const std::vector<int>& labels,
                           const LogRegParams& params = {});

struct PuConfig {
  int seed_count = 100;
  double spy_fraction = 0.15;
  double neg_threshold = 0.05;
  double seed_alpha = 0.75;  // ComboBasic parameters of the seed method
  double seed_beta = 0.1;
  std::uint64_t rng_seed = 0;
  LogRegParams logreg;

  void validate() const;
};

/// Spy-technique PU learning with seeds given explicitly.
ScoreTable pu_atr(const FeatureMatrix& matrix, const std::vector<std::string>& seeds, const PuConfig& cfg);

/// Seeds are the top `seed_count` candidates by ComboBasic(seed_alpha, seed_beta).
ScoreTable pu_atr(const FeatureMatrix& matrix, const CandidateSet& set, const PuConfig& cfg);

/// TSV "rank<TAB>canonical<TAB>score" (score with 6 decimals).
void write_ranking(std::ostream& out, const ScoreTable& table);

}  // namespace atr
