#include "atr/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "atr/log.hpp"
#include "atr/parallel.hpp"
#include "atr/scoring_freq.hpp"

namespace atr {

std::vector<double> FeatureMatrix::column(std::size_t col) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, col);
  return out;
}

void FeatureMatrix::validate() const {
  if (values.size() != rows() * cols()) throw std::invalid_argument("feature matrix size mismatch");
  if (std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); })) {
    throw std::invalid_argument("feature matrix contains NaN");
  }
}

FeatureMatrix build_feature_matrix(const std::vector<ScoreTable>& tables, const std::vector<std::string>& candidates) {
  FeatureMatrix m;
  m.candidates = candidates;
  for (const auto& t : tables) m.features.push_back(t.method);
  m.values.assign(m.rows() * m.cols(), 0.0);
  for (std::size_t c = 0; c < tables.size(); ++c) {
    const auto& scores = tables[c].scores;
    double fallback = 0.0;
    if (!scores.empty()) {
      fallback = std::min_element(scores.begin(), scores.end(), [](const auto& a, const auto& b) {
                   return a.second < b.second;
                 })->second;
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto it = scores.find(m.candidates[r]);
      m.at(r, c) = it == scores.end() ? fallback : it->second;
    }
  }
  m.validate();
  return m;
}

FeatureMatrix build_feature_matrix(const std::vector<ScoreTable>& tables, const CandidateSet& set) {
  std::vector<std::string> keys;
  keys.reserve(set.size());
  for (const auto& [key, c] : set.candidates) keys.push_back(key);
  return build_feature_matrix(tables, keys);
}

FeatureMatrix min_max_normalized(const FeatureMatrix& matrix) {
  FeatureMatrix out = matrix;
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      lo = std::min(lo, matrix.at(r, c));
      hi = std::max(hi, matrix.at(r, c));
    }
    const double span = hi - lo;
    for (std::size_t r = 0; r < matrix.rows(); ++r) {
      out.at(r, c) = span > 0 ? (matrix.at(r, c) - lo) / span : 0.0;
    }
  }
  return out;
}

std::vector<std::string> rank_by_score(const ScoreTable& table) {
  std::vector<std::string> out;
  out.reserve(table.size());
  for (auto& [key, score] : sorted_by_score(table)) out.push_back(std::move(key));
  return out;
}

ScoreTable linear_combination(const FeatureMatrix& matrix, const std::vector<double>& weights) {
  matrix.validate();
  if (weights.size() != matrix.cols()) throw std::invalid_argument("one weight per feature is required");
  const FeatureMatrix norm = min_max_normalized(matrix);
  ScoreTable out{"LinearCombination", {}};
  for (std::size_t r = 0; r < norm.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < norm.cols(); ++c) s += weights[c] * norm.at(r, c);
    out.scores.emplace(norm.candidates[r], s);
  }
  return out;
}

ScoreTable voting(const FeatureMatrix& matrix) {
  matrix.validate();
  const std::size_t n = matrix.rows();
  std::vector<double> votes(n, 0.0);
  std::vector<std::size_t> order(n);
  for (std::size_t c = 0; c < matrix.cols(); ++c) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = matrix.at(a, c), vb = matrix.at(b, c);
      if (va != vb) return va > vb;
      return matrix.candidates[a] < matrix.candidates[b];
    });
    for (std::size_t rank = 0; rank < n; ++rank) votes[order[rank]] += 1.0 / static_cast<double>(rank + 1);
  }
  ScoreTable out{"Voting", {}};
  for (std::size_t r = 0; r < n; ++r) out.scores.emplace(matrix.candidates[r], votes[r]);
  return out;
}

// --- logistic regression ----------------------------------------------------

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -log(sigmoid(z)) computed without overflow.
double softplus_neg(double z) { return z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)); }

}  // namespace

double LogisticModel::probability(const double* features) const {
  double z = bias;
  for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * features[j];
  return sigmoid(z);
}

LogisticModel train_logreg(const std::vector<double>& X, std::size_t cols, const std::vector<int>& labels,
                           const LogRegParams& params) {
  const std::size_t n = labels.size();
  if (X.size() != n * cols) throw std::invalid_argument("design matrix and label sizes disagree");
  const auto positives = std::count(labels.begin(), labels.end(), 1);
  if (positives == 0 || positives == static_cast<std::ptrdiff_t>(n)) {
    throw std::invalid_argument("logistic regression needs examples of both classes");
  }

  // Descent runs on mean-centred columns; the bias is unpenalized, so this is
  // the same objective, and the means are folded back into the bias at the end.
  std::vector<double> mean(cols, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < cols; ++j) mean[j] += X[i * cols + j];
  }
  for (auto& m : mean) m /= static_cast<double>(n);

  LogisticModel model;
  model.weights.assign(cols, 0.0);
  std::vector<double> grad(cols);

  const auto loss_and_gradient = [&](bool want_gradient) {
    double loss = 0.0;
    double grad_bias = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* x = &X[i * cols];
      double z = model.bias;
      for (std::size_t j = 0; j < cols; ++j) z += model.weights[j] * (x[j] - mean[j]);
      loss += labels[i] ? softplus_neg(z) : softplus_neg(-z);
      if (want_gradient) {
        const double err = sigmoid(z) - labels[i];
        grad_bias += err;
        for (std::size_t j = 0; j < cols; ++j) grad[j] += err * (x[j] - mean[j]);
      }
    }
    const double inv = 1.0 / static_cast<double>(n);
    double penalty = 0.0;
    for (std::size_t j = 0; j < cols; ++j) {
      penalty += model.weights[j] * model.weights[j];
      grad[j] = grad[j] * inv + params.l2 * model.weights[j];
    }
    return std::pair{loss * inv + 0.5 * params.l2 * penalty, grad_bias * inv};
  };

  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const auto [loss, grad_bias] = loss_and_gradient(true);
    model.loss_history.push_back(loss);
    for (std::size_t j = 0; j < cols; ++j) model.weights[j] -= params.learning_rate * grad[j];
    model.bias -= params.learning_rate * grad_bias;
  }
  model.loss_history.push_back(loss_and_gradient(false).first);
  for (std::size_t j = 0; j < cols; ++j) model.bias -= model.weights[j] * mean[j];
  return model;
}

// --- PU learning ------------------------------------------------------------

void PuConfig::validate() const {
  if (seed_count < 50 || seed_count > 200) throw std::invalid_argument("seed_count must lie in [50, 200]");
  if (!(spy_fraction > 0 && spy_fraction < 1)) throw std::invalid_argument("spy_fraction must lie in (0, 1)");
  if (!(neg_threshold > 0 && neg_threshold < 1)) throw std::invalid_argument("neg_threshold must lie in (0, 1)");
  if (logreg.epochs < 0 || !(logreg.learning_rate > 0) || logreg.l2 < 0) {
    throw std::invalid_argument("invalid logistic regression parameters");
  }
}

namespace {

std::vector<double> predict_all(const LogisticModel& model, const FeatureMatrix& m) {
  std::vector<double> out(m.rows());
  parallel_for(m.rows(), [&](std::size_t r) { out[r] = model.probability(&m.values[r * m.cols()]); });
  return out;
}

LogisticModel fit_subset(const FeatureMatrix& m, const std::vector<std::size_t>& pos,
                         const std::vector<std::size_t>& neg, const LogRegParams& params) {
  std::vector<double> X;
  std::vector<int> y;
  X.reserve((pos.size() + neg.size()) * m.cols());
  for (const auto* group : {&pos, &neg}) {
    for (const auto r : *group) {
      X.insert(X.end(), m.values.begin() + static_cast<std::ptrdiff_t>(r * m.cols()),
               m.values.begin() + static_cast<std::ptrdiff_t>((r + 1) * m.cols()));
      y.push_back(group == &pos ? 1 : 0);
    }
  }
  return train_logreg(X, m.cols(), y, params);
}

}  // namespace

ScoreTable pu_atr(const FeatureMatrix& matrix, const std::vector<std::string>& seeds, const PuConfig& cfg) {
  matrix.validate();
  if (seeds.empty()) throw std::invalid_argument("PU-ATR needs at least one seed");
  if (seeds.size() >= matrix.rows()) throw std::invalid_argument("fewer candidates than seeds");
  if (!(cfg.spy_fraction > 0 && cfg.spy_fraction < 1) || !(cfg.neg_threshold > 0 && cfg.neg_threshold < 1)) {
    throw std::invalid_argument("spy_fraction and neg_threshold must lie in (0, 1)");
  }

  const FeatureMatrix m = min_max_normalized(matrix);
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t r = 0; r < m.rows(); ++r) row_of.emplace(m.candidates[r], r);

  std::vector<std::size_t> seed_rows;
  for (const auto& s : seeds) {
    const auto it = row_of.find(s);
    if (it == row_of.end()) throw std::invalid_argument("seed '" + s + "' is not a candidate");
    seed_rows.push_back(it->second);
  }
  std::sort(seed_rows.begin(), seed_rows.end());
  seed_rows.erase(std::unique(seed_rows.begin(), seed_rows.end()), seed_rows.end());
  std::vector<char> is_seed(m.rows(), 0);
  for (const auto r : seed_rows) is_seed[r] = 1;

  // Spies: a random part of the seeds hidden among the unlabeled candidates.
  std::mt19937_64 rng(cfg.rng_seed);
  std::vector<std::size_t> shuffled = seed_rows;
  for (std::size_t i = shuffled.size(); i > 1; --i) std::swap(shuffled[i - 1], shuffled[rng() % i]);
  auto spy_count = static_cast<std::size_t>(std::llround(cfg.spy_fraction * static_cast<double>(seed_rows.size())));
  spy_count = std::clamp<std::size_t>(spy_count, 1, seed_rows.size() > 1 ? seed_rows.size() - 1 : 1);
  std::vector<std::size_t> spies(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(spy_count));
  std::sort(spies.begin(), spies.end());
  std::vector<char> is_spy(m.rows(), 0);
  for (const auto r : spies) is_spy[r] = 1;

  std::vector<std::size_t> positives, mixed, unlabeled;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (is_seed[r] && !is_spy[r]) {
      positives.push_back(r);
    } else {
      mixed.push_back(r);
    }
    if (!is_seed[r]) unlabeled.push_back(r);
  }
  if (positives.empty()) throw std::invalid_argument("PU-ATR needs at least two seeds");

  const auto first = fit_subset(m, positives, mixed, cfg.logreg);
  const auto first_probs = predict_all(first, m);

  std::vector<double> spy_probs;
  for (const auto r : spies) spy_probs.push_back(first_probs[r]);
  std::sort(spy_probs.begin(), spy_probs.end());
  const auto q = std::min(spy_probs.size() - 1,
                          static_cast<std::size_t>(std::floor(cfg.neg_threshold * static_cast<double>(spy_probs.size()))));
  const double cutoff = spy_probs[q];

  std::vector<std::size_t> negatives;
  for (const auto r : unlabeled) {
    if (first_probs[r] < cutoff) negatives.push_back(r);
  }
  if (negatives.empty()) {
    log::warn("PU-ATR: no reliable negatives below the spy cutoff; using the lowest 10% of unlabeled candidates");
    std::vector<std::size_t> order = unlabeled;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return first_probs[a] < first_probs[b]; });
    const std::size_t take = std::max<std::size_t>(1, order.size() / 10);
    negatives.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(negatives.begin(), negatives.end());
  }

  const auto final_model = fit_subset(m, seed_rows, negatives, cfg.logreg);
  const auto probs = predict_all(final_model, m);
  ScoreTable out{"PU-ATR", {}};
  for (std::size_t r = 0; r < m.rows(); ++r) out.scores.emplace(m.candidates[r], probs[r]);
  return out;
}

ScoreTable pu_atr(const FeatureMatrix& matrix, const CandidateSet& set, const PuConfig& cfg) {
  cfg.validate();
  if (set.size() < static_cast<std::size_t>(cfg.seed_count)) {
    throw std::invalid_argument("PU-ATR: fewer candidates (" + std::to_string(set.size()) + ") than seed_count (" +
                                std::to_string(cfg.seed_count) + ")");
  }
  auto ranked = rank_by_score(score_combobasic(set, cfg.seed_alpha, cfg.seed_beta));
  ranked.resize(static_cast<std::size_t>(cfg.seed_count));
  return pu_atr(matrix, ranked, cfg);
}

void write_ranking(std::ostream& out, const ScoreTable& table) {
  char buf[64];
  std::size_t rank = 0;
  for (const auto& [key, score] : sorted_by_score(table)) {
    std::snprintf(buf, sizeof buf, "%.6f", score);
    out << ++rank << '\t' << key << '\t' << buf << '\n';
  }
}

}  // namespace atr
