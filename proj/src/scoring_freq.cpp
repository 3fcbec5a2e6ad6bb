#include "atr/scoring_freq.hpp"

#include <cmath>
#include <stdexcept>

namespace atr {
namespace {

template <typename F>
ScoreTable score_each(const CandidateSet& set, std::string method, F&& f) {
  ScoreTable out{std::move(method), {}};
  for (const auto& [key, cand] : set.candidates) out.scores.emplace_hint(out.scores.end(), key, f(cand));
  return out;
}

void check_document_count(const CandidateSet& set, std::size_t d) {
  for (const auto& [key, c] : set.candidates) {
    if (c.dtf() > d) throw std::invalid_argument("document count smaller than DTF of '" + key + "'");
  }
}

}  // namespace

ScoreTable score_tf(const CandidateSet& set) {
  return score_each(set, "TF", [](const TermCandidate& c) { return static_cast<double>(c.tf); });
}

ScoreTable score_atf(const CandidateSet& set) {
  return score_each(set, "ATF", [](const TermCandidate& c) {
    return static_cast<double>(c.tf) / static_cast<double>(c.dtf());
  });
}

ScoreTable score_tfidf(const CandidateSet& set, std::size_t d) {
  check_document_count(set, d);
  return score_each(set, "TFIDF", [d](const TermCandidate& c) {
    return static_cast<double>(c.tf) * std::log(static_cast<double>(d) / static_cast<double>(c.dtf()));
  });
}

ScoreTable score_ridf(const CandidateSet& set, std::size_t d) {
  check_document_count(set, d);
  return score_each(set, "RIDF", [d](const TermCandidate& c) {
    const double tf = static_cast<double>(c.tf);
    const double dtf = static_cast<double>(c.dtf());
    return tf * std::log(static_cast<double>(d) / dtf) + std::log1p(-std::exp(-tf / dtf));
  });
}

ScoreTable score_cvalue(const CandidateSet& set) {
  return score_each(set, "CValue", [&set](const TermCandidate& c) {
    const double weight = std::log2(c.length_words + 0.1);
    const auto it = set.containment.find(c.canonical);
    if (it == set.containment.end() || it->second.supersequences.empty()) {
      return weight * static_cast<double>(c.tf);
    }
    const auto& supers = it->second.supersequences;
    double nested = 0.0;
    for (const auto& s : supers) nested += static_cast<double>(set.at(s).tf);
    return weight * (static_cast<double>(c.tf) - nested / static_cast<double>(supers.size()));
  });
}

ScoreTable score_basic(const CandidateSet& set, double alpha, bool multiword_only) {
  ScoreTable out{"Basic", {}};
  for (const auto& [key, c] : set.candidates) {
    if (multiword_only && c.length_words < 2) continue;
    out.scores.emplace_hint(out.scores.end(), key,
                            c.length_words * std::log(static_cast<double>(c.tf)) +
                                alpha * static_cast<double>(set.containing_count(key)));
  }
  return out;
}

ScoreTable score_combobasic(const CandidateSet& set, double alpha, double beta) {
  return score_each(set, "ComboBasic", [&](const TermCandidate& c) {
    return c.length_words * std::log(static_cast<double>(c.tf)) +
           alpha * static_cast<double>(set.containing_count(c.canonical)) +
           beta * static_cast<double>(set.contained_count(c.canonical));
  });
}

}  // namespace atr
