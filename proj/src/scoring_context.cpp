#include "atr/scoring_context.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "atr/log.hpp"
#include "atr/parallel.hpp"
#include "atr/scoring_freq.hpp"

namespace atr {

double npmi(double p_tw, double p_t, double p_w) {
  if (p_tw == 1.0) return 0.0;
  return std::log(p_tw / (p_t * p_w)) / -std::log(p_tw);
}

bool is_context_tag(const std::string& pos) {
  return pos.starts_with("NN") || pos.starts_with("JJ") || pos.starts_with("VB") || pos.starts_with("RB");
}

namespace {

using Counts = std::unordered_map<std::string, std::uint64_t>;

struct WordStats {
  Counts count;     // eligible-tag occurrences per lemma
  Counts doc_freq;  // documents with an eligible occurrence
};

WordStats word_statistics(const AnnotatedCorpus& corpus) {
  const auto& docs = corpus.documents();
  std::vector<Counts> per_doc(docs.size());
  parallel_for(docs.size(), [&](std::size_t d) {
    for (const auto& sentence : docs[d].sentences) {
      for (const auto& tok : sentence) {
        if (is_context_tag(tok.pos)) ++per_doc[d][tok.lemma];
      }
    }
  });
  WordStats stats;
  for (const auto& counts : per_doc) {
    for (const auto& [w, n] : counts) {
      stats.count[w] += n;
      ++stats.doc_freq[w];
    }
  }
  return stats;
}

// Co-occurrence counts of one candidate with eligible words inside +-window
// positions around each of its occurrences.
Counts context_counts(const TermCandidate& cand, const AnnotatedCorpus& corpus, int window,
                      const std::set<std::string>& eligible) {
  Counts out;
  const auto& docs = corpus.documents();
  const auto len = static_cast<std::int64_t>(cand.length_words);
  for (const auto& occ : cand.occurrences) {
    const auto& sentence = docs[occ.doc].sentences[occ.sentence];
    const auto n = static_cast<std::int64_t>(sentence.size());
    const auto start = static_cast<std::int64_t>(occ.offset);
    const auto visit = [&](std::int64_t i) {
      const auto& tok = sentence[static_cast<std::size_t>(i)];
      if (is_context_tag(tok.pos) && eligible.contains(tok.lemma)) ++out[tok.lemma];
    };
    for (std::int64_t i = std::max<std::int64_t>(0, start - window); i < start; ++i) visit(i);
    for (std::int64_t i = start + len; i < std::min(n, start + len + window); ++i) visit(i);
  }
  return out;
}

}  // namespace

ScoreTable score_domain_coherence(const CandidateSet& set, const AnnotatedCorpus& corpus,
                                  const DomainCoherenceConfig& cfg, DomainCoherenceDetails* details) {
  if (set.empty()) throw std::invalid_argument("DomainCoherence needs a non-empty candidate set");
  if (cfg.window < 1 || cfg.seed_count < 1 || cfg.context_words < 1) {
    throw std::invalid_argument("DomainCoherence window, seed and context counts must be positive");
  }

  ScoreTable out{"DomainCoherence", {}};
  const double total = static_cast<double>(corpus.total_word_count());

  // Step 1: seeds by Basic.
  const auto basic = sorted_by_score(score_basic(set, cfg.basic_alpha));
  std::vector<const TermCandidate*> seeds;
  for (std::size_t i = 0; i < basic.size() && i < static_cast<std::size_t>(cfg.seed_count); ++i) {
    seeds.push_back(&set.at(basic[i].first));
  }

  // Step 2: context words by mean NPMI over the seeds.
  const WordStats stats = word_statistics(corpus);
  const auto min_df = static_cast<std::uint64_t>((corpus.document_count() + 3) / 4);
  std::set<std::string> eligible;
  for (const auto& [w, df] : stats.doc_freq) {
    if (df >= min_df) eligible.insert(w);
  }

  const auto pair_npmi = [&](const TermCandidate& t, const Counts& ctx, const std::string& w) {
    const auto it = ctx.find(w);
    if (it == ctx.end()) return -1.0;
    return npmi(static_cast<double>(it->second) / total, static_cast<double>(t.tf) / total,
                static_cast<double>(stats.count.at(w)) / total);
  };

  std::vector<Counts> seed_ctx(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t i) {
    seed_ctx[i] = context_counts(*seeds[i], corpus, cfg.window, eligible);
  });
  std::set<std::string> observed;
  for (const auto& ctx : seed_ctx) {
    for (const auto& [w, n] : ctx) observed.insert(w);
  }
  const std::vector<std::string> observed_words(observed.begin(), observed.end());
  std::vector<double> word_score(observed_words.size());
  parallel_for(observed_words.size(), [&](std::size_t j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) sum += pair_npmi(*seeds[i], seed_ctx[i], observed_words[j]);
    word_score[j] = sum / static_cast<double>(seeds.size());
  });
  std::vector<std::pair<std::string, double>> ranked;
  for (std::size_t j = 0; j < observed_words.size(); ++j) ranked.emplace_back(observed_words[j], word_score[j]);
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > static_cast<std::size_t>(cfg.context_words)) ranked.resize(cfg.context_words);

  if (details) {
    details->seeds.clear();
    for (const auto* s : seeds) details->seeds.push_back(s->canonical);
    details->context = ranked;
  }

  if (ranked.empty()) {
    log::warn("DomainCoherence: no eligible context words; all scores are 0");
    for (const auto& [key, c] : set.candidates) out.scores.emplace(key, 0.0);
    return out;
  }

  // Step 3: score every candidate against the kept words.
  std::set<std::string> kept;
  for (const auto& [w, s] : ranked) kept.insert(w);
  std::vector<const TermCandidate*> all;
  for (const auto& [key, c] : set.candidates) all.push_back(&c);
  std::vector<double> scores(all.size());
  std::vector<char> measured(all.size(), 0);
  parallel_for(all.size(), [&](std::size_t i) {
    const Counts ctx = context_counts(*all[i], corpus, cfg.window, kept);
    measured[i] = !ctx.empty();
    double sum = 0.0;
    for (const auto& [w, s] : ranked) sum += pair_npmi(*all[i], ctx, w);
    scores[i] = sum / static_cast<double>(ranked.size());
  });

  double lowest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (measured[i]) lowest = std::min(lowest, scores[i]);
  }
  const double sentinel = (std::isinf(lowest) ? -1.0 : lowest) - 1.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    out.scores.emplace_hint(out.scores.end(), all[i]->canonical, measured[i] ? scores[i] : sentinel);
  }
  return out;
}

}  // namespace atr
