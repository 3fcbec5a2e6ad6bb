#include "atr/scoring_topic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "atr/error.hpp"
#include "atr/parallel.hpp"

namespace atr {

void TopicModelConfig::validate() const {
  if (topics < 1) throw std::invalid_argument("topic count must be positive");
  if (!(alpha_topic > 0) || !(beta_word > 0)) throw std::invalid_argument("Dirichlet priors must be positive");
  if (lambda_background < 0 || lambda_docspec < 0 || lambda_general < 0 ||
      !(lambda_background + lambda_docspec + lambda_general > 0)) {
    throw std::invalid_argument("route priors must be non-negative and not all zero");
  }
  if (iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  if (top_words < 1) throw std::invalid_argument("top_words must be positive");
}

double SparseDistribution::at(int word) const {
  const auto it = std::lower_bound(words.begin(), words.end(), word);
  if (it != words.end() && *it == word) return probs[static_cast<std::size_t>(it - words.begin())];
  return default_prob;
}

int TopicModel::word_id(const std::string& word) const {
  const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), word);
  if (it == vocabulary.end() || *it != word) return -1;
  return static_cast<int>(it - vocabulary.begin());
}

std::vector<double> TopicModel::max_probabilities() const {
  const std::size_t v = vocabulary.size();
  std::vector<double> best(v, 0.0);
  for (std::size_t w = 0; w < v; ++w) {
    for (const auto& phi : phi_general) best[w] = std::max(best[w], phi[w]);
    if (!phi_background.empty()) best[w] = std::max(best[w], phi_background[w]);
  }
  if (phi_docspec.empty()) return best;

  // Explicit entries first; the shared default applies to a word in every
  // document that does not list it.
  std::vector<std::size_t> listed(v, 0);
  for (const auto& dist : phi_docspec) {
    for (std::size_t i = 0; i < dist.words.size(); ++i) {
      const auto w = static_cast<std::size_t>(dist.words[i]);
      best[w] = std::max(best[w], dist.probs[i]);
      ++listed[w];
    }
  }
  std::vector<std::size_t> by_default(phi_docspec.size());
  std::iota(by_default.begin(), by_default.end(), 0);
  std::stable_sort(by_default.begin(), by_default.end(), [&](std::size_t a, std::size_t b) {
    return phi_docspec[a].default_prob > phi_docspec[b].default_prob;
  });
  for (std::size_t w = 0; w < v; ++w) {
    if (listed[w] == phi_docspec.size()) continue;
    for (const auto d : by_default) {
      const auto& dist = phi_docspec[d];
      if (!std::binary_search(dist.words.begin(), dist.words.end(), static_cast<int>(w))) {
        best[w] = std::max(best[w], dist.default_prob);
        break;
      }
    }
  }
  return best;
}

std::vector<char> TopicModel::top_word_mask() const {
  std::vector<char> mask(vocabulary.size(), 0);
  const auto mark = [&](const std::vector<int>& ids) {
    for (const int w : ids) mask[static_cast<std::size_t>(w)] = 1;
  };
  for (const auto& ids : top_general) mark(ids);
  mark(top_background);
  for (const auto& ids : top_docspec) mark(ids);
  return mask;
}

std::vector<int> top_indices(const std::vector<double>& values, int n) {
  std::vector<int> idx(values.size());
  std::iota(idx.begin(), idx.end(), 0);
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(keep), idx.end(), [&](int a, int b) {
    const double va = values[static_cast<std::size_t>(a)];
    const double vb = values[static_cast<std::size_t>(b)];
    return va != vb ? va > vb : a < b;
  });
  idx.resize(keep);
  return idx;
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct SamplerToken {
  std::uint32_t doc;
  std::uint32_t word;   // global id
  std::uint32_t local;  // id within the document's own vocabulary
};

}  // namespace

TopicModel fit_topic_model(const AnnotatedCorpus& corpus, const TopicModelConfig& cfg, const TokenPredicate& keep) {
  cfg.validate();
  const auto& docs = corpus.documents();

  std::vector<std::string> vocab;
  for (const auto& doc : docs) {
    for (const auto& s : doc.sentences) {
      for (const auto& t : s) {
        if (!keep || keep(t)) vocab.push_back(t.lemma);
      }
    }
  }
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  if (vocab.empty()) throw Error("topic model vocabulary is empty");

  std::unordered_map<std::string, std::uint32_t> ids;
  for (std::uint32_t i = 0; i < vocab.size(); ++i) ids.emplace(vocab[i], i);

  // Tokens plus each document's local vocabulary for the document-specific topic.
  std::vector<SamplerToken> tokens;
  std::vector<std::vector<int>> doc_words(docs.size());
  for (std::uint32_t d = 0; d < docs.size(); ++d) {
    std::vector<std::uint32_t> words;
    for (const auto& s : docs[d].sentences) {
      for (const auto& t : s) {
        if (!keep || keep(t)) words.push_back(ids.at(t.lemma));
      }
    }
    std::vector<int> local(words.begin(), words.end());
    std::sort(local.begin(), local.end());
    local.erase(std::unique(local.begin(), local.end()), local.end());
    for (const auto w : words) {
      const auto pos = std::lower_bound(local.begin(), local.end(), static_cast<int>(w)) - local.begin();
      tokens.push_back({d, w, static_cast<std::uint32_t>(pos)});
    }
    doc_words[d] = std::move(local);
  }

  const std::size_t K = static_cast<std::size_t>(cfg.topics);
  const std::size_t V = vocab.size();
  const std::size_t D = docs.size();
  const std::size_t background = K;
  const std::size_t docspec = K + 1;
  const double alpha = cfg.alpha_topic;
  const double beta = cfg.beta_word;
  const double vbeta = static_cast<double>(V) * beta;

  std::vector<std::uint32_t> n_dk(D * K, 0), n_dg(D, 0);
  std::vector<std::uint32_t> n_kw(K * V, 0), n_k(K, 0);
  std::vector<std::uint32_t> n_bw(V, 0);
  std::uint64_t n_b = 0;
  std::vector<std::vector<std::uint32_t>> n_sw(D);
  std::vector<std::uint64_t> n_s(D, 0);
  for (std::size_t d = 0; d < D; ++d) n_sw[d].assign(doc_words[d].size(), 0);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::uint32_t> z(tokens.size());

  const auto add = [&](std::size_t i, std::uint32_t route, int delta) {
    const auto& t = tokens[i];
    if (route == background) {
      n_bw[t.word] += delta;
      n_b += delta;
    } else if (route == docspec) {
      n_sw[t.doc][t.local] += delta;
      n_s[t.doc] += delta;
    } else {
      n_dk[t.doc * K + route] += delta;
      n_dg[t.doc] += delta;
      n_kw[route * V + t.word] += delta;
      n_k[route] += delta;
    }
  };

  const double lambda_sum = cfg.lambda_background + cfg.lambda_docspec + cfg.lambda_general;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double u = uniform01(rng) * lambda_sum;
    std::uint32_t route;
    if (u < cfg.lambda_background) {
      route = static_cast<std::uint32_t>(background);
    } else if (u < cfg.lambda_background + cfg.lambda_docspec) {
      route = static_cast<std::uint32_t>(docspec);
    } else {
      route = static_cast<std::uint32_t>(std::min<std::uint64_t>(rng() % K, K - 1));
    }
    z[i] = route;
    add(i, route, +1);
  }

  std::vector<double> weights(K + 2);
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const auto& t = tokens[i];
      add(i, z[i], -1);
      const double doc_norm = cfg.lambda_general / (static_cast<double>(n_dg[t.doc]) + static_cast<double>(K) * alpha);
      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += doc_norm * (n_dk[t.doc * K + k] + alpha) * (n_kw[k * V + t.word] + beta) / (n_k[k] + vbeta);
        weights[k] = total;
      }
      total += cfg.lambda_background * (n_bw[t.word] + beta) / (static_cast<double>(n_b) + vbeta);
      weights[background] = total;
      total += cfg.lambda_docspec * (n_sw[t.doc][t.local] + beta) / (static_cast<double>(n_s[t.doc]) + vbeta);
      weights[docspec] = total;

      const double u = uniform01(rng) * total;
      std::size_t route = 0;
      while (route + 1 < weights.size() && weights[route] <= u) ++route;
      z[i] = static_cast<std::uint32_t>(route);
      add(i, z[i], +1);
    }
  }

  TopicModel model;
  model.config = cfg;
  model.vocabulary = std::move(vocab);
  model.phi_general.assign(K, std::vector<double>(V));
  for (std::size_t k = 0; k < K; ++k) {
    const double norm = static_cast<double>(n_k[k]) + vbeta;
    for (std::size_t w = 0; w < V; ++w) model.phi_general[k][w] = (n_kw[k * V + w] + beta) / norm;
  }
  model.phi_background.resize(V);
  for (std::size_t w = 0; w < V; ++w) model.phi_background[w] = (n_bw[w] + beta) / (static_cast<double>(n_b) + vbeta);

  model.phi_docspec.resize(D);
  for (std::size_t d = 0; d < D; ++d) {
    auto& dist = model.phi_docspec[d];
    const double norm = static_cast<double>(n_s[d]) + vbeta;
    dist.default_prob = beta / norm;
    for (std::size_t j = 0; j < doc_words[d].size(); ++j) {
      if (n_sw[d][j] == 0) continue;
      dist.words.push_back(doc_words[d][j]);
      dist.probs.push_back((n_sw[d][j] + beta) / norm);
    }
  }

  model.top_general.resize(K);
  parallel_for(K, [&](std::size_t k) { model.top_general[k] = top_indices(model.phi_general[k], cfg.top_words); });
  model.top_background = top_indices(model.phi_background, cfg.top_words);

  // Document-specific tops: observed words by probability, then unobserved
  // words (all at the default probability) in ascending id order.
  model.top_docspec.resize(D);
  const auto limit = std::min<std::size_t>(static_cast<std::size_t>(cfg.top_words), V);
  parallel_for(D, [&](std::size_t d) {
    const auto& dist = model.phi_docspec[d];
    const auto explicit_top = top_indices(dist.probs, static_cast<int>(limit));
    std::vector<int> out;
    for (const int i : explicit_top) out.push_back(dist.words[static_cast<std::size_t>(i)]);
    for (int w = 0; out.size() < limit && w < static_cast<int>(V); ++w) {
      if (!std::binary_search(dist.words.begin(), dist.words.end(), w)) out.push_back(w);
    }
    model.top_docspec[d] = std::move(out);
  });
  return model;
}

ScoreTable score_novel_topic_model(const CandidateSet& set, const TopicModel& model) {
  const auto best = model.max_probabilities();
  const auto top = model.top_word_mask();

  std::vector<const TermCandidate*> all;
  for (const auto& [key, c] : set.candidates) all.push_back(&c);
  std::vector<double> scores(all.size());
  parallel_for(all.size(), [&](std::size_t i) {
    double sum = 0.0;
    for (const auto& word : all[i]->words) {
      const int w = model.word_id(word);
      if (w >= 0 && top[static_cast<std::size_t>(w)]) sum += best[static_cast<std::size_t>(w)];
    }
    scores[i] = std::log(static_cast<double>(all[i]->tf)) * sum;
  });

  ScoreTable out{"NovelTopicModel", {}};
  for (std::size_t i = 0; i < all.size(); ++i) out.scores.emplace_hint(out.scores.end(), all[i]->canonical, scores[i]);
  return out;
}

void write_topic_words(std::ostream& out, const TopicModel& model) {
  for (std::size_t k = 0; k < model.top_general.size(); ++k) {
    for (std::size_t r = 0; r < model.top_general[k].size(); ++r) {
      const int w = model.top_general[k][r];
      out << "general_" << k << '\t' << r + 1 << '\t' << model.vocabulary[static_cast<std::size_t>(w)] << '\t'
          << model.phi_general[k][static_cast<std::size_t>(w)] << '\n';
    }
  }
  for (std::size_t r = 0; r < model.top_background.size(); ++r) {
    const int w = model.top_background[r];
    out << "background\t" << r + 1 << '\t' << model.vocabulary[static_cast<std::size_t>(w)] << '\t'
        << model.phi_background[static_cast<std::size_t>(w)] << '\n';
  }
}

}  // namespace atr
