#include "generators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <iterator>
#include <set>

#include <unistd.h>

namespace gen {

double gaussian(Rng& rng) {
  const double u1 = 1.0 - uniform(rng);
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

atr::AnnotatedCorpus random_corpus(Rng& rng, const CorpusShape& shape) {
  static const std::vector<std::string> names = {"alpha", "beta",  "gamma", "delta", "omega", "sigma",
                                                 "theta", "kappa", "zeta",  "lambda", "rho",  "tau42"};
  static const std::vector<std::string> content_tags = {"NN", "NN", "NN", "NNS", "JJ", "JJ", "NNP", "VB", "RB"};
  const std::size_t vocab = std::min<std::size_t>(static_cast<std::size_t>(shape.vocabulary), names.size());

  std::vector<atr::Document> docs;
  for (int d = 0; d < shape.documents; ++d) {
    atr::Document doc;
    doc.id = "d" + std::to_string(d);
    for (int s = 0; s < shape.sentences_per_document; ++s) {
      atr::Sentence sent;
      const auto len = 1 + below(rng, static_cast<std::size_t>(shape.max_sentence_length));
      for (std::size_t i = 0; i < len; ++i) {
        const auto roll = below(rng, 100);
        if (roll < 72) {
          const auto& w = names[below(rng, vocab)];
          const auto& tag = content_tags[below(rng, content_tags.size())];
          sent.push_back({w, w, tag});
        } else if (roll < 82) {
          sent.push_back({"versus", "versus", "IN"});
        } else if (roll < 87) {
          sent.push_back({"of", "of", "IN"});
        } else if (roll < 91) {
          sent.push_back({"the", "the", "DT"});
        } else if (roll < 94) {
          sent.push_back({"ad", "ad", "NN"});
        } else if (roll < 97) {
          sent.push_back({"x-ray", "x-ray", "NN"});
        } else {
          sent.push_back({",", ",", ","});
        }
      }
      doc.sentences.push_back(std::move(sent));
    }
    docs.push_back(std::move(doc));
  }
  return atr::AnnotatedCorpus(std::move(docs));
}

atr::CandidateSet random_candidate_set(Rng& rng, const atr::AnnotatedCorpus& corpus, std::size_t max_candidates) {
  auto cfg = atr::CandidateFilterConfig::defaults();
  cfg.min_term_frequency = 1;
  auto set = atr::collect_candidates(corpus, cfg);
  while (set.candidates.size() > max_candidates) {
    auto it = set.candidates.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(below(rng, set.candidates.size())));
    set.candidates.erase(it);
  }
  atr::build_containment(set);
  return set;
}

atr::CandidateSet hand_set(const std::vector<HandTerm>& terms, std::size_t documents, std::size_t words) {
  atr::CandidateSet set;
  set.document_count = documents;
  set.total_word_count = words;
  for (const auto& t : terms) {
    atr::TermCandidate c;
    c.canonical = t.canonical;
    std::size_t start = 0;
    while (true) {
      const auto end = t.canonical.find('_', start);
      c.words.push_back(t.canonical.substr(start, end - start));
      if (end == std::string::npos) break;
      start = end + 1;
    }
    c.length_words = static_cast<int>(c.words.size());
    c.doc_tf = t.doc_tf;
    for (const auto& [doc, n] : t.doc_tf) c.tf += n;
    set.candidates[c.canonical] = std::move(c);
  }
  atr::build_containment(set);
  return set;
}

atr::ReferenceTable random_reference(Rng& rng, const atr::CandidateSet& set) {
  atr::ReferenceTable ref;
  for (const auto& [name, c] : set.candidates) {
    if (below(rng, 10) < 6) ref.frequencies[name] = below(rng, 50);
  }
  ref.frequencies["unrelated_term"] = 1 + below(rng, 1000);
  ref.total_words = 5000 + below(rng, 100000);
  ref.smoothing = below(rng, 4) == 0 ? 0.5 : 1.0;
  return ref;
}

atr::LinkStatsTable random_link_stats(Rng& rng, const atr::CandidateSet& set) {
  atr::LinkStatsTable links;
  for (const auto& [name, c] : set.candidates) {
    if (below(rng, 10) >= 7) continue;
    const std::uint64_t w = below(rng, 200);
    links.entries[name] = {w == 0 ? 0 : below(rng, w + 1), w};
  }
  links.threshold = below(rng, 2) == 0 ? 0.018 : 0.1 * uniform(rng);
  return links;
}

atr::EmbeddingModel random_embeddings(Rng& rng, const atr::CandidateSet& set, std::size_t dimension) {
  atr::EmbeddingModel emb(dimension);
  auto vec = [&](bool zero) {
    std::vector<float> v(dimension, 0.0f);
    if (!zero) {
      for (auto& x : v) x = static_cast<float>(gaussian(rng));
    }
    return v;
  };
  for (const auto& [name, c] : set.candidates) {
    if (below(rng, 10) < 7) emb.add(name, vec(below(rng, 20) == 0));
  }
  emb.add("outside_vocabulary", vec(false));
  return emb;
}

atr::TopicModel random_topic_model(Rng& rng, const atr::CandidateSet& set, std::size_t documents) {
  std::set<std::string> words{"filler"};
  for (const auto& [name, c] : set.candidates) words.insert(c.words.begin(), c.words.end());
  atr::TopicModel m;
  m.vocabulary.assign(words.begin(), words.end());
  const std::size_t v = m.vocabulary.size();

  auto dense = [&] {
    std::vector<double> p(v);
    double total = 0.0;
    for (auto& x : p) total += (x = 0.01 + uniform(rng));
    for (auto& x : p) x /= total;
    return p;
  };
  auto top = [&] {
    std::vector<int> ids;
    for (std::size_t w = 0; w < v; ++w) {
      if (below(rng, 3) == 0) ids.push_back(static_cast<int>(w));
    }
    return ids;
  };
  const std::size_t topics = 1 + below(rng, 4);
  for (std::size_t t = 0; t < topics; ++t) {
    m.phi_general.push_back(dense());
    m.top_general.push_back(top());
  }
  m.phi_background = dense();
  m.top_background = top();
  for (std::size_t d = 0; d < documents; ++d) {
    atr::SparseDistribution dist;
    std::vector<double> raw;
    for (std::size_t w = 0; w < v; ++w) {
      if (below(rng, 2) == 0) {
        dist.words.push_back(static_cast<int>(w));
        raw.push_back(0.05 + uniform(rng));
      }
    }
    const double rest = 0.01 * uniform(rng);
    double total = rest * static_cast<double>(v - dist.words.size());
    for (const double x : raw) total += x;
    for (const double x : raw) dist.probs.push_back(x / total);
    dist.default_prob = rest / total;
    m.phi_docspec.push_back(std::move(dist));
    m.top_docspec.push_back(top());
  }
  return m;
}

TempDir::TempDir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

namespace {

std::string word_name(int cluster, int i) {
  // Interleaved names, so sorted word ids alternate between the clusters.
  char buf[16];
  std::snprintf(buf, sizeof buf, "w%04d%c", i, cluster == 0 ? 'a' : 'b');
  return buf;
}

}  // namespace

// Each document draws uniformly from one of two disjoint vocabularies.
atr::AnnotatedCorpus two_cluster_corpus(int vocabulary_per_cluster, int documents, int tokens_per_document) {
  gen::Rng rng(2718);
  std::vector<atr::Document> docs;
  for (int d = 0; d < documents; ++d) {
    atr::Document doc;
    char id[16];
    std::snprintf(id, sizeof id, "doc%03d", d);
    doc.id = id;
    const int cluster = d % 2;
    atr::Sentence s;
    for (int i = 0; i < tokens_per_document; ++i) {
      const auto w = word_name(cluster, static_cast<int>(below(rng, vocabulary_per_cluster)));
      s.push_back({w, w, "NN"});
      if (s.size() == 20) doc.sentences.push_back(std::move(s)), s.clear();
    }
    if (!s.empty()) doc.sentences.push_back(std::move(s));
    docs.push_back(std::move(doc));
  }
  return atr::AnnotatedCorpus(std::move(docs));
}

// Connected components of the "occurs in the same document" relation.
std::map<std::string, int> cooccurrence_clusters(const atr::AnnotatedCorpus& corpus) {
  std::map<std::string, std::string> parent;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    if (parent[x] == x) return x;
    return parent[x] = find(parent[x]);
  };
  for (const auto& doc : corpus.documents()) {
    std::string first;
    for (const auto& s : doc.sentences) {
      for (const auto& t : s) {
        if (!parent.contains(t.lemma)) parent[t.lemma] = t.lemma;
        if (first.empty()) first = t.lemma;
        parent[find(t.lemma)] = find(first);
      }
    }
  }
  std::map<std::string, int> label;
  std::map<std::string, int> out;
  for (const auto& [w, p] : parent) {
    const auto root = find(w);
    if (!label.contains(root)) label.emplace(root, static_cast<int>(label.size()));
    out[w] = label.at(root);
  }
  return out;
}

}  // namespace gen
