#include "atr/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "atr/candidates.hpp"
#include "atr/error.hpp"

namespace atr {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }
  // Index drawn with probability proportional to 1 / (i + 1).
  std::size_t zipf(std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += 1.0 / static_cast<double>(i + 1);
    double x = uniform() * total;
    for (std::size_t i = 0; i < n; ++i) {
      x -= 1.0 / static_cast<double>(i + 1);
      if (x < 0) return i;
    }
    return n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

class WordMaker {
 public:
  explicit WordMaker(Rng& rng) : rng_(rng) {}

  std::string make() {
    static constexpr std::string_view consonants = "bdfgklmnprtvz";
    static constexpr std::string_view vowels = "aeiou";
    for (;;) {
      std::string w;
      const std::size_t syllables = 2 + rng_.below(2);
      for (std::size_t i = 0; i < syllables; ++i) {
        w += consonants[rng_.below(consonants.size())];
        w += vowels[rng_.below(vowels.size())];
      }
      if (rng_.below(2)) w += consonants[rng_.below(consonants.size())];
      if (!smart_stop_words().contains(w) && used_.insert(w).second) return w;
    }
  }

 private:
  Rng& rng_;
  std::set<std::string> used_;
};

struct Word {
  std::string lemma;
  std::string tag;
};

using Term = std::vector<Word>;

std::string term_canonical(const Term& t) {
  std::vector<std::string> lemmas;
  for (const auto& w : t) lemmas.push_back(w.lemma);
  return canonicalize(lemmas);
}

std::vector<float> around(const std::vector<double>& center, double spread, Rng& rng) {
  std::vector<float> v(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) v[i] = static_cast<float>(center[i] + spread * rng.gaussian());
  return v;
}

}  // namespace

SyntheticDataset make_synthetic_dataset(const SyntheticOptions& opt) {
  if (opt.documents < 1 || opt.tokens_per_document < 1 || opt.domain_terms < 1 || opt.general_words < 5) {
    throw std::invalid_argument("synthetic dataset sizes are too small");
  }
  Rng rng(opt.seed);
  WordMaker maker(rng);

  // Vocabularies.
  const auto n_domain_nouns = static_cast<std::size_t>(std::max(4, opt.domain_terms * 2 / 3));
  const auto n_domain_adjs = static_cast<std::size_t>(std::max(2, opt.domain_terms / 3));
  std::vector<std::string> domain_nouns, domain_adjs, general_nouns, general_adjs, verbs;
  for (std::size_t i = 0; i < n_domain_nouns; ++i) domain_nouns.push_back(maker.make());
  for (std::size_t i = 0; i < n_domain_adjs; ++i) domain_adjs.push_back(maker.make());
  const auto g = static_cast<std::size_t>(opt.general_words);
  for (std::size_t i = 0; i < g * 3 / 5; ++i) general_nouns.push_back(maker.make());
  for (std::size_t i = 0; i < g / 5; ++i) general_adjs.push_back(maker.make());
  for (std::size_t i = 0; i < g - g * 3 / 5 - g / 5; ++i) verbs.push_back(maker.make());

  std::vector<Term> terms;
  std::set<std::string> term_names;
  while (terms.size() < static_cast<std::size_t>(opt.domain_terms)) {
    Term t;
    auto noun = [&] { return Word{domain_nouns[rng.below(domain_nouns.size())], "NN"}; };
    auto adj = [&] { return Word{domain_adjs[rng.below(domain_adjs.size())], "JJ"}; };
    switch (terms.size() % 5) {
      case 0: t = {adj(), noun()}; break;
      case 1: t = {noun(), noun()}; break;
      case 2: t = {adj(), noun(), noun()}; break;
      case 3: t = {noun(), noun(), noun()}; break;
      default: t = {adj(), adj(), noun()}; break;
    }
    if (term_names.insert(term_canonical(t)).second) terms.push_back(std::move(t));
  }

  // Corpus.
  std::vector<Document> docs;
  for (int d = 0; d < opt.documents; ++d) {
    Document doc;
    char id[32];
    std::snprintf(id, sizeof id, "doc%04d", d);
    doc.id = id;
    std::size_t tokens = 0;
    auto pick_term = [&]() -> const Term& {
      if (rng.below(5) < 2) {
        std::vector<std::size_t> cluster;
        for (std::size_t i = static_cast<std::size_t>(d) % 8; i < terms.size(); i += 8) cluster.push_back(i);
        return terms[cluster[rng.below(cluster.size())]];
      }
      return terms[rng.zipf(terms.size())];
    };
    while (tokens < static_cast<std::size_t>(opt.tokens_per_document)) {
      Sentence s;
      auto plain = [&](const std::string& w, const std::string& tag) { s.push_back({w, w, tag}); };
      auto term = [&] {
        const Term& t = pick_term();
        for (std::size_t i = 0; i < t.size(); ++i) {
          const bool plural = i + 1 == t.size() && rng.below(5) == 0;
          s.push_back({plural ? t[i].lemma + "s" : t[i].lemma, t[i].lemma, plural ? "NNS" : t[i].tag});
        }
      };
      auto gnoun = [&] { plain(general_nouns[rng.zipf(general_nouns.size())], "NN"); };
      auto gadj = [&] { plain(general_adjs[rng.below(general_adjs.size())], "JJ"); };
      auto verb = [&] {
        const auto& v = verbs[rng.below(verbs.size())];
        s.push_back({v + "s", v, "VBZ"});
      };
      switch (rng.below(5)) {
        case 0: plain("the", "DT"); term(); verb(); plain("the", "DT"); gadj(); gnoun(); break;
        case 1: plain("the", "DT"); gnoun(); plain("of", "IN"); plain("the", "DT"); term(); verb(); plain("a", "DT"); term(); break;
        case 2: plain("a", "DT"); gadj(); gnoun(); verb(); plain("with", "IN"); plain("the", "DT"); term(); break;
        case 3: term(); verb(); plain("the", "DT"); gnoun(); plain("in", "IN"); plain("the", "DT"); gadj(); gnoun(); break;
        default: plain("the", "DT"); gadj(); gnoun(); verb(); term(); plain("and", "CC"); term(); break;
      }
      s.push_back({".", ".", "."});
      tokens += s.size();
      doc.sentences.push_back(std::move(s));
    }
    docs.push_back(std::move(doc));
  }

  SyntheticDataset data;
  data.corpus = AnnotatedCorpus(std::move(docs));
  for (const auto& t : terms) data.gold.push_back(term_canonical(t));
  std::sort(data.gold.begin(), data.gold.end());

  // Reference corpus: general vocabulary is common, domain vocabulary rare.
  auto& ref = data.reference;
  ref.total_words = 50'000'000;
  for (const auto* pool : {&general_nouns, &general_adjs, &verbs}) {
    for (const auto& w : *pool) ref.frequencies[w] = 2000 + rng.below(20000);
  }
  for (const auto& a : general_adjs) {
    for (const auto& n : general_nouns) ref.frequencies[a + "_" + n] = 50 + rng.below(500);
  }
  for (const auto* pool : {&domain_nouns, &domain_adjs}) {
    for (const auto& w : *pool) {
      if (const auto c = rng.below(5)) ref.frequencies[w] = c;
    }
  }

  // Link statistics: planted terms are frequent link captions.
  auto& links = data.link_stats.entries;
  for (const auto& name : data.gold) {
    const std::uint64_t w = 100 + rng.below(900);
    links[name] = {static_cast<std::uint64_t>(static_cast<double>(w) * (0.05 + 0.3 * rng.uniform())), w};
  }
  for (const auto& n : general_nouns) {
    const std::uint64_t w = 5000 + rng.below(50000);
    links[n] = {static_cast<std::uint64_t>(static_cast<double>(w) * 0.012 * rng.uniform()), w};
  }
  for (const auto* pool : {&domain_nouns, &domain_adjs}) {
    for (const auto& n : *pool) {
      const std::uint64_t w = 500 + rng.below(5000);
      links[n] = {static_cast<std::uint64_t>(static_cast<double>(w) * (0.01 + 0.02 * rng.uniform())), w};
    }
  }

  // Embeddings: one cluster for the domain, one for general words.
  constexpr std::size_t dim = 16;
  std::vector<double> domain_center(dim), general_center(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    domain_center[i] = rng.gaussian();
    general_center[i] = rng.gaussian();
  }
  data.embeddings = EmbeddingModel(dim);
  std::set<std::string> embedded;
  for (const auto& name : data.gold) embedded.insert(name);
  for (const auto* pool : {&domain_nouns, &domain_adjs}) embedded.insert(pool->begin(), pool->end());
  for (const auto& name : embedded) data.embeddings.add(name, around(domain_center, 0.35, rng));
  for (const auto* pool : {&general_nouns, &general_adjs}) {
    for (const auto& w : *pool) data.embeddings.add(w, around(general_center, 0.35, rng));
  }
  return data;
}

void write_synthetic_dataset(const SyntheticDataset& data, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    return out;
  };
  write_annotated_corpus(dir / "corpus.tsv", data.corpus);
  {
    auto out = open("reference.tsv");
    write_reference_table(out, data.reference);
  }
  {
    auto out = open("links.tsv");
    write_link_stats(out, data.link_stats);
  }
  {
    auto out = open("embeddings.txt");
    write_embeddings(out, data.embeddings);
  }
  {
    auto out = open("gold.txt");
    for (auto term : data.gold) {
      std::replace(term.begin(), term.end(), '_', ' ');
      out << term << '\n';
    }
  }
}

}  // namespace atr
