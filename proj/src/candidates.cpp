#include "atr/candidates.hpp"

#include <fstream>
#include <ostream>
#include <regex>
#include <stdexcept>
#include <unordered_map>

#include "atr/error.hpp"
#include "atr/parallel.hpp"
#include "atr/text.hpp"
#include "embedded_data.hpp"

namespace atr {

const std::set<std::string>& smart_stop_words() {
  static const std::set<std::string> words = [] {
    std::set<std::string> out;
    for (auto line : text::split(data::smart_stop_words(), '\n')) {
      line = text::trim(line);
      if (!line.empty()) out.emplace(line);
    }
    return out;
  }();
  return words;
}

std::set<std::string> load_stop_words(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read stop-word list " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto w = text::trim(line);
    if (w.empty() || w.front() == '#') continue;
    out.insert(text::ascii_lower(w));
  }
  return out;
}

CandidateFilterConfig CandidateFilterConfig::defaults() {
  CandidateFilterConfig cfg;
  cfg.stop_words = smart_stop_words();
  return cfg;
}

void CandidateFilterConfig::validate() const {
  if (min_order < 1 || max_order < min_order) throw std::invalid_argument("empty n-gram order range");
  if (min_term_frequency < 1) throw std::invalid_argument("min_term_frequency must be >= 1");
  if (min_lemma_length < 0) throw std::invalid_argument("min_lemma_length must be >= 0");
}

std::size_t CandidateSet::containing_count(const std::string& canonical) const {
  const auto it = containment.find(canonical);
  return it == containment.end() ? 0 : it->second.supersequences.size();
}

std::size_t CandidateSet::contained_count(const std::string& canonical) const {
  const auto it = containment.find(canonical);
  return it == containment.end() ? 0 : it->second.subsequences.size();
}

std::string canonicalize(const std::vector<std::string>& lemmas) {
  std::string out;
  for (std::size_t i = 0; i < lemmas.size(); ++i) {
    if (i) out += '_';
    out += lemmas[i];
  }
  return text::ascii_lower(out);
}

bool pos_pattern_match(const std::vector<std::string>& tags, const std::string& pattern) {
  std::string joined;
  for (const auto& t : tags) joined += t;
  return std::regex_match(joined, std::regex(pattern));
}

namespace {

// Caches regex verdicts; the set of distinct lemmas and tag strings is small
// compared to the number of windows.
class WindowFilter {
 public:
  explicit WindowFilter(const CandidateFilterConfig& cfg)
      : cfg_(cfg), noise_(cfg.noise_pattern), pos_(cfg.pos_pattern) {}

  bool word_ok(const std::string& lemma) {
    const auto it = word_cache_.find(lemma);
    if (it != word_cache_.end()) return it->second;
    const bool ok = static_cast<int>(lemma.size()) >= cfg_.min_lemma_length &&
                    lemma.find('_') == std::string::npos && std::regex_search(lemma, noise_) &&
                    !cfg_.stop_words.contains(lemma);
    word_cache_.emplace(lemma, ok);
    return ok;
  }

  bool tags_ok(const std::string& joined) {
    const auto it = tag_cache_.find(joined);
    if (it != tag_cache_.end()) return it->second;
    const bool ok = std::regex_match(joined, pos_);
    tag_cache_.emplace(joined, ok);
    return ok;
  }

 private:
  const CandidateFilterConfig& cfg_;
  std::regex noise_;
  std::regex pos_;
  std::unordered_map<std::string, bool> word_cache_;
  std::unordered_map<std::string, bool> tag_cache_;
};

struct Partial {
  std::vector<std::string> words;
  std::vector<Occurrence> occurrences;
};

using PartialMap = std::map<std::string, Partial>;

PartialMap collect_document(const AnnotatedCorpus& corpus, std::uint32_t doc_index,
                            const CandidateFilterConfig& cfg) {
  WindowFilter filter(cfg);
  PartialMap out;
  const auto& doc = corpus.documents()[doc_index];
  for (std::uint32_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& sentence = doc.sentences[s];
    std::vector<char> word_ok(sentence.size());
    for (std::size_t i = 0; i < sentence.size(); ++i) word_ok[i] = filter.word_ok(sentence[i].lemma);

    for (std::size_t start = 0; start < sentence.size(); ++start) {
      std::string tags;
      std::vector<std::string> lemmas;
      for (int n = 1; n <= cfg.max_order && start + n <= sentence.size(); ++n) {
        const auto& tok = sentence[start + n - 1];
        if (!word_ok[start + n - 1]) break;  // every longer window contains it too
        tags += tok.pos;
        lemmas.push_back(tok.lemma);
        if (n < cfg.min_order || !filter.tags_ok(tags)) continue;
        auto& p = out[canonicalize(lemmas)];
        if (p.words.empty()) p.words = lemmas;
        p.occurrences.push_back({doc_index, s, static_cast<std::uint32_t>(start)});
      }
    }
  }
  return out;
}

}  // namespace

void build_containment(CandidateSet& set) {
  set.containment.clear();
  for (const auto& [key, cand] : set.candidates) set.containment[key];
  for (const auto& [key, cand] : set.candidates) {
    const auto& w = cand.words;
    std::set<std::string> subs;
    for (std::size_t len = 1; len < w.size(); ++len) {
      for (std::size_t i = 0; i + len <= w.size(); ++i) {
        std::vector<std::string> part(w.begin() + i, w.begin() + i + len);
        auto sub = canonicalize(part);
        if (set.candidates.contains(sub)) subs.insert(std::move(sub));
      }
    }
    for (const auto& sub : subs) {
      set.containment[key].subsequences.push_back(sub);
      set.containment[sub].supersequences.push_back(key);
    }
  }
  for (auto& [key, c] : set.containment) {
    std::sort(c.supersequences.begin(), c.supersequences.end());
    std::sort(c.subsequences.begin(), c.subsequences.end());
  }
}

CandidateSet collect_candidates(const AnnotatedCorpus& corpus, const CandidateFilterConfig& cfg) {
  cfg.validate();
  if (corpus.empty()) throw EmptyCorpusError();

  const auto& docs = corpus.documents();
  std::vector<PartialMap> partials(docs.size());
  parallel_for(docs.size(), [&](std::size_t d) {
    partials[d] = collect_document(corpus, static_cast<std::uint32_t>(d), cfg);
  });

  // Merge in document order so occurrence lists come out sorted.
  std::map<std::string, TermCandidate> merged;
  for (std::size_t d = 0; d < partials.size(); ++d) {
    for (auto& [key, p] : partials[d]) {
      auto& cand = merged[key];
      if (cand.canonical.empty()) {
        cand.canonical = key;
        cand.words = std::move(p.words);
        cand.length_words = static_cast<int>(cand.words.size());
      }
      cand.tf += p.occurrences.size();
      cand.doc_tf[docs[d].id] += p.occurrences.size();
      cand.occurrences.insert(cand.occurrences.end(), p.occurrences.begin(), p.occurrences.end());
    }
    partials[d].clear();
  }

  CandidateSet set;
  set.document_count = corpus.document_count();
  set.total_word_count = corpus.total_word_count();
  for (auto& [key, cand] : merged) {
    if (cand.tf >= static_cast<std::uint64_t>(cfg.min_term_frequency)) set.candidates.emplace(key, std::move(cand));
  }
  build_containment(set);
  return set;
}

void write_candidates_tsv(std::ostream& out, const CandidateSet& set) {
  for (const auto& [key, c] : set.candidates) {
    out << key << '\t' << c.length_words << '\t' << c.tf << '\t' << c.dtf() << '\n';
  }
}

}  // namespace atr
