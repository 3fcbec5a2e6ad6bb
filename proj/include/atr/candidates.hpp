#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "atr/corpus.hpp"

namespace atr {

/// Default PoS pattern: adjectives/nouns with prepositions allowed between
/// nouns, ending in a noun. Matched against the concatenated tag string.
inline constexpr const char* kDefaultPosPattern = "(NN(S)?|JJ|NNP|NN(S?)IN)*(NN(S)?)";
inline constexpr const char* kDefaultNoisePattern = "^[a-z0-9]+$";

struct CandidateFilterConfig {
  int min_order = 1;
  int max_order = 4;
  int min_lemma_length = 3;
  std::string noise_pattern = kDefaultNoisePattern;
  std::set<std::string> stop_words;  // see smart_stop_words()
  std::string pos_pattern = kDefaultPosPattern;
  int min_term_frequency = 2;

  /// Defaults with the bundled SMART stop list.
  static CandidateFilterConfig defaults();
  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

/// The bundled SMART stop list.
const std::set<std::string>& smart_stop_words();

/// One word per line; blank lines and lines starting with '#' are skipped.
std::set<std::string> load_stop_words(const std::filesystem::path& path);

struct Occurrence {
  std::uint32_t doc = 0;       // index into AnnotatedCorpus::documents()
  std::uint32_t sentence = 0;  // index within the document
  std::uint32_t offset = 0;    // token offset of the first word within the sentence

  friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

struct TermCandidate {
  std::string canonical;
  std::vector<std::string> words;  // lemmas
  int length_words = 0;
  std::uint64_t tf = 0;
  std::map<std::string, std::uint64_t> doc_tf;  // document id -> occurrences
  std::vector<Occurrence> occurrences;           // sorted

  std::size_t dtf() const { return doc_tf.size(); }

  friend bool operator==(const TermCandidate&, const TermCandidate&) = default;
};

struct Containment {
  std::vector<std::string> supersequences;  // candidates containing this one
  std::vector<std::string> subsequences;    // candidates contained in this one

  friend bool operator==(const Containment&, const Containment&) = default;
};

/// Candidates keyed (and iterated) by canonical string, plus the nesting index
/// and the collection-level counts the scorers need.
struct CandidateSet {
  std::map<std::string, TermCandidate> candidates;
  std::map<std::string, Containment> containment;
  std::size_t document_count = 0;
  std::size_t total_word_count = 0;

  std::size_t size() const { return candidates.size(); }
  bool empty() const { return candidates.empty(); }
  const TermCandidate& at(const std::string& canonical) const { return candidates.at(canonical); }
  /// Number of candidates containing `canonical` (e_t).
  std::size_t containing_count(const std::string& canonical) const;
  /// Number of candidates contained in `canonical` (e'_t).
  std::size_t contained_count(const std::string& canonical) const;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

/// Lemmas joined by '_' and lowercased.
std::string canonicalize(const std::vector<std::string>& lemmas);

/// Full match of the pattern against the tags concatenated without separators.
bool pos_pattern_match(const std::vector<std::string>& tags, const std::string& pattern);

CandidateSet collect_candidates(const AnnotatedCorpus& corpus, const CandidateFilterConfig& cfg);

/// Rebuilds `set.containment` from the candidate word sequences
/// (contiguous word-subsequence relation).
void build_containment(CandidateSet& set);

/// TSV "canonical<TAB>length<TAB>tf<TAB>dtf" sorted by canonical.
void write_candidates_tsv(std::ostream& out, const CandidateSet& set);

}  // namespace atr
