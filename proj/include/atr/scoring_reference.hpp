#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "atr/candidates.hpp"
#include "atr/corpus.hpp"
#include "atr/score_table.hpp"

namespace atr {

/// General-domain frequency table keyed by canonical term.
struct ReferenceTable {
  std::map<std::string, std::uint64_t> frequencies;
  std::uint64_t total_words = 0;
  double smoothing = 1.0;  // substituted for missing or smaller counts

  /// max(count, smoothing)
  double frequency(const std::string& canonical) const;
};

/// Format: first line "#total <N>", then "term<TAB>count" rows.
ReferenceTable load_reference_table(const std::filesystem::path& path);
ReferenceTable parse_reference_table(std::istream& in, const std::string& source = "<stream>");
void write_reference_table(std::ostream& out, const ReferenceTable& table);

/// Counts every lemma n-gram of the given orders (no filtering) in a corpus.
/// Meant for building a reference table from a general-domain text collection.
ReferenceTable build_reference_table(const AnnotatedCorpus& corpus, int min_order = 1, int max_order = 4);

/// TF_target / max(TF_reference, eps)
ScoreTable score_domain_pertinence(const CandidateSet& set, const ReferenceTable& ref);

/// (TF_target / N_target) / (max(TF_reference, eps) / N_reference)
ScoreTable score_weirdness(const CandidateSet& set, const AnnotatedCorpus& corpus, const ReferenceTable& ref);

/// 1 - 1 / log2(2 + NTF_target * DF_target / NTF_reference), DF as a fraction of documents.
ScoreTable score_relevance(const CandidateSet& set, const AnnotatedCorpus& corpus, const ReferenceTable& ref);

}  // namespace atr
