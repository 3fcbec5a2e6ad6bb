#include "atr/scoring_reference.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "atr/error.hpp"
#include "atr/text.hpp"

namespace atr {

double ReferenceTable::frequency(const std::string& canonical) const {
  const auto it = frequencies.find(canonical);
  const double count = it == frequencies.end() ? 0.0 : static_cast<double>(it->second);
  return std::max(count, smoothing);
}

namespace {

bool parse_u64(std::string_view s, std::uint64_t& out) {
  s = text::trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

ReferenceTable parse_reference_table(std::istream& in, const std::string& source) {
  ReferenceTable table;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  std::uint64_t max_count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      const auto h = text::trim(line);
      if (!h.starts_with("#total") || !parse_u64(h.substr(6), table.total_words)) {
        throw ParseError(source, line_no, "expected header '#total <N>'");
      }
      if (table.total_words == 0) throw ParseError(source, line_no, "reference total must be positive");
      header = true;
      continue;
    }
    if (text::trim(line).empty()) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 2) throw ParseError(source, line_no, "expected term<TAB>count");
    const std::string term(text::trim(fields[0]));
    if (term.empty()) throw ParseError(source, line_no, "empty term");
    const auto count_field = text::trim(fields[1]);
    if (count_field.starts_with('-')) throw ParseError(source, line_no, "negative count for '" + term + "'");
    std::uint64_t count = 0;
    if (!parse_u64(count_field, count)) throw ParseError(source, line_no, "non-numeric count for '" + term + "'");
    if (!table.frequencies.emplace(term, count).second) {
      throw ParseError(source, line_no, "duplicate term '" + term + "'");
    }
    max_count = std::max(max_count, count);
  }
  if (!header) throw ParseError(source, 0, "missing '#total <N>' header");
  if (max_count > table.total_words) throw ParseError(source, 0, "a term count exceeds the declared total");
  return table;
}

ReferenceTable load_reference_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read reference table " + path.string());
  return parse_reference_table(in, path.string());
}

void write_reference_table(std::ostream& out, const ReferenceTable& table) {
  out << "#total " << table.total_words << '\n';
  for (const auto& [term, count] : table.frequencies) out << term << '\t' << count << '\n';
}

ReferenceTable build_reference_table(const AnnotatedCorpus& corpus, int min_order, int max_order) {
  if (min_order < 1 || max_order < min_order) throw std::invalid_argument("empty n-gram order range");
  ReferenceTable table;
  table.total_words = corpus.total_word_count();
  for (const auto& doc : corpus.documents()) {
    for (const auto& sentence : doc.sentences) {
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        std::vector<std::string> lemmas;
        for (int n = 1; n <= max_order && i + n <= sentence.size(); ++n) {
          lemmas.push_back(sentence[i + n - 1].lemma);
          if (n >= min_order) ++table.frequencies[canonicalize(lemmas)];
        }
      }
    }
  }
  return table;
}

ScoreTable score_domain_pertinence(const CandidateSet& set, const ReferenceTable& ref) {
  ScoreTable out{"DomainPertinence", {}};
  for (const auto& [key, c] : set.candidates) {
    out.scores.emplace_hint(out.scores.end(), key, static_cast<double>(c.tf) / ref.frequency(key));
  }
  return out;
}

ScoreTable score_weirdness(const CandidateSet& set, const AnnotatedCorpus& corpus, const ReferenceTable& ref) {
  if (corpus.total_word_count() == 0 || ref.total_words == 0) throw std::invalid_argument("empty collection");
  // (tf / N_t) / (f / N_r) == (tf / f) * (N_r / N_t); the second form keeps the
  // order identical to DomainPertinence bit for bit.
  const double scale = static_cast<double>(ref.total_words) / static_cast<double>(corpus.total_word_count());
  ScoreTable out{"Weirdness", {}};
  for (const auto& [key, c] : set.candidates) {
    out.scores.emplace_hint(out.scores.end(), key, static_cast<double>(c.tf) / ref.frequency(key) * scale);
  }
  return out;
}

ScoreTable score_relevance(const CandidateSet& set, const AnnotatedCorpus& corpus, const ReferenceTable& ref) {
  if (corpus.total_word_count() == 0 || ref.total_words == 0) throw std::invalid_argument("empty collection");
  const double n_target = static_cast<double>(corpus.total_word_count());
  const double n_ref = static_cast<double>(ref.total_words);
  const double docs = static_cast<double>(corpus.document_count());
  ScoreTable out{"Relevance", {}};
  for (const auto& [key, c] : set.candidates) {
    const double ntf_target = static_cast<double>(c.tf) / n_target;
    const double df = static_cast<double>(c.dtf()) / docs;
    const double ntf_ref = ref.frequency(key) / n_ref;
    out.scores.emplace_hint(out.scores.end(), key, 1.0 - 1.0 / std::log2(2.0 + ntf_target * df / ntf_ref));
  }
  return out;
}

}  // namespace atr
