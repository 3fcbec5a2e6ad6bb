#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace atr {

/// Scores keyed by candidate canonical form, tagged with the producing method.
struct ScoreTable {
  std::string method;
  std::map<std::string, double> scores;

  std::size_t size() const { return scores.size(); }
  double at(const std::string& canonical) const { return scores.at(canonical); }

  friend bool operator==(const ScoreTable&, const ScoreTable&) = default;
};

/// Candidates by descending score, ties by ascending canonical.
std::vector<std::pair<std::string, double>> sorted_by_score(const ScoreTable& table);

/// TSV "canonical<TAB>score" with 6 decimals, in sorted_by_score order.
void write_score_table(std::ostream& out, const ScoreTable& table);

}  // namespace atr
