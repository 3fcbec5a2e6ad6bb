#include "atr/score_table.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace atr {

std::vector<std::pair<std::string, double>> sorted_by_score(const ScoreTable& table) {
  std::vector<std::pair<std::string, double>> out(table.scores.begin(), table.scores.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

void write_score_table(std::ostream& out, const ScoreTable& table) {
  char buf[64];
  for (const auto& [key, score] : sorted_by_score(table)) {
    std::snprintf(buf, sizeof buf, "%.6f", score);
    out << key << '\t' << buf << '\n';
  }
}

}  // namespace atr
