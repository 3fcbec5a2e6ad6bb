#include "atr/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "atr/corpus.hpp"
#include "atr/error.hpp"
#include "atr/log.hpp"
#include "atr/parallel.hpp"
#include "atr/text.hpp"

namespace atr {

GoldStandard parse_gold_standard(std::istream& in, std::string name, bool lemmatize) {
  GoldStandard gold{std::move(name), {}};
  std::string line;
  while (std::getline(in, line)) {
    const auto trimmed = text::trim(line);
    if (trimmed.empty()) continue;
    std::vector<std::string> words;
    std::istringstream ss{std::string(trimmed)};
    std::string w;
    while (ss >> w) {
      w = text::ascii_lower(w);
      words.push_back(lemmatize ? lemmatize_noun(w) : w);
    }
    gold.terms.insert(canonicalize(words));
  }
  if (gold.terms.empty()) throw Error("gold standard '" + gold.name + "' has no terms");
  return gold;
}

GoldStandard load_gold_standard(const std::filesystem::path& path, bool lemmatize) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read gold standard " + path.string());
  return parse_gold_standard(in, path.filename().string(), lemmatize);
}

std::size_t choose_k(const CandidateSet& set, const GoldStandard& gold) {
  std::size_t k = 0;
  for (const auto& t : gold.terms) k += set.candidates.contains(t) ? 1 : 0;
  if (k == 0) throw EvaluationError("no gold term of '" + gold.name + "' is among the candidates");
  return k;
}

EvalResult average_precision(const std::vector<std::string>& ranking, const GoldStandard& gold, std::size_t k) {
  if (k == 0) throw std::invalid_argument("K must be positive");
  if (k > ranking.size()) throw std::invalid_argument("K exceeds the ranking length");
  EvalResult r;
  r.k = k;
  r.precision_at.reserve(k);
  r.recall_at.reserve(k);
  std::size_t hits = 0;
  double previous_recall = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (gold.terms.contains(ranking[i])) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(i + 1);
    const double rec = static_cast<double>(hits) / static_cast<double>(k);
    r.avp += p * (rec - previous_recall);
    previous_recall = rec;
    r.precision_at.push_back(p);
    r.recall_at.push_back(rec);
  }
  return r;
}

std::string param_key(const ParamSet& params) { return params.dump(); }

std::vector<ParamSet> cartesian_grid(const std::map<std::string, std::vector<nlohmann::json>>& axes) {
  std::vector<ParamSet> out;
  for (const auto& [name, values] : axes) {
    if (values.empty()) return out;
  }
  out.push_back(nlohmann::json::object());
  for (const auto& [name, values] : axes) {
    std::vector<ParamSet> next;
    next.reserve(out.size() * values.size());
    for (const auto& partial : out) {
      for (const auto& v : values) {
        auto p = partial;
        p[name] = v;
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  if (axes.empty()) out.clear();
  return out;
}

double GridResults::avp(const std::string& key, const std::string& dataset) const {
  const auto it = cells.find({key, dataset});
  if (it == cells.end()) throw std::out_of_range("no result for " + key + " on " + dataset);
  return it->second.avp;
}

void GridResults::set(const std::string& key, const std::string& dataset, EvalResult result) {
  if (std::find(param_sets.begin(), param_sets.end(), key) == param_sets.end()) param_sets.push_back(key);
  if (std::find(datasets.begin(), datasets.end(), dataset) == datasets.end()) datasets.push_back(dataset);
  cells[{key, dataset}] = std::move(result);
}

GridResults grid_search(const std::vector<ParamSet>& grid, const std::vector<std::string>& datasets,
                        const GridEvaluator& evaluate) {
  GridResults results;
  if (grid.empty()) return results;
  for (const auto& p : grid) results.param_sets.push_back(param_key(p));
  results.datasets = datasets;

  const std::size_t cells = grid.size() * datasets.size();
  std::vector<EvalResult> out(cells);
  parallel_for(cells, [&](std::size_t i) { out[i] = evaluate(grid[i / datasets.size()], datasets[i % datasets.size()]); });
  for (std::size_t i = 0; i < cells; ++i) {
    results.cells[{results.param_sets[i / datasets.size()], datasets[i % datasets.size()]}] = std::move(out[i]);
  }
  return results;
}

CvSelection cv_select(const GridResults& results, const std::string& held_out) {
  if (results.param_sets.empty()) throw std::invalid_argument("no parameter sets to choose from");
  CvSelection sel;
  std::vector<std::pair<std::string, double>> validation;  // dataset, best AvP
  for (const auto& ds : results.datasets) {
    if (ds == held_out) continue;
    double best = 0.0;
    for (const auto& p : results.param_sets) best = std::max(best, results.avp(p, ds));
    if (best <= 0.0) {
      log::warn("cv_select: best AvP on '" + ds + "' is 0; dataset excluded");
      continue;
    }
    validation.emplace_back(ds, best);
    sel.validation_datasets.push_back(ds);
  }
  if (validation.empty()) throw std::invalid_argument("no validation dataset left after holding out '" + held_out + "'");

  double best_goodness = -1.0;
  for (const auto& p : results.param_sets) {
    double goodness = 1.0;
    for (const auto& [ds, best] : validation) goodness *= results.avp(p, ds) / best;
    // Near-equal products (rounding noise) resolve to the earlier parameter set.
    if (goodness > best_goodness * (1.0 + 1e-12) || best_goodness < 0.0) {
      best_goodness = goodness;
      sel.param_set = p;
    }
  }
  sel.goodness = best_goodness;
  return sel;
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::string& method, const GridResults& results) {
  out << "method,param_set,dataset,K,avp\n";
  char buf[64];
  for (const auto& p : results.param_sets) {
    for (const auto& ds : results.datasets) {
      const auto it = results.cells.find({p, ds});
      if (it == results.cells.end()) continue;
      std::snprintf(buf, sizeof buf, "%.17g", it->second.avp);
      out << csv_quote(method) << ',' << csv_quote(p) << ',' << csv_quote(ds) << ',' << it->second.k << ',' << buf
          << '\n';
    }
  }
}

GridResults read_results_csv(std::istream& in, const std::string& source) {
  GridResults results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("method,", 0) == 0)) continue;
    const auto f = csv_split(line);
    if (f.size() != 5) throw ParseError(source, line_no, "expected method,param_set,dataset,K,avp");
    EvalResult r;
    try {
      r.k = static_cast<std::size_t>(std::stoull(f[3]));
      std::size_t used = 0;
      r.avp = std::stod(f[4], &used);
      if (used != f[4].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ParseError(source, line_no, "non-numeric K or avp");
    }
    results.set(f[1], f[2], std::move(r));
  }
  return results;
}

}  // namespace atr
