#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "atr/candidates.hpp"
#include "atr/error.hpp"

namespace atr {

struct GoldStandard {
  std::string name;
  std::set<std::string> terms;  // canonical forms
};

/// One term per line, words separated by spaces; converted to the canonical
/// underscore form. With `lemmatize`, each word goes through the fallback noun
/// lemmatizer first. Throws atr::Error when no terms are found.
GoldStandard load_gold_standard(const std::filesystem::path& path, bool lemmatize = false);
GoldStandard parse_gold_standard(std::istream& in, std::string name, bool lemmatize = false);

class EvaluationError : public Error {
 public:
  using Error::Error;
};

struct EvalResult {
  double avp = 0.0;
  std::size_t k = 0;
  std::vector<double> precision_at;  // P(1..K)
  std::vector<double> recall_at;     // R(1..K)
};

/// Number of gold terms among the candidates; throws EvaluationError when zero.
std::size_t choose_k(const CandidateSet& set, const GoldStandard& gold);

/// Average precision over the top K: sum of P(i) (R(i) - R(i-1)), with recall
/// relative to K so a perfect ranking scores exactly 1.
EvalResult average_precision(const std::vector<std::string>& ranking, const GoldStandard& gold, std::size_t k);

/// A parameter set is a JSON object of plain values; its key is the compact dump.
using ParamSet = nlohmann::json;
std::string param_key(const ParamSet& params);

/// Cartesian product of value lists, in lexicographic order of parameter names
/// with values varying fastest on the last name.
std::vector<ParamSet> cartesian_grid(const std::map<std::string, std::vector<nlohmann::json>>& axes);

struct GridResults {
  std::vector<std::string> param_sets;  // keys, in grid order
  std::vector<std::string> datasets;
  std::map<std::pair<std::string, std::string>, EvalResult> cells;  // (param key, dataset)

  double avp(const std::string& param_key, const std::string& dataset) const;
  void set(const std::string& param_key, const std::string& dataset, EvalResult result);
};

using GridEvaluator = std::function<EvalResult(const ParamSet&, const std::string& dataset)>;

/// Evaluates every parameter set on every dataset; cells run in parallel.
GridResults grid_search(const std::vector<ParamSet>& grid, const std::vector<std::string>& datasets,
                        const GridEvaluator& evaluate);

struct CvSelection {
  std::string param_set;
  double goodness = 0.0;  // product of relative goodness over validation datasets
  std::vector<std::string> validation_datasets;
};

/// Leave-one-dataset-out selection: on each validation dataset every parameter
/// set's AvP is divided by that dataset's best AvP, and the parameter set with
/// the largest product of these ratios wins (first in grid order on ties).
/// Datasets whose best AvP is 0 are skipped with a warning.
CvSelection cv_select(const GridResults& results, const std::string& held_out);

/// CSV "method,param_set,dataset,K,avp".
void write_results_csv(std::ostream& out, const std::string& method, const GridResults& results);
GridResults read_results_csv(std::istream& in, const std::string& source = "<stream>");

}  // namespace atr
