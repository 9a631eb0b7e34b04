#pragma once

#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "tm2/annotation.hpp"
#include "tm2/errors.hpp"

namespace tm2 {

struct EvaluationResult {
  size_t true_positive = 0;
  size_t false_positive = 0;
  size_t false_negative = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double accuracy = 0;
};

// Compares result annotations against gold by exact span and canonical value
// text, independent of the concrete payload types. Both sides are
// deduplicated first, so a result matching gold counts once even under
// duplicate gold entries.
inline EvaluationResult evaluate_generic(const std::vector<Annotation>& results,
                                         const std::vector<Annotation>& gold) {
  if (!results.empty() && !gold.empty() &&
      results.front().data_ref != gold.front().data_ref)
    throw DataMismatch("results annotate " + results.front().data_ref +
                       " but gold annotates " + gold.front().data_ref);

  using Key = std::tuple<Offset, Offset, std::string>;
  auto keys = [](const std::vector<Annotation>& list) {
    std::set<Key> out;
    for (const auto& a : list) out.insert({a.start, a.end, a.value.text()});
    return out;
  };
  std::set<Key> r = keys(results), g = keys(gold);

  EvaluationResult e;
  for (const auto& k : r)
    g.count(k) ? ++e.true_positive : ++e.false_positive;
  for (const auto& k : g)
    if (!r.count(k)) ++e.false_negative;

  auto ratio = [](size_t num, size_t den) {
    return den > 0 ? static_cast<double>(num) / static_cast<double>(den) : 0.0;
  };
  e.precision = ratio(e.true_positive, e.true_positive + e.false_positive);
  e.recall = ratio(e.true_positive, e.true_positive + e.false_negative);
  e.f1 = (e.precision + e.recall) > 0
             ? 2 * e.precision * e.recall / (e.precision + e.recall)
             : 0.0;
  e.accuracy = ratio(e.true_positive,
                     e.true_positive + e.false_positive + e.false_negative);
  return e;
}

}  // namespace tm2
