#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tm2/annotation.hpp"

namespace tm2 {

// Reserved author of the corpus bootstrap annotation.
inline constexpr const char* kSeedAgent = "__seed__";

// The shared state all interactions read and write: an append-only map from
// agent identity to that agent's produced annotations, sorted and
// deduplicated. Exclusively owned by the engine during a run.
class Blackboard {
 public:
  Blackboard() = default;
  Blackboard(std::string experiment_name, std::string data_ref)
      : name_(std::move(experiment_name)), data_ref_(std::move(data_ref)) {}

  const std::string& experiment_name() const { return name_; }
  const std::string& data_ref() const { return data_ref_; }

  bool has(const AgentId& agent) const { return entries_.count(agent) > 0; }

  const std::vector<Annotation>& entries(const AgentId& agent) const {
    static const std::vector<Annotation> empty;
    auto it = entries_.find(agent);
    return it == entries_.end() ? empty : it->second;
  }

  const std::map<AgentId, std::vector<Annotation>>& all() const {
    return entries_;
  }

  // Appends annotations under the agent's id, keeping the list sorted and
  // free of exact duplicates. Existing entries are never touched.
  void append(const AgentId& agent, std::vector<Annotation> annotations) {
    auto& list = entries_[agent];
    for (auto& a : annotations) list.push_back(std::move(a));
    std::stable_sort(list.begin(), list.end(), annotation_less);
    // Exact duplicates share a sort key but may be separated by other
    // annotations with the same key, so compare within the whole key run.
    std::vector<Annotation> unique;
    unique.reserve(list.size());
    size_t run_begin = 0;
    for (auto& a : list) {
      if (!unique.empty() && compare_annotations(unique.back(), a) != 0)
        run_begin = unique.size();
      bool dup = false;
      for (size_t j = run_begin; j < unique.size() && !dup; ++j)
        dup = annotations_equal(unique[j], a);
      if (!dup) unique.push_back(std::move(a));
    }
    list = std::move(unique);
  }

  size_t annotation_count() const {
    size_t n = 0;
    for (const auto& [agent, list] : entries_) n += list.size();
    return n;
  }

 private:
  std::string name_;
  std::string data_ref_;
  std::map<AgentId, std::vector<Annotation>> entries_;
};

}  // namespace tm2
