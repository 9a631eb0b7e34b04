#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "tm2/agent.hpp"
#include "tm2/blackboard.hpp"
#include "tm2/errors.hpp"

namespace tm2 {

struct QueryResult {
  std::vector<Annotation> hits;
  size_t query_span_count = 0;
};

// Spans correspond when they overlap; a zero-width span matches iff its
// position lies within the other span.
inline bool spans_overlap(Offset a_start, Offset a_end, Offset b_start,
                          Offset b_end) {
  if (a_start == a_end)
    return b_start <= a_start && a_start < b_end;
  if (b_start == b_end)
    return a_start <= b_start && b_start < a_end;
  return std::max(a_start, b_start) < std::min(a_end, b_end);
}

// Typed retrieval over a finished experiment's annotations.
class Retrieval {
 public:
  Retrieval(const Blackboard& bb, const AgentRegistry& registry)
      : bb_(bb), registry_(registry) {}

  // All of the agent's annotations whose value equals the query value, in
  // annotation order.
  std::vector<Annotation> find(const Value& value,
                               const AgentId& agent) const {
    check(value, agent);
    std::vector<Annotation> out;
    for (const auto& a : bb_.entries(agent))
      if (a.value == value) out.push_back(a);
    return out;
  }

  // Projects the matched spans onto another agent's annotations: every
  // by_agent annotation overlapping a matched span, sorted and deduplicated.
  QueryResult find_by(const Value& value, const AgentId& in_agent,
                      const AgentId& by_agent) const {
    std::vector<Annotation> matches = find(value, in_agent);
    if (!registry_.has(by_agent) && by_agent != kSeedAgent)
      throw UnknownAgent("unknown agent: " + by_agent);

    QueryResult result;
    result.query_span_count = matches.size();
    // Candidates sorted by start; for each query span take the slice of
    // candidates that can still overlap it.
    const auto& candidates = bb_.entries(by_agent);
    std::vector<char> taken(candidates.size(), 0);
    for (const auto& q : matches) {
      // First candidate whose end could reach q: linear scan bounded by a
      // binary search on start.
      Offset q_end_bound = q.start == q.end ? q.end + 1 : q.end;
      auto upper = std::upper_bound(
          candidates.begin(), candidates.end(), q_end_bound,
          [](Offset bound, const Annotation& a) { return bound <= a.start; });
      for (auto it = candidates.begin(); it != upper; ++it) {
        size_t idx = static_cast<size_t>(it - candidates.begin());
        if (taken[idx]) continue;
        if (spans_overlap(q.start, q.end, it->start, it->end)) {
          taken[idx] = 1;
          result.hits.push_back(*it);
        }
      }
    }
    std::sort(result.hits.begin(), result.hits.end(), annotation_less);
    return result;
  }

 private:
  void check(const Value& value, const AgentId& agent) const {
    if (!bb_.has(agent)) throw UnknownAgent("agent has no entries: " + agent);
    TypeTag expected = agent == kSeedAgent
                           ? "String"
                           : registry_.entry(agent).output_type;
    if (value.type() != expected)
      throw TypeMismatch("agent " + agent + " produces " + expected +
                         ", query value is " + value.type());
  }

  const Blackboard& bb_;
  const AgentRegistry& registry_;
};

}  // namespace tm2
