#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tm2/interaction.hpp"

namespace tm2 {

struct EvaluationClause {
  std::vector<AgentId> agents;
  std::string gold;  // resource URI of the gold standard
};

// A named, ordered collection of interactions bound to a corpus resource and
// an output location. Interaction order is execution order.
struct Experiment {
  std::string name;
  std::string corpus;  // URI
  std::string output;  // path prefix for artifacts
  std::vector<Interaction> interactions;
  std::optional<EvaluationClause> evaluation;
};

// Static validation: collects every problem instead of stopping at the first.
// Type mismatches cannot arise here for interactions built through the
// Analysis/Synthesis builders, but agent identity consistency and self-loops
// can only be checked at the experiment level.
inline std::vector<std::string> validate(const Experiment& x) {
  std::vector<std::string> problems;
  std::map<AgentId, std::pair<TypeTag, TypeTag>> seen;

  auto check_agent = [&](const AgentSpec& a, size_t index) {
    if (a.id.empty()) {
      problems.push_back("interaction " + std::to_string(index) +
                         ": agent with empty id");
      return;
    }
    auto it = seen.find(a.id);
    if (it == seen.end()) {
      seen[a.id] = {a.input_type, a.output_type};
    } else if (it->second != std::make_pair(a.input_type, a.output_type)) {
      problems.push_back("agent " + a.id +
                         " appears with inconsistent types (as " +
                         it->second.first + " -> " + it->second.second +
                         " and as " + a.input_type + " -> " + a.output_type +
                         ")");
    }
  };

  for (size_t i = 0; i < x.interactions.size(); ++i) {
    if (const auto* a = std::get_if<Analysis>(&x.interactions[i])) {
      std::set<AgentId> source_ids;
      for (const auto& s : a->sources()) {
        check_agent(s, i);
        source_ids.insert(s.id);
      }
      for (const auto& t : a->targets()) {
        check_agent(t, i);
        if (source_ids.count(t.id))
          problems.push_back("interaction " + std::to_string(i) + ": agent " +
                             t.id + " is both source and target (self-loop)");
      }
    } else {
      const auto& s = std::get<Synthesis>(x.interactions[i]);
      for (const auto& d : s.data_agents()) check_agent(d, i);
      for (const auto& inf : s.info_agents()) check_agent(inf, i);
      if (s.model().id.empty())
        problems.push_back("interaction " + std::to_string(i) +
                           ": synthesis without a model target");
    }
  }
  return problems;
}

}  // namespace tm2
