#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tm2/experiment.hpp"
#include "tm2/interaction.hpp"

namespace tm2 {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

// Emits the experiment as a DOT digraph: one node per agent, solid edges
// from source to target for each analysis (labeled with the exchanged type),
// dashed edges from data and info agents into the model node for each
// synthesis. Equal experiments yield byte-equal output.
inline std::string dot_emit(const Experiment& x) {
  std::set<std::string> nodes;
  std::vector<std::string> edges;
  for (const auto& interaction : x.interactions) {
    if (const auto* a = std::get_if<Analysis>(&interaction)) {
      for (const auto& source : a->sources()) nodes.insert(source.id);
      for (const auto& target : a->targets()) nodes.insert(target.id);
      for (const auto& source : a->sources())
        for (const auto& target : a->targets())
          edges.push_back("  " + detail::dot_quote(source.id) + " -> " +
                          detail::dot_quote(target.id) + " [label=" +
                          detail::dot_quote(a->type()) + "];");
    } else {
      const auto& s = std::get<Synthesis>(interaction);
      std::string model_node = s.model().id + " (model)";
      nodes.insert(model_node);
      for (const auto& agent : s.data_agents()) nodes.insert(agent.id);
      for (const auto& agent : s.info_agents()) nodes.insert(agent.id);
      for (const auto& agent : s.data_agents())
        edges.push_back("  " + detail::dot_quote(agent.id) + " -> " +
                        detail::dot_quote(model_node) + " [style=dashed, label=" +
                        detail::dot_quote(s.data_type()) + "];");
      for (const auto& agent : s.info_agents())
        edges.push_back("  " + detail::dot_quote(agent.id) + " -> " +
                        detail::dot_quote(model_node) + " [style=dashed, label=" +
                        detail::dot_quote(s.info_type()) + "];");
    }
  }

  std::string out = "digraph " + detail::dot_quote(x.name) + " {\n";
  for (const auto& node : nodes)
    out += "  " + detail::dot_quote(node) + ";\n";
  for (const auto& edge : edges) out += edge + "\n";
  out += "}\n";
  return out;
}

}  // namespace tm2
