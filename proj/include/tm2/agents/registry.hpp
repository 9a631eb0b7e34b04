#pragma once

#include <string>

#include "tm2/agent.hpp"
#include "tm2/agents/catalog.hpp"
#include "tm2/agents/classifier.hpp"
#include "tm2/agents/features.hpp"
#include "tm2/resource.hpp"

namespace tm2::agents {

inline constexpr const char* kCatalogNamespace = "tm2.agents";

struct CatalogOptions {
  std::string wordlist_uri = "data/wordlist.properties";
  std::string pseudo_w1 = "and";
  std::string pseudo_w2 = "the";
  const ResourceResolver* resolver = nullptr;
};

// The reference agent catalog under the DSL namespace "tm2.agents".
// Configured variants (pseudo-word pair, feature kind) are separate names;
// the DSL has no constructor-argument syntax.
inline AgentRegistry default_registry(const CatalogOptions& options = {}) {
  const ResourceResolver* resolver =
      options.resolver ? options.resolver : &default_resolver();
  AgentRegistry registry;

  auto add = [&](const AgentId& name, TypeTag in, TypeTag out,
                 AgentFactory factory, AgentConfig defaults = {}) {
    registry.add(name, {kCatalogNamespace, std::move(in), std::move(out),
                        std::move(factory), std::move(defaults)});
  };

  add("Corpus", "String", "String", make_corpus);
  add("Tokenizer", "String", "Token", make_tokenizer);
  add("Gazetteer", "Token", "Sense",
      [resolver](const AgentId& id, const AgentConfig& config) {
        return make_gazetteer(id, config, *resolver);
      },
      {{"list", options.wordlist_uri}});
  add("Indexer", "Token", "Integer", make_indexer);
  add("Counter", "Token", "Frequency", make_counter);
  add("Ambig", "Token", "Context", make_pseudo_ambig,
      {{"w1", options.pseudo_w1},
       {"w2", options.pseudo_w2},
       {"mode", "ambiguous"}});
  add("Gold", "Token", "Sense", make_pseudo_ambig,
      {{"w1", options.pseudo_w1}, {"w2", options.pseudo_w2}, {"mode", "gold"}});
  add("Features", "Context", "FeatureVector", make_features);
  // Registered for type resolution when reading saved experiments; training
  // happens through a synthesis built programmatically.
  add("Classifier", "FeatureVector", "Sense",
      [](const AgentId& id, const AgentConfig& config) {
        auto it = config.find("algorithm");
        ClassifierAgent agent(id, it == config.end() ? "naive-bayes"
                                                     : it->second);
        return agent.agent_spec();
      });

  return registry;
}

}  // namespace tm2::agents
