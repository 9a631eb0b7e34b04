#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tm2/annotation.hpp"
#include "tm2/errors.hpp"
#include "tm2/value.hpp"

namespace tm2 {

using AgentConfig = std::map<std::string, std::string>;

// A processing unit with declared input and output annotation types. The
// process function sees only its input list and its own config/resources;
// it must emit annotations authored by this agent with payloads of the
// declared output type.
struct AgentSpec {
  AgentId id;
  TypeTag input_type;
  TypeTag output_type;
  AgentConfig config;
  std::function<std::vector<Annotation>(const std::vector<Annotation>&)>
      process;
};

using AgentFactory = std::function<AgentSpec(const AgentId&, const AgentConfig&)>;

// Maps agent names to factories. Each entry lives in a catalog namespace
// (the DSL's Import targets) and declares its types up front so pipelines
// can be checked without instantiating anything.
class AgentRegistry {
 public:
  struct Entry {
    std::string ns;
    TypeTag input_type;
    TypeTag output_type;
    AgentFactory factory;
    AgentConfig default_config;
  };

  void add(const AgentId& name, Entry entry) { entries_[name] = std::move(entry); }

  bool has(const AgentId& name) const { return entries_.count(name) > 0; }

  const Entry& entry(const AgentId& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end()) throw UnknownAgent("unknown agent: " + name);
    return it->second;
  }

  AgentSpec instantiate(const AgentId& name,
                        const AgentConfig& overrides = {}) const {
    const Entry& e = entry(name);
    AgentConfig config = e.default_config;
    for (const auto& [k, v] : overrides) config[k] = v;
    return e.factory(name, config);
  }

  std::vector<AgentId> names() const {
    std::vector<AgentId> out;
    for (const auto& [name, e] : entries_) out.push_back(name);
    return out;
  }

 private:
  std::map<AgentId, Entry> entries_;
};

}  // namespace tm2
