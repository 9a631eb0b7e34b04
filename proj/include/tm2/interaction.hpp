#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tm2/agent.hpp"
#include "tm2/errors.hpp"
#include "tm2/evaluation.hpp"

namespace tm2 {

using ModelId = std::string;

// The trained artifact of a synthesis. classify maps a payload of the data
// type to a payload of the info type (possibly the designated unknown value).
struct TrainedModel {
  ModelId id;
  TypeTag data_type;
  TypeTag info_type;
  std::string description;
  std::function<Value(const Value&)> classify;
  // Set when the model is an evaluation (results vs gold synthesized into
  // metrics).
  std::optional<EvaluationResult> metrics;
};

// A trainable model target for a synthesis.
struct ModelSpec {
  ModelId id;
  TypeTag data_type;
  TypeTag info_type;
  std::function<TrainedModel(const std::vector<Annotation>&,
                             const std::vector<Annotation>&)>
      train;
};

// A type-parameterized edge set: sources' annotations of the exchanged type
// are delivered to every target. Builder methods return a new value; the
// receiver is never mutated.
class Analysis {
 public:
  explicit Analysis(TypeTag type) : type_(std::move(type)) {}

  const TypeTag& type() const { return type_; }
  const std::vector<AgentSpec>& sources() const { return sources_; }
  const std::vector<AgentSpec>& targets() const { return targets_; }

  Analysis with_source(const AgentSpec& agent) const {
    if (agent.output_type != type_)
      throw TypeMismatch("analysis over " + type_ + ": source " + agent.id +
                         " produces " + agent.output_type);
    Analysis next = *this;
    if (!contains(next.sources_, agent.id)) next.sources_.push_back(agent);
    return next;
  }

  Analysis with_target(const AgentSpec& agent) const {
    if (agent.input_type != type_)
      throw TypeMismatch("analysis over " + type_ + ": target " + agent.id +
                         " consumes " + agent.input_type);
    Analysis next = *this;
    if (!contains(next.targets_, agent.id)) next.targets_.push_back(agent);
    return next;
  }

 private:
  static bool contains(const std::vector<AgentSpec>& agents,
                       const AgentId& id) {
    return std::any_of(agents.begin(), agents.end(),
                       [&](const AgentSpec& a) { return a.id == id; });
  }

  TypeTag type_;
  std::vector<AgentSpec> sources_;
  std::vector<AgentSpec> targets_;
};

// A converging interaction: two annotation streams (data, info) train a
// model. Blackboard entries are left untouched; the model lives beside them.
class Synthesis {
 public:
  Synthesis(TypeTag data_type, TypeTag info_type, ModelSpec model)
      : data_type_(std::move(data_type)),
        info_type_(std::move(info_type)),
        model_(std::move(model)) {}

  const TypeTag& data_type() const { return data_type_; }
  const TypeTag& info_type() const { return info_type_; }
  const ModelSpec& model() const { return model_; }
  const std::vector<AgentSpec>& data_agents() const { return data_agents_; }
  const std::vector<AgentSpec>& info_agents() const { return info_agents_; }

  Synthesis with_data(const AgentSpec& agent) const {
    if (agent.output_type != data_type_)
      throw TypeMismatch("synthesis of (" + data_type_ + ", " + info_type_ +
                         "): data agent " + agent.id + " produces " +
                         agent.output_type);
    Synthesis next = *this;
    next.data_agents_.push_back(agent);
    return next;
  }

  Synthesis with_info(const AgentSpec& agent) const {
    if (agent.output_type != info_type_)
      throw TypeMismatch("synthesis of (" + data_type_ + ", " + info_type_ +
                         "): info agent " + agent.id + " produces " +
                         agent.output_type);
    Synthesis next = *this;
    next.info_agents_.push_back(agent);
    return next;
  }

 private:
  TypeTag data_type_;
  TypeTag info_type_;
  ModelSpec model_;
  std::vector<AgentSpec> data_agents_;
  std::vector<AgentSpec> info_agents_;
};

using Interaction = std::variant<Analysis, Synthesis>;

}  // namespace tm2
