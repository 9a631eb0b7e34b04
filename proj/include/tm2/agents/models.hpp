#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tm2/errors.hpp"
#include "tm2/evaluation.hpp"
#include "tm2/interaction.hpp"
#include "tm2/payloads.hpp"

namespace tm2::agents {

// A model that associates data payloads with the info payloads found at the
// same span, e.g. words with their frequencies. Lookup is by canonical value
// text; unseen payloads map to the designated unknown value when the info
// type is Sense, else to the smallest seen info value.
inline ModelSpec associative_model_spec(ModelId id, TypeTag data_type,
                                        TypeTag info_type) {
  ModelSpec spec;
  spec.id = std::move(id);
  spec.data_type = std::move(data_type);
  spec.info_type = std::move(info_type);
  spec.train = [spec](const std::vector<Annotation>& data,
                      const std::vector<Annotation>& info) {
    auto mapping = std::make_shared<std::map<std::string, Value>>();
    std::map<std::pair<Offset, Offset>, Value> info_by_span;
    for (const auto& a : info) info_by_span.insert({{a.start, a.end}, a.value});
    for (const auto& a : data) {
      auto it = info_by_span.find({a.start, a.end});
      if (it != info_by_span.end())
        mapping->emplace(a.value.text(), it->second);
    }
    Value fallback;
    if (spec.info_type == "Sense")
      fallback = Value::of(Sense{kUnknownSense, "", ""});
    else if (!mapping->empty())
      fallback = mapping->begin()->second;

    TrainedModel model;
    model.id = spec.id;
    model.data_type = spec.data_type;
    model.info_type = spec.info_type;
    model.description = spec.id + " (" + spec.data_type + " -> " +
                        spec.info_type + ", " +
                        std::to_string(mapping->size()) + " associations)";
    model.classify = [mapping, fallback](const Value& v) {
      auto it = mapping->find(v.text());
      return it != mapping->end() ? it->second : fallback;
    };
    return model;
  };
  return spec;
}

// Evaluation as a synthesis: results (data) and gold (info) are compared
// generically by span and canonical value text; the metrics travel with the
// trained model.
inline ModelSpec evaluation_model_spec(ModelId id, TypeTag data_type,
                                       TypeTag info_type) {
  ModelSpec base = associative_model_spec(id, data_type, info_type);
  ModelSpec spec = base;
  spec.train = [base](const std::vector<Annotation>& data,
                      const std::vector<Annotation>& info) {
    TrainedModel model = base.train(data, info);
    model.metrics = evaluate_generic(data, info);
    model.description = base.id + " (generic evaluation)";
    return model;
  };
  return spec;
}

}  // namespace tm2::agents
