#pragma once

#include <string>
#include <vector>

#include "tm2/agent.hpp"
#include "tm2/detail/text.hpp"
#include "tm2/errors.hpp"
#include "tm2/payloads.hpp"

namespace tm2::agents {

inline constexpr size_t kDefaultFeatureDim = 1024;
inline constexpr size_t kDefaultContextWindow = 4;

// Raw textual features of a context under one representation kind. For
// "word" the surface forms, for "length" the token lengths, for "3-gram" /
// "7-gram" all character k-grams of the forms (shorter forms contribute the
// whole string).
inline std::vector<std::string> raw_features(const Context& context,
                                             const std::string& kind,
                                             size_t window) {
  std::vector<std::string> tokens;
  size_t left_from = context.left.size() > window
                         ? context.left.size() - window
                         : 0;
  for (size_t i = left_from; i < context.left.size(); ++i)
    tokens.push_back(context.left[i]);
  for (size_t i = 0; i < context.right.size() && i < window; ++i)
    tokens.push_back(context.right[i]);

  std::vector<std::string> features;
  if (kind == "word") {
    features = tokens;
  } else if (kind == "length") {
    for (const auto& t : tokens)
      features.push_back("len=" +
                         std::to_string(detail::decode_utf8(t).size()));
  } else if (kind == "3-gram" || kind == "7-gram") {
    size_t k = kind == "3-gram" ? 3 : 7;
    for (const auto& t : tokens) {
      auto cps = detail::decode_utf8(t);
      if (cps.size() <= k) {
        features.push_back(t);
        continue;
      }
      for (size_t i = 0; i + k <= cps.size(); ++i)
        features.push_back(detail::encode_utf8(cps, i, i + k));
    }
  } else {
    throw InvalidConfig("unknown feature kind: " + kind);
  }
  return features;
}

// Folds raw features into a fixed-dimension count vector: FNV-1a 64-bit of
// the feature text, index = hash mod dim, value = occurrence count. The sum
// of the vector always equals the raw feature count.
inline FeatureVector fold_features(const std::vector<std::string>& features,
                                   size_t dim, const std::string& lemma,
                                   const std::string& instance_id) {
  FeatureVector v;
  v.values.assign(dim, 0.0);
  v.lemma = lemma;
  v.instance_id = instance_id;
  for (const auto& f : features)
    v.values[detail::fnv1a64(f) % dim] += 1.0;
  return v;
}

// Context -> FeatureVector agent. Config keys: kind (word | length |
// 3-gram | 7-gram), window (tokens per side), dim.
inline AgentSpec make_features(const AgentId& id, const AgentConfig& config) {
  auto get = [&](const char* key, const std::string& fallback) {
    auto it = config.find(key);
    return it == config.end() ? fallback : it->second;
  };
  std::string kind = get("kind", "3-gram");
  size_t window = std::stoul(get("window", std::to_string(kDefaultContextWindow)));
  size_t dim = std::stoul(get("dim", std::to_string(kDefaultFeatureDim)));
  if (window < 1) throw InvalidConfig("feature window must be >= 1");
  if (dim < 2) throw InvalidConfig("feature dim must be >= 2");
  if (kind != "word" && kind != "length" && kind != "3-gram" &&
      kind != "7-gram")
    throw InvalidConfig("unknown feature kind: " + kind);

  AgentSpec spec;
  spec.id = id;
  spec.input_type = "Context";
  spec.output_type = "FeatureVector";
  spec.process = [id, kind, window, dim](const std::vector<Annotation>& input) {
    std::vector<Annotation> out;
    for (const auto& a : input) {
      const Context& c = a.value.get<Context>();
      FeatureVector v = fold_features(raw_features(c, kind, window), dim,
                                      c.lemma, c.instance_id);
      out.push_back(Annotation{Value::of(std::move(v)), a.start, a.end,
                               a.data_ref, id});
    }
    return out;
  };
  return spec;
}

}  // namespace tm2::agents
