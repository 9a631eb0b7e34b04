#pragma once

#include <cstddef>
#include <string>

#include "tm2/errors.hpp"
#include "tm2/value.hpp"

namespace tm2 {

using AgentId = std::string;
using Offset = std::size_t;

// The interchange unit: a typed, positioned metadatum over a data region,
// authored by an agent. Offsets count Unicode scalar values, start inclusive,
// end exclusive.
struct Annotation {
  Value value;
  Offset start = 0;
  Offset end = 0;
  std::string data_ref;
  AgentId author;
};

inline Annotation create_annotation(Value value, long long start, long long end,
                                    std::string data_ref, AgentId author) {
  if (start < 0 || end < 0 || start > end)
    throw InvalidSpan("invalid span [" + std::to_string(start) + ", " +
                      std::to_string(end) + ")");
  if (!TypeRegistry::instance().known(value.type()))
    throw UnknownType("unregistered payload type: " + value.type());
  return Annotation{std::move(value), static_cast<Offset>(start),
                    static_cast<Offset>(end), std::move(data_ref),
                    std::move(author)};
}

template <typename T>
Annotation create_annotation(T payload, long long start, long long end,
                             std::string data_ref, AgentId author) {
  return create_annotation(Value::of(std::move(payload)), start, end,
                           std::move(data_ref), std::move(author));
}

// Lexicographic by (start, end, canonical value text). A total order on
// annotations of any mix of payload types.
inline int compare_annotations(const Annotation& a, const Annotation& b) {
  if (a.start != b.start) return a.start < b.start ? -1 : 1;
  if (a.end != b.end) return a.end < b.end ? -1 : 1;
  std::string at = a.value.text(), bt = b.value.text();
  if (at != bt) return at < bt ? -1 : 1;
  return 0;
}

inline bool annotation_less(const Annotation& a, const Annotation& b) {
  return compare_annotations(a, b) < 0;
}

// Equality by (author, start, end, value).
inline bool annotations_equal(const Annotation& a, const Annotation& b) {
  return a.author == b.author && a.start == b.start && a.end == b.end &&
         a.value == b.value;
}

}  // namespace tm2
