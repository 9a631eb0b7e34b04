// Span-correspondence retrieval: find, find_by, and the overlap relation.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tm2/tm2.hpp"

using namespace tm2;

namespace {

Blackboard demo_board() {
  Blackboard bb("demo", "mem:data");
  // Tokens over "aa bb aa" style spans.
  bb.append("Tokenizer", {create_annotation(Token{"aa"}, 0, 2, "mem:data", "Tokenizer"),
                          create_annotation(Token{"bb"}, 3, 5, "mem:data", "Tokenizer"),
                          create_annotation(Token{"aa"}, 6, 8, "mem:data", "Tokenizer")});
  bb.append("Indexer", {create_annotation(int64_t{2}, 0, 2, "mem:data", "Indexer"),
                        create_annotation(int64_t{1}, 3, 5, "mem:data", "Indexer"),
                        create_annotation(int64_t{2}, 6, 8, "mem:data", "Indexer")});
  return bb;
}

// Brute-force oracle: every by-annotation overlapping any matched span.
std::vector<Annotation> oracle_find_by(const Blackboard& bb, const Value& value,
                                       const AgentId& in_agent,
                                       const AgentId& by_agent) {
  std::vector<Annotation> hits;
  for (const auto& candidate : bb.entries(by_agent)) {
    bool overlaps = false;
    for (const auto& q : bb.entries(in_agent)) {
      if (!(q.value == value)) continue;
      if (spans_overlap(q.start, q.end, candidate.start, candidate.end)) {
        overlaps = true;
        break;
      }
    }
    if (overlaps) hits.push_back(candidate);
  }
  std::sort(hits.begin(), hits.end(), annotation_less);
  return hits;
}

}  // namespace

TEST_CASE("spans_overlap is symmetric and handles zero width") {
  CHECK(spans_overlap(0, 5, 3, 8));
  CHECK(spans_overlap(3, 8, 0, 5));
  CHECK_FALSE(spans_overlap(0, 3, 3, 5));  // adjacent, not overlapping
  CHECK(spans_overlap(2, 2, 0, 5));        // zero-width inside
  CHECK(spans_overlap(0, 5, 2, 2));
  CHECK_FALSE(spans_overlap(5, 5, 0, 5));  // zero-width at the end boundary
  CHECK(spans_overlap(0, 0, 0, 1));        // zero-width at the start
}

TEST_CASE("find returns equal-valued annotations in order") {
  Blackboard bb = demo_board();
  auto registry = agents::default_registry();
  Retrieval r(bb, registry);
  auto hits = r.find(Value::of(Token{"aa"}), "Tokenizer");
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].start == 0);
  CHECK(hits[1].start == 6);
  CHECK(r.find(Value::of(Token{"zz"}), "Tokenizer").empty());
}

TEST_CASE("find rejects wrong query types and unknown agents") {
  Blackboard bb = demo_board();
  auto registry = agents::default_registry();
  Retrieval r(bb, registry);
  CHECK_THROWS_AS(r.find(Value::of(int64_t{2}), "Tokenizer"), TypeMismatch);
  CHECK_THROWS_AS(r.find(Value::of(Token{"aa"}), "NoSuchAgent"), UnknownAgent);
}

TEST_CASE("find_by projects matched spans onto another agent") {
  Blackboard bb = demo_board();
  auto registry = agents::default_registry();
  Retrieval r(bb, registry);
  // The paper's motivating query: where do the twice-occurring words sit?
  auto result = r.find_by(Value::of(int64_t{2}), "Indexer", "Tokenizer");
  CHECK(result.query_span_count == 2);
  REQUIRE(result.hits.size() == 2);
  CHECK(result.hits[0].value.text() == "aa");
  CHECK(result.hits[0].start == 0);
  CHECK(result.hits[1].start == 6);
}

TEST_CASE("find_by deduplicates hits across overlapping query spans") {
  Blackboard bb("x", "d");
  bb.append("A", {create_annotation(Token{"q"}, 0, 4, "d", "A"),
                  create_annotation(Token{"q"}, 2, 6, "d", "A")});
  bb.append("B", {create_annotation(Token{"hit"}, 3, 4, "d", "B")});
  AgentRegistry registry;
  registry.add("A", {"t", "String", "Token", nullptr, {}});
  registry.add("B", {"t", "String", "Token", nullptr, {}});
  Retrieval r(bb, registry);
  auto result = r.find_by(Value::of(Token{"q"}), "A", "B");
  CHECK(result.query_span_count == 2);
  CHECK(result.hits.size() == 1);
}

TEST_CASE("find_by matches the brute-force oracle on random blackboards") {
  std::mt19937 rng(11);
  AgentRegistry registry;
  registry.add("A", {"t", "String", "Integer", nullptr, {}});
  registry.add("B", {"t", "String", "Token", nullptr, {}});
  for (int round = 0; round < 60; ++round) {
    Blackboard bb("rnd", "d");
    std::vector<Annotation> as, bs;
    size_t na = rng() % 80, nb = rng() % 80;
    for (size_t i = 0; i < na; ++i) {
      Offset start = rng() % 50;
      as.push_back(create_annotation(int64_t(rng() % 3), start,
                                     start + rng() % 6, "d", "A"));
    }
    for (size_t i = 0; i < nb; ++i) {
      Offset start = rng() % 50;
      bs.push_back(create_annotation(Token{"w" + std::to_string(rng() % 10)},
                                     start, start + rng() % 6, "d", "B"));
    }
    bb.append("A", as);
    bb.append("B", bs);
    Retrieval r(bb, registry);
    Value q = Value::of(int64_t(rng() % 3));
    auto got = r.find_by(q, "A", "B").hits;
    auto want = oracle_find_by(bb, q, "A", "B");
    REQUIRE(got.size() == want.size());
    for (size_t i = 0; i < got.size(); ++i)
      CHECK(annotations_equal(got[i], want[i]));
  }
}
