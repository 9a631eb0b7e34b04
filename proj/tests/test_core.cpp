// Core data model and engine: values, annotations, blackboard, interactions,
// evaluation, experiment execution.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "tm2/tm2.hpp"

using namespace tm2;

namespace {

AgentSpec passthrough(const AgentId& id) {
  AgentSpec spec;
  spec.id = id;
  spec.input_type = "String";
  spec.output_type = "String";
  spec.process = [id](const std::vector<Annotation>& input) {
    std::vector<Annotation> out;
    for (const auto& a : input)
      out.push_back(Annotation{a.value, a.start, a.end, a.data_ref, id});
    return out;
  };
  return spec;
}

AgentSpec upper_tokens(const AgentId& id) {
  AgentSpec spec = agents::make_tokenizer(id, {});
  return spec;
}

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("values carry their registered type") {
  Value v = Value::of(std::string("hello"));
  CHECK(v.type() == "String");
  CHECK(v.text() == "hello");
  CHECK(v.get<std::string>() == "hello");

  Value i = Value::of(int64_t{42});
  CHECK(i.type() == "Integer");
  CHECK(i.text() == "42");

  CHECK(Value::parse("Integer", "42") == i);
  CHECK_THROWS_AS(Value::parse("Integer", "nope"), UnparseableValue);
  CHECK_THROWS_AS(Value::parse("NoSuchType", "x"), UnknownType);
}

TEST_CASE("value comparison is total across types") {
  Value a = Value::of(std::string("a"));
  Value b = Value::of(std::string("b"));
  CHECK(a.compare(b) < 0);
  CHECK(b.compare(a) > 0);
  CHECK(a.compare(a) == 0);
  // Cross-type order falls back to the type tag.
  Value i = Value::of(int64_t{1});
  CHECK(a.compare(i) != 0);
}

TEST_CASE("unregistered payloads are rejected") {
  struct Unregistered {};
  CHECK_THROWS_AS(Value::of(Unregistered{}), UnknownType);
}

TEST_CASE("create_annotation validates the span") {
  auto a = create_annotation(Token{"hi"}, 0, 2, "data", "t");
  CHECK(a.start == 0);
  CHECK(a.end == 2);
  CHECK(a.value.get<Token>().form == "hi");

  CHECK_THROWS_AS(create_annotation(Token{"x"}, 3, 2, "data", "t"),
                  InvalidSpan);
  CHECK_THROWS_AS(create_annotation(Token{"x"}, -1, 2, "data", "t"),
                  InvalidSpan);
  // Zero-width spans are allowed.
  CHECK_NOTHROW(create_annotation(Token{"x"}, 2, 2, "data", "t"));
}

TEST_CASE("annotation order is (start, end, text)") {
  auto a = create_annotation(Token{"b"}, 0, 2, "d", "t");
  auto b = create_annotation(Token{"a"}, 0, 3, "d", "t");
  auto c = create_annotation(Token{"a"}, 1, 2, "d", "t");
  CHECK(annotation_less(a, b));
  CHECK(annotation_less(b, c));
  auto a2 = create_annotation(Token{"a"}, 0, 2, "d", "t");
  CHECK(annotation_less(a2, a));
}

TEST_CASE("blackboard keeps per-agent lists sorted and deduplicated") {
  Blackboard bb("x", "data");
  bb.append("t", {create_annotation(Token{"b"}, 3, 4, "data", "t"),
                  create_annotation(Token{"a"}, 0, 1, "data", "t"),
                  create_annotation(Token{"a"}, 0, 1, "data", "t")});
  REQUIRE(bb.entries("t").size() == 2);
  CHECK(bb.entries("t")[0].value.text() == "a");
  CHECK(bb.entries("t")[1].value.text() == "b");

  // Appending again never disturbs prior entries; duplicates stay out.
  bb.append("t", {create_annotation(Token{"a"}, 0, 1, "data", "t")});
  CHECK(bb.entries("t").size() == 2);
  CHECK(bb.annotation_count() == 2);
}

TEST_CASE("blackboard dedup catches equal values separated in a key run") {
  // Two Sense payloads share canonical text (the label) but differ in
  // lemma; an exact duplicate of the first may land after the second.
  Blackboard bb("x", "d");
  bb.append("s", {create_annotation(Sense{"l", "m1", "i"}, 0, 1, "d", "s"),
                  create_annotation(Sense{"l", "m2", "i"}, 0, 1, "d", "s"),
                  create_annotation(Sense{"l", "m1", "i"}, 0, 1, "d", "s")});
  CHECK(bb.entries("s").size() == 2);
}

TEST_CASE("analysis builder enforces types and returns new values") {
  Analysis a("String");
  Analysis b = a.with_source(passthrough("p"));
  CHECK(a.sources().empty());
  CHECK(b.sources().size() == 1);
  CHECK_THROWS_AS(a.with_source(upper_tokens("t")), TypeMismatch);
  CHECK_THROWS_AS(a.with_target(agents::make_gazetteer(
                      "g", {{"list", write_temp("wl.properties", "a=b\n")}})),
                  TypeMismatch);
  // Duplicate sources collapse by id.
  CHECK(b.with_source(passthrough("p")).sources().size() == 1);
}

TEST_CASE("synthesis builder enforces both stream types") {
  ModelSpec model = agents::associative_model_spec("m", "Token", "Sense");
  Synthesis s("Token", "Sense", model);
  CHECK_NOTHROW(s.with_data(upper_tokens("t")));
  CHECK_THROWS_AS(s.with_data(passthrough("p")), TypeMismatch);
  CHECK_THROWS_AS(s.with_info(upper_tokens("t")), TypeMismatch);
}

TEST_CASE("evaluate_generic on identical lists is the identity") {
  std::vector<Annotation> list = {
      create_annotation(Token{"a"}, 0, 1, "d", "t"),
      create_annotation(Token{"b"}, 2, 3, "d", "t")};
  auto e = evaluate_generic(list, list);
  CHECK(e.precision == 1.0);
  CHECK(e.recall == 1.0);
  CHECK(e.f1 == 1.0);
  CHECK(e.accuracy == 1.0);
}

TEST_CASE("evaluate_generic counts by span and text") {
  std::vector<Annotation> results = {
      create_annotation(Token{"a"}, 0, 1, "d", "t"),
      create_annotation(Token{"x"}, 2, 3, "d", "t")};
  std::vector<Annotation> gold = {
      create_annotation(Token{"a"}, 0, 1, "d", "g"),
      create_annotation(Token{"b"}, 2, 3, "d", "g"),
      create_annotation(Token{"c"}, 4, 5, "d", "g")};
  auto e = evaluate_generic(results, gold);
  CHECK(e.true_positive == 1);
  CHECK(e.false_positive == 1);
  CHECK(e.false_negative == 2);
  CHECK(e.precision == 0.5);
  CHECK(e.recall == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("evaluate_generic rejects mismatched data references") {
  std::vector<Annotation> results = {
      create_annotation(Token{"a"}, 0, 1, "d1", "t")};
  std::vector<Annotation> gold = {
      create_annotation(Token{"a"}, 0, 1, "d2", "g")};
  CHECK_THROWS_AS(evaluate_generic(results, gold), DataMismatch);
}

TEST_CASE("evaluate_generic empty-denominator convention") {
  auto e = evaluate_generic({}, {});
  CHECK(e.precision == 0.0);
  CHECK(e.recall == 0.0);
  CHECK(e.f1 == 0.0);
}

TEST_CASE("experiment validation collects all problems") {
  Experiment x;
  x.name = "bad";
  x.corpus = "data/corpus.txt";
  AgentSpec p = passthrough("p");
  Analysis loop = Analysis("String").with_source(p).with_target(p);
  x.interactions.emplace_back(loop);
  AgentSpec p2 = p;
  p2.output_type = "Token";  // same id, different declared types
  x.interactions.emplace_back(Analysis("Token").with_source(p2).with_target(
      agents::make_gazetteer("g",
                             {{"list", write_temp("wl2.properties", "a=b\n")}})));
  auto problems = validate(x);
  REQUIRE(problems.size() >= 2);
}

TEST_CASE("run_experiment seeds the corpus and runs interactions in order") {
  std::string corpus = write_temp("corpus_core.txt", "one two three");
  Experiment x;
  x.name = "core";
  x.corpus = corpus;
  x.interactions.emplace_back(Analysis("String")
                                  .with_source(agents::make_corpus("Corpus", {}))
                                  .with_target(upper_tokens("Tokenizer")));
  RunResult r = run_experiment(x, agents::default_registry());
  CHECK(r.blackboard.has(kSeedAgent));
  CHECK(r.blackboard.entries("Tokenizer").size() == 3);
  REQUIRE(r.report.steps.size() == 1);
  CHECK(r.report.steps[0].kind == "analysis");
}

TEST_CASE("parallel and sequential analysis targets agree") {
  std::string corpus = write_temp("corpus_par.txt",
                                  "alpha beta gamma alpha beta alpha");
  auto build = [&] {
    Experiment x;
    x.name = "par";
    x.corpus = corpus;
    x.interactions.emplace_back(
        Analysis("String")
            .with_source(agents::make_corpus("Corpus", {}))
            .with_target(upper_tokens("Tokenizer")));
    x.interactions.emplace_back(
        Analysis("Token")
            .with_source(upper_tokens("Tokenizer"))
            .with_target(agents::make_indexer("Indexer", {}))
            .with_target(agents::make_counter("Counter", {})));
    return x;
  };
  RunOptions seq;
  seq.parallel = false;
  RunResult a = run_experiment(build(), agents::default_registry());
  RunResult b = run_experiment(build(), agents::default_registry(), seq);
  CHECK(xml_to_string(a.blackboard) == xml_to_string(b.blackboard));
}

TEST_CASE("agent failures carry the interaction index") {
  std::string corpus = write_temp("corpus_fail.txt", "x");
  AgentSpec broken;
  broken.id = "Broken";
  broken.input_type = "String";
  broken.output_type = "String";
  broken.process =
      [](const std::vector<Annotation>&) -> std::vector<Annotation> {
    throw std::runtime_error("boom");
  };
  Experiment x;
  x.name = "failing";
  x.corpus = corpus;
  x.interactions.emplace_back(Analysis("String")
                                  .with_source(agents::make_corpus("Corpus", {}))
                                  .with_target(broken));
  try {
    run_experiment(x, agents::default_registry());
    FAIL("expected AgentFailure");
  } catch (const AgentFailure& e) {
    std::string message = e.what();
    CHECK(message.find("interaction 0") != std::string::npos);
    CHECK(message.find("boom") != std::string::npos);
  }
}

TEST_CASE("agents must author their own declared output type") {
  std::string corpus = write_temp("corpus_auth.txt", "x");
  AgentSpec impostor;
  impostor.id = "Impostor";
  impostor.input_type = "String";
  impostor.output_type = "String";
  impostor.process = [](const std::vector<Annotation>& input) {
    std::vector<Annotation> out;
    for (const auto& a : input)
      out.push_back(Annotation{a.value, a.start, a.end, a.data_ref, "other"});
    return out;
  };
  Experiment x;
  x.name = "impostor";
  x.corpus = corpus;
  x.interactions.emplace_back(Analysis("String")
                                  .with_source(agents::make_corpus("Corpus", {}))
                                  .with_target(impostor));
  CHECK_THROWS_AS(run_experiment(x, agents::default_registry()), AgentFailure);
}

TEST_CASE("synthesis trains a model and records metrics-bearing evaluations") {
  std::string corpus = write_temp("corpus_syn.txt", "a b a c a b");
  Experiment x;
  x.name = "syn";
  x.corpus = corpus;
  AgentSpec tok = upper_tokens("Tokenizer");
  x.interactions.emplace_back(Analysis("String")
                                  .with_source(agents::make_corpus("Corpus", {}))
                                  .with_target(tok));
  x.interactions.emplace_back(Analysis("Token").with_source(tok).with_target(
      agents::make_counter("Counter", {})));
  // Word -> Frequency model: associate token payloads with the frequency
  // found at the same span.
  x.interactions.emplace_back(
      Synthesis("Token", "Frequency",
                agents::associative_model_spec("word2freq", "Token",
                                               "Frequency"))
          .with_data(tok)
          .with_info(agents::make_counter("Counter", {})));
  RunResult r = run_experiment(x, agents::default_registry());
  REQUIRE(r.models.size() == 1);
  CHECK(r.models[0].classify(Value::of(Token{"a"})).text() == "a:3");
  CHECK(r.models[0].classify(Value::of(Token{"b"})).text() == "b:2");
  REQUIRE(r.report.steps.size() == 3);
  CHECK(r.report.steps[2].kind == "synthesis");
}

TEST_CASE("missing synthesis inputs fail fast") {
  std::string corpus = write_temp("corpus_missing.txt", "a b");
  Experiment x;
  x.name = "missing";
  x.corpus = corpus;
  x.interactions.emplace_back(
      Synthesis("Token", "Frequency",
                agents::associative_model_spec("m", "Token", "Frequency"))
          .with_data(upper_tokens("Tokenizer"))
          .with_info(agents::make_counter("Counter", {})));
  CHECK_THROWS_AS(run_experiment(x, agents::default_registry()), AgentFailure);
}

TEST_CASE("batch_run keeps input order and isolates failures") {
  std::string corpus = write_temp("corpus_batch.txt", "a b c");
  auto make = [&](const std::string& name, const std::string& data) {
    Experiment x;
    x.name = name;
    x.corpus = data;
    x.output = "out/" + name;
    x.interactions.emplace_back(
        Analysis("String")
            .with_source(agents::make_corpus("Corpus", {}))
            .with_target(upper_tokens("Tokenizer")));
    return x;
  };
  std::vector<Experiment> xs = {make("one", corpus),
                                make("two", "/nonexistent/corpus"),
                                make("three", corpus)};
  auto results = batch_run(xs, agents::default_registry());
  REQUIRE(results.size() == 3);
  CHECK(results[0].result.has_value());
  CHECK_FALSE(results[1].result.has_value());
  CHECK_FALSE(results[1].error.empty());
  CHECK(results[2].result.has_value());
  CHECK(results[0].result->blackboard.experiment_name() == "one");
  CHECK(results[2].result->blackboard.experiment_name() == "three");
}

TEST_CASE("batch_run rejects duplicate output paths up front") {
  Experiment a, b;
  a.name = "a";
  b.name = "b";
  a.output = b.output = "out/same";
  CHECK_THROWS_AS(batch_run({a, b}, agents::default_registry()),
                  DuplicateOutputPath);
}

TEST_CASE("resource resolver handles file URIs and bare paths") {
  std::string path = write_temp("resource.txt", "payload");
  const ResourceResolver& r = default_resolver();
  CHECK(r.fetch(path) == "payload");
  CHECK(r.fetch("file://" + path) == "payload");
  CHECK(r.fetch("file:" + path) == "payload");
  CHECK_THROWS_AS(r.fetch("/nonexistent/file"), ResourceError);
}
