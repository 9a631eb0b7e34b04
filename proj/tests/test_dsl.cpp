// Experiment DSL: lexing, parsing, printing, type checking, compilation,
// and configuration sweeps.

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "tm2/tm2.hpp"

using namespace tm2;

namespace {

const char* kNeProgram = R"(Experiment "NE" Data "input/Corpus" Out "output/Result" Import "tm2.agents"
/* First the corpus is tokenized: */
Corpus -> String -> Tokenizer.
/* Then the tokens are labeled and indexed: */
Tokenizer -> Token -> Gazetteer Indexer.
/* Finally the labels can be evaluated: */
Evaluate Gazetteer Against "input/Gold"
)";

std::string write_temp(const std::string& name, const std::string& content) {
  auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path.string();
}

}  // namespace

TEST_CASE("the NE program parses into its declared structure") {
  dsl::ExperimentAst ast = dsl::parse_experiment(kNeProgram);
  CHECK(ast.name == "NE");
  CHECK(ast.corpus == "input/Corpus");
  CHECK(ast.output == "output/Result");
  REQUIRE(ast.imports.size() == 1);
  CHECK(ast.imports[0] == "tm2.agents");
  REQUIRE(ast.interactions.size() == 2);
  CHECK(ast.interactions[0].source_agents ==
        std::vector<std::string>{"Corpus"});
  CHECK(ast.interactions[0].type_name == "String");
  CHECK(ast.interactions[0].target_agents ==
        std::vector<std::string>{"Tokenizer"});
  CHECK(ast.interactions[1].source_agents ==
        std::vector<std::string>{"Tokenizer"});
  CHECK(ast.interactions[1].type_name == "Token");
  CHECK(ast.interactions[1].target_agents ==
        std::vector<std::string>{"Gazetteer", "Indexer"});
  REQUIRE(ast.eval.has_value());
  CHECK(ast.eval->agents == std::vector<std::string>{"Gazetteer"});
  CHECK(ast.eval->gold_location == "input/Gold");
}

TEST_CASE("comments and whitespace are insignificant") {
  auto a = dsl::parse_experiment(
      "Experiment \"X\" Data \"d\" Out \"o\" Import \"tm2.agents\"\n"
      "// a line comment\n"
      "Corpus /* inline */ -> String -> Tokenizer.");
  auto b = dsl::parse_experiment(
      "Experiment \"X\" Data \"d\" Out \"o\" Import \"tm2.agents\" "
      "Corpus -> String -> Tokenizer.");
  CHECK(a == b);
}

TEST_CASE("string literals support escapes") {
  auto ast = dsl::parse_experiment(
      "Experiment \"a \\\"quoted\\\" name\" Data \"with\\\\slash\" Out \"o\" "
      "Import \"tm2.agents\" Corpus -> String -> Tokenizer.");
  CHECK(ast.name == "a \"quoted\" name");
  CHECK(ast.corpus == "with\\slash");
}

TEST_CASE("print and parse round-trip") {
  dsl::ExperimentAst ast = dsl::parse_experiment(kNeProgram);
  CHECK(dsl::parse_experiment(dsl::print_experiment(ast)) == ast);
}

TEST_CASE("syntax errors report line and column") {
  auto parse = [](const std::string& s) { return dsl::parse_experiment(s); };

  try {
    parse("Experiment \"X\" Data \"d\" Out \"o\" Import \"a\"\n"
          "Corpus -> -> Tokenizer.");
    FAIL("expected SyntaxError");
  } catch (const dsl::SyntaxError& e) {
    CHECK(e.diagnostic.line == 2);
    CHECK(e.diagnostic.column == 11);
  }

  CHECK_THROWS_AS(parse("Experiment 42"), dsl::SyntaxError);
  CHECK_THROWS_AS(parse("Experiment \"X\""), dsl::SyntaxError);
  CHECK_THROWS_AS(
      parse("Experiment \"X\" Data \"d\" Out \"o\" Import \"a\" "
            "Corpus -> String -> Tokenizer"),  // missing final '.'
      dsl::SyntaxError);
  CHECK_THROWS_AS(parse("Experiment \"unterminated"), dsl::SyntaxError);
  CHECK_THROWS_AS(
      parse("Experiment \"X\" Data \"d\" Out \"o\" Import \"a\" "
            "Corpus -> String -> Tokenizer. /* unterminated"),
      dsl::SyntaxError);
}

TEST_CASE("typecheck accepts the NE program against the catalog") {
  dsl::ExperimentAst ast = dsl::parse_experiment(kNeProgram);
  CHECK(dsl::typecheck(ast, agents::default_registry()).empty());
}

TEST_CASE("typecheck reports every problem with its interaction index") {
  auto registry = agents::default_registry();
  dsl::ExperimentAst ast = dsl::parse_experiment(
      "Experiment \"bad\" Data \"d\" Out \"o\" Import \"tm2.agents\"\n"
      "Corpus -> Token -> Tokenizer.\n"     // Corpus makes String, not Token
      "Nonexistent -> Token -> Gazetteer.\n"
      "Tokenizer -> Token -> Corpus.\n");   // Corpus consumes String
  auto diagnostics = dsl::typecheck(ast, registry);
  // Interaction 0 is doubly wrong: Corpus does not produce Token and
  // Tokenizer does not consume it.
  REQUIRE(diagnostics.size() == 4);
  CHECK(diagnostics[0].message.find("interaction 0") != std::string::npos);
  CHECK(diagnostics[1].message.find("interaction 0") != std::string::npos);
  CHECK(diagnostics[2].message.find("unresolved agent 'Nonexistent'") !=
        std::string::npos);
  CHECK(diagnostics[3].message.find("interaction 2") != std::string::npos);
}

TEST_CASE("imports gate agent visibility") {
  auto registry = agents::default_registry();
  dsl::ExperimentAst ast = dsl::parse_experiment(
      "Experiment \"ns\" Data \"d\" Out \"o\" Import \"some.other.package\"\n"
      "Corpus -> String -> Tokenizer.\n");
  auto diagnostics = dsl::typecheck(ast, registry);
  REQUIRE_FALSE(diagnostics.empty());
  CHECK(diagnostics[0].message.find("not imported") != std::string::npos);
}

TEST_CASE("compile produces a runnable experiment") {
  std::string corpus = write_temp("dsl_corpus.txt", "mining text and data");
  std::string program =
      "Experiment \"compiled\" Data \"" + corpus +
      "\" Out \"out/compiled\" Import \"tm2.agents\"\n"
      "Corpus -> String -> Tokenizer.\n"
      "Tokenizer -> Token -> Indexer.\n";
  auto registry = agents::default_registry();
  Experiment x = dsl::compile(dsl::parse_experiment(program), registry);
  CHECK(x.name == "compiled");
  REQUIRE(x.interactions.size() == 2);
  RunResult r = run_experiment(x, registry);
  CHECK(r.blackboard.entries("Tokenizer").size() == 4);
  CHECK(r.blackboard.entries("Indexer").size() == 4);
}

TEST_CASE("compile rejects ill-typed programs with all diagnostics") {
  auto registry = agents::default_registry();
  dsl::ExperimentAst ast = dsl::parse_experiment(
      "Experiment \"bad\" Data \"d\" Out \"o\" Import \"tm2.agents\"\n"
      "Corpus -> Token -> Tokenizer.\n");
  CHECK_THROWS_AS(dsl::compile(ast, registry), ValidationError);
}

TEST_CASE("compile config overrides reach agent instantiation") {
  std::string corpus = write_temp("dsl_cfg_corpus.txt", "and the and");
  std::string program = "Experiment \"cfg\" Data \"" + corpus +
                        "\" Out \"o\" Import \"tm2.agents\"\n"
                        "Corpus -> String -> Tokenizer.\n"
                        "Tokenizer -> Token -> Ambig.\n";
  auto registry = agents::default_registry();
  // Window override shrinks the context windows to one token per side.
  Experiment x = dsl::compile(dsl::parse_experiment(program), registry,
                              {{"window", "1"}});
  RunResult r = run_experiment(x, registry);
  REQUIRE_FALSE(r.blackboard.entries("Ambig").empty());
  for (const auto& a : r.blackboard.entries("Ambig")) {
    const Context& c = a.value.get<Context>();
    CHECK(c.left.size() <= 1);
    CHECK(c.right.size() <= 1);
  }
}

TEST_CASE("expand_sweep is the axis-major cartesian product") {
  dsl::SweepSpec spec;
  spec.axes = {{"kind", {"word", "3-gram"}}, {"window", {"2", "4", "8"}}};
  spec.make = [](const AgentConfig& config) {
    Experiment x;
    x.name = "sweep";
    x.output = "out/sweep";
    x.corpus = config.at("kind") + "/" + config.at("window");
    return x;
  };
  auto xs = dsl::expand_sweep(spec);
  REQUIRE(xs.size() == 6);
  CHECK(xs[0].corpus == "word/2");
  CHECK(xs[1].corpus == "word/4");
  CHECK(xs[2].corpus == "word/8");
  CHECK(xs[3].corpus == "3-gram/2");
  CHECK(xs[5].corpus == "3-gram/8");
  // Names and outputs stay distinguishable.
  CHECK(xs[0].name == "sweep [kind=word,window=2]");
  CHECK(xs[0].output != xs[1].output);
}

TEST_CASE("expand_sweep rejects empty axes") {
  dsl::SweepSpec spec;
  spec.axes = {{"kind", {}}};
  spec.make = [](const AgentConfig&) { return Experiment{}; };
  CHECK_THROWS_AS(dsl::expand_sweep(spec), EmptyAxis);
}
