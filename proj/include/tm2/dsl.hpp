#pragma once

#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tm2/agent.hpp"
#include "tm2/errors.hpp"
#include "tm2/experiment.hpp"
#include "tm2/interaction.hpp"

namespace tm2::dsl {

struct InteractionAst {
  std::vector<std::string> source_agents;
  std::string type_name;
  std::vector<std::string> target_agents;
  size_t line = 0;  // for diagnostics

  bool operator==(const InteractionAst& o) const {
    return source_agents == o.source_agents && type_name == o.type_name &&
           target_agents == o.target_agents;
  }
};

struct EvalAst {
  std::vector<std::string> agents;
  std::string gold_location;
  bool operator==(const EvalAst&) const = default;
};

struct ExperimentAst {
  std::string name;
  std::string corpus;
  std::string output;
  std::vector<std::string> imports;
  std::vector<InteractionAst> interactions;
  std::optional<EvalAst> eval;

  bool operator==(const ExperimentAst& o) const {
    return name == o.name && corpus == o.corpus && output == o.output &&
           imports == o.imports && interactions == o.interactions &&
           eval == o.eval;
  }
};

struct Diagnostic {
  size_t line = 0;
  size_t column = 0;
  std::string severity = "error";
  std::string message;

  std::string format(const std::string& file = "<input>") const {
    return file + ":" + std::to_string(line) + ":" + std::to_string(column) +
           ": " + severity + ": " + message;
  }
};

struct SyntaxError : Error {
  Diagnostic diagnostic;
  explicit SyntaxError(Diagnostic d)
      : Error(d.format()), diagnostic(std::move(d)) {}
};

namespace detail {

enum class TokKind { Keyword, Ident, String, Arrow, Dot, End };

struct Tok {
  TokKind kind;
  std::string text;
  size_t line;
  size_t column;
};

inline const std::set<std::string> kKeywords = {
    "Experiment", "Data", "Out", "Import", "Evaluate", "Against"};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Tok> run() {
    std::vector<Tok> toks;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        toks.push_back({TokKind::End, "", line_, column()});
        return toks;
      }
      size_t line = line_, col = column();
      char c = src_[pos_];
      if (c == '"') {
        toks.push_back({TokKind::String, lex_string(), line, col});
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        pos_ += 2;
        toks.push_back({TokKind::Arrow, "->", line, col});
      } else if (c == '.') {
        ++pos_;
        toks.push_back({TokKind::Dot, ".", line, col});
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        size_t begin = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_'))
          ++pos_;
        std::string text = src_.substr(begin, pos_ - begin);
        toks.push_back({kKeywords.count(text) ? TokKind::Keyword
                                              : TokKind::Ident,
                        text, line, col});
      } else {
        throw SyntaxError(
            {line, col, "error",
             std::string("unexpected character '") + c + "'"});
      }
    }
  }

 private:
  size_t column() const { return pos_ - line_start_ + 1; }

  void advance_line() {
    ++line_;
    line_start_ = pos_;
  }

  void skip_trivia() {
    for (;;) {
      if (pos_ >= src_.size()) return;
      char c = src_[pos_];
      if (c == '\n') {
        ++pos_;
        advance_line();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        size_t line = line_, col = column();
        pos_ += 2;
        for (;;) {
          if (pos_ + 1 >= src_.size())
            throw SyntaxError({line, col, "error", "unterminated comment"});
          if (src_[pos_] == '*' && src_[pos_ + 1] == '/') {
            pos_ += 2;
            break;
          }
          if (src_[pos_] == '\n') {
            ++pos_;
            advance_line();
          } else {
            ++pos_;
          }
        }
      } else {
        return;
      }
    }
  }

  // Double-quoted, backslash escapes for '"' and '\' only.
  std::string lex_string() {
    size_t line = line_, col = column();
    ++pos_;
    std::string out;
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n')
        throw SyntaxError({line, col, "error", "unterminated string literal"});
      char c = src_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= src_.size())
          throw SyntaxError({line, col, "error", "unterminated string literal"});
        char e = src_[pos_++];
        if (e != '"' && e != '\\')
          throw SyntaxError({line_, column(), "error",
                             std::string("unknown escape '\\") + e + "'"});
        out.push_back(e);
      } else {
        out.push_back(c);
      }
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  size_t line_ = 1;
  size_t line_start_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

  ExperimentAst run() {
    ExperimentAst ast;
    expect_keyword("Experiment");
    ast.name = expect(TokKind::String, "experiment name");
    expect_keyword("Data");
    ast.corpus = expect(TokKind::String, "corpus location");
    expect_keyword("Out");
    ast.output = expect(TokKind::String, "output location");
    expect_keyword("Import");
    ast.imports.push_back(expect(TokKind::String, "import namespace"));
    while (at(TokKind::String))
      ast.imports.push_back(expect(TokKind::String, "import namespace"));

    ast.interactions.push_back(parse_interaction());
    while (at(TokKind::Ident))
      ast.interactions.push_back(parse_interaction());

    if (at_keyword("Evaluate")) {
      ++pos_;
      EvalAst eval;
      eval.agents.push_back(expect(TokKind::Ident, "agent name"));
      while (at(TokKind::Ident))
        eval.agents.push_back(expect(TokKind::Ident, "agent name"));
      expect_keyword("Against");
      eval.gold_location = expect(TokKind::String, "gold location");
      ast.eval = std::move(eval);
    }

    if (!at(TokKind::End))
      throw SyntaxError({cur().line, cur().column, "error",
                         "expected an interaction, 'Evaluate' or end of file, "
                         "got '" + cur().text + "'"});
    return ast;
  }

 private:
  InteractionAst parse_interaction() {
    InteractionAst i;
    i.line = cur().line;
    i.source_agents.push_back(expect(TokKind::Ident, "source agent"));
    while (at(TokKind::Ident))
      i.source_agents.push_back(expect(TokKind::Ident, "source agent"));
    expect_arrow();
    i.type_name = expect(TokKind::Ident, "annotation type");
    expect_arrow();
    i.target_agents.push_back(expect(TokKind::Ident, "target agent"));
    while (at(TokKind::Ident))
      i.target_agents.push_back(expect(TokKind::Ident, "target agent"));
    if (!at(TokKind::Dot))
      throw SyntaxError({cur().line, cur().column, "error",
                         "expected '.' to close the interaction, got '" +
                             cur().text + "'"});
    ++pos_;
    return i;
  }

  const Tok& cur() const { return toks_[pos_]; }
  bool at(TokKind k) const { return cur().kind == k; }
  bool at_keyword(const std::string& kw) const {
    return cur().kind == TokKind::Keyword && cur().text == kw;
  }

  std::string expect(TokKind k, const std::string& what) {
    if (!at(k))
      throw SyntaxError({cur().line, cur().column, "error",
                         "expected " + what + ", got '" +
                             (cur().kind == TokKind::End ? "end of file"
                                                         : cur().text) +
                             "'"});
    return toks_[pos_++].text;
  }

  void expect_keyword(const std::string& kw) {
    if (!at_keyword(kw))
      throw SyntaxError({cur().line, cur().column, "error",
                         "expected '" + kw + "', got '" +
                             (cur().kind == TokKind::End ? "end of file"
                                                         : cur().text) +
                             "'"});
    ++pos_;
  }

  void expect_arrow() {
    if (!at(TokKind::Arrow))
      throw SyntaxError({cur().line, cur().column, "error",
                         "expected '->', got '" + cur().text + "'"});
    ++pos_;
  }

  std::vector<Tok> toks_;
  size_t pos_ = 0;
};

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

inline ExperimentAst parse_experiment(const std::string& source) {
  return detail::Parser(detail::Lexer(source).run()).run();
}

// Prints an AST back to DSL source; parse(print(ast)) == ast.
inline std::string print_experiment(const ExperimentAst& ast) {
  std::string out = "Experiment " + detail::quote(ast.name) + " Data " +
                    detail::quote(ast.corpus) + " Out " +
                    detail::quote(ast.output) + " Import";
  for (const auto& i : ast.imports) out += " " + detail::quote(i);
  out += "\n";
  for (const auto& i : ast.interactions) {
    for (size_t j = 0; j < i.source_agents.size(); ++j)
      out += (j ? " " : "") + i.source_agents[j];
    out += " -> " + i.type_name + " -> ";
    for (size_t j = 0; j < i.target_agents.size(); ++j)
      out += (j ? " " : "") + i.target_agents[j];
    out += ".\n";
  }
  if (ast.eval) {
    out += "Evaluate";
    for (const auto& a : ast.eval->agents) out += " " + a;
    out += " Against " + detail::quote(ast.eval->gold_location) + "\n";
  }
  return out;
}

// Checks every interaction against the registry: agents resolve in the
// imported namespaces, sources produce and targets consume the interaction's
// type, eval agents exist. All problems are reported, not just the first.
inline std::vector<Diagnostic> typecheck(const ExperimentAst& ast,
                                         const AgentRegistry& registry) {
  std::vector<Diagnostic> diagnostics;
  std::set<std::string> imports(ast.imports.begin(), ast.imports.end());

  auto resolve = [&](const std::string& name, size_t index,
                     size_t line) -> const AgentRegistry::Entry* {
    if (!registry.has(name)) {
      diagnostics.push_back({line, 1, "error",
                             "interaction " + std::to_string(index) +
                                 ": unresolved agent '" + name + "'"});
      return nullptr;
    }
    const auto& entry = registry.entry(name);
    if (!imports.count(entry.ns)) {
      diagnostics.push_back({line, 1, "error",
                             "interaction " + std::to_string(index) +
                                 ": agent '" + name + "' lives in namespace '" +
                                 entry.ns + "', which is not imported"});
      return nullptr;
    }
    return &entry;
  };

  for (size_t i = 0; i < ast.interactions.size(); ++i) {
    const auto& interaction = ast.interactions[i];
    for (const auto& name : interaction.source_agents) {
      if (const auto* entry = resolve(name, i, interaction.line)) {
        if (entry->output_type != interaction.type_name)
          diagnostics.push_back(
              {interaction.line, 1, "error",
               "interaction " + std::to_string(i) + ": source '" + name +
                   "' produces " + entry->output_type + ", expected " +
                   interaction.type_name});
      }
    }
    for (const auto& name : interaction.target_agents) {
      if (const auto* entry = resolve(name, i, interaction.line)) {
        if (entry->input_type != interaction.type_name)
          diagnostics.push_back(
              {interaction.line, 1, "error",
               "interaction " + std::to_string(i) + ": target '" + name +
                   "' consumes " + entry->input_type + ", expected " +
                   interaction.type_name});
      }
    }
  }
  if (ast.eval) {
    for (const auto& name : ast.eval->agents)
      if (!registry.has(name))
        diagnostics.push_back(
            {0, 0, "error", "evaluation: unresolved agent '" + name + "'"});
  }
  return diagnostics;
}

// Compiles a type-correct AST to an executable experiment: one analysis per
// interaction line, in file order. Config overrides apply to every agent
// instantiation (the sweep mechanism).
inline Experiment compile(const ExperimentAst& ast,
                          const AgentRegistry& registry,
                          const AgentConfig& config_overrides = {}) {
  auto diagnostics = typecheck(ast, registry);
  if (!diagnostics.empty()) {
    std::string all;
    for (const auto& d : diagnostics)
      all += (all.empty() ? "" : "; ") + d.message;
    throw ValidationError("experiment " + ast.name + ": " + all);
  }

  Experiment x;
  x.name = ast.name;
  x.corpus = ast.corpus;
  x.output = ast.output;
  for (const auto& i : ast.interactions) {
    Analysis analysis(i.type_name);
    for (const auto& name : i.source_agents)
      analysis = analysis.with_source(registry.instantiate(name, config_overrides));
    for (const auto& name : i.target_agents)
      analysis = analysis.with_target(registry.instantiate(name, config_overrides));
    x.interactions.emplace_back(std::move(analysis));
  }
  if (ast.eval)
    x.evaluation = EvaluationClause{ast.eval->agents, ast.eval->gold_location};
  return x;
}

// One named axis of a configuration sweep.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};

struct SweepSpec {
  std::vector<SweepAxis> axes;
  std::function<Experiment(const AgentConfig&)> make;
};

// Cartesian product of the axes in axis-major order (first axis varies
// slowest). Each experiment's name gets a configuration suffix so report
// rows stay distinguishable.
inline std::vector<Experiment> expand_sweep(const SweepSpec& spec) {
  for (const auto& axis : spec.axes)
    if (axis.values.empty()) throw EmptyAxis("empty sweep axis: " + axis.key);

  size_t total = 1;
  for (const auto& axis : spec.axes) total *= axis.values.size();

  std::vector<Experiment> experiments;
  experiments.reserve(total);
  for (size_t n = 0; n < total; ++n) {
    AgentConfig config;
    std::string suffix;
    size_t rest = n;
    size_t block = total;
    for (const auto& axis : spec.axes) {
      block /= axis.values.size();
      const std::string& value = axis.values[rest / block];
      rest %= block;
      config[axis.key] = value;
      suffix += (suffix.empty() ? "" : ",") + axis.key + "=" + value;
    }
    Experiment x = spec.make(config);
    x.name += " [" + suffix + "]";
    if (!x.output.empty()) x.output += "_" + std::to_string(n);
    experiments.push_back(std::move(x));
  }
  return experiments;
}

}  // namespace tm2::dsl
