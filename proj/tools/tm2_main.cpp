// tm2 command-line interface: check, run, batch, sweep, query, export-xcdl.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tm2/tm2.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes shared across commands.
constexpr int kExitOk = 0;
constexpr int kExitSyntax = 1;
constexpr int kExitType = 2;
constexpr int kExitIo = 3;
constexpr int kExitEngine = 4;
constexpr int kExitUnparseable = 5;
constexpr int kExitUnknownAgent = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tm2::IoError("cannot read: " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

size_t default_jobs() {
  if (const char* env = std::getenv("TM2_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
  }
  return 0;  // engine default: hardware concurrency
}

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out.empty() ? "experiment" : out;
}

// `${key}` placeholder substitution for sweep templates.
std::string substitute(std::string s,
                       const std::map<std::string, std::string>& vars) {
  for (const auto& [key, value] : vars) {
    std::string placeholder = "${" + key + "}";
    for (size_t pos; (pos = s.find(placeholder)) != std::string::npos;)
      s.replace(pos, placeholder.size(), value);
  }
  return s;
}

tm2::dsl::ExperimentAst substitute_ast(
    tm2::dsl::ExperimentAst ast,
    const std::map<std::string, std::string>& vars) {
  ast.name = substitute(ast.name, vars);
  ast.corpus = substitute(ast.corpus, vars);
  ast.output = substitute(ast.output, vars);
  if (ast.eval)
    ast.eval->gold_location = substitute(ast.eval->gold_location, vars);
  return ast;
}

struct CheckedProgram {
  tm2::dsl::ExperimentAst ast;
};

// Parse + typecheck a program file; on failure prints diagnostics and
// returns the exit code instead.
std::optional<CheckedProgram> check_program(const std::string& file,
                                            const tm2::AgentRegistry& registry,
                                            int& exit_code) {
  std::string source;
  try {
    source = read_file(file);
  } catch (const tm2::IoError& e) {
    std::cerr << e.what() << "\n";
    exit_code = kExitIo;
    return std::nullopt;
  }
  tm2::dsl::ExperimentAst ast;
  try {
    ast = tm2::dsl::parse_experiment(source);
  } catch (const tm2::dsl::SyntaxError& e) {
    std::cerr << e.diagnostic.format(file) << "\n";
    exit_code = kExitSyntax;
    return std::nullopt;
  }
  auto diagnostics = tm2::dsl::typecheck(ast, registry);
  if (!diagnostics.empty()) {
    for (const auto& d : diagnostics) std::cerr << d.format(file) << "\n";
    exit_code = kExitType;
    return std::nullopt;
  }
  exit_code = kExitOk;
  return CheckedProgram{std::move(ast)};
}

struct RunArtifacts {
  tm2::ReportEntry entry;
};

// Execute one experiment and write <name>.xml and <name>.dot into out_dir.
RunArtifacts run_and_export(const tm2::Experiment& x,
                            const tm2::AgentRegistry& registry,
                            const tm2::RunOptions& options,
                            const fs::path& out_dir, bool inline_data) {
  RunArtifacts artifacts;
  artifacts.entry.experiment = x;
  try {
    artifacts.entry.run.result = tm2::run_experiment(x, registry, options);
  } catch (const std::exception& e) {
    artifacts.entry.run.error = e.what();
    return artifacts;
  }
  fs::create_directories(out_dir);
  std::string base = sanitize(x.name);
  std::optional<std::string> data_override;
  if (inline_data)
    data_override = options.resolver_or_default().fetch(x.corpus);
  tm2::xml_write(artifacts.entry.run.result->blackboard,
                 out_dir / (base + ".xml"), data_override);
  artifacts.entry.xml_file = base + ".xml";
  std::ofstream dot(out_dir / (base + ".dot"), std::ios::binary);
  dot << tm2::dot_emit(x);
  return artifacts;
}

void print_row(const tm2::ReportEntry& e) {
  std::cout << e.experiment.name << "\t" << tm2::detail::primary_result(e.run)
            << "\t" << tm2::detail::synthesis_count(e.run) << "\t"
            << (e.run.result ? e.run.result->models.size() : 0) << "\t"
            << (e.run.result ? e.run.result->report.total_millis : 0) << "\t"
            << tm2::detail::evaluation_summary(e.run) << "\n";
}

int finish_report(std::vector<tm2::ReportEntry> entries,
                  const fs::path& out_dir) {
  tm2::html_report(entries, out_dir);
  bool failed = false;
  for (const auto& e : entries) {
    print_row(e);
    if (!e.run.error.empty()) {
      std::cerr << e.experiment.name << ": " << e.run.error << "\n";
      failed = true;
    }
  }
  return failed ? kExitEngine : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tm2: typed text-mining experiments"};
  app.require_subcommand(1);

  std::string wordlist = "data/wordlist.properties";
  app.add_option("--wordlist", wordlist, "Gazetteer word list resource");

  // check
  auto* check = app.add_subcommand("check", "Parse and type-check a program");
  std::string check_file;
  check->add_option("file", check_file, "Program file")->required();

  // run
  auto* run = app.add_subcommand("run", "Run one experiment");
  std::string run_file, run_out = "out", run_data, run_gold;
  bool run_sequential = false, run_inline_data = false;
  size_t run_jobs = default_jobs();
  run->add_option("file", run_file, "Program file")->required();
  run->add_option("--out", run_out, "Output directory");
  run->add_option("--data", run_data, "Override the corpus resource");
  run->add_option("--gold", run_gold, "Override the gold resource");
  run->add_option("--jobs", run_jobs, "Parallelism cap");
  run->add_flag("--sequential", run_sequential, "Disable parallelism");
  run->add_flag("--inline-data", run_inline_data,
                "Store corpus text instead of its URI in the export");

  // batch
  auto* batch = app.add_subcommand("batch", "Run several experiments");
  std::vector<std::string> batch_files;
  std::string batch_out = "out";
  bool batch_sequential = false;
  size_t batch_jobs = default_jobs();
  batch->add_option("files", batch_files, "Program files")->required();
  batch->add_option("--out", batch_out, "Output directory");
  batch->add_option("--jobs", batch_jobs, "Parallelism cap");
  batch->add_flag("--sequential", batch_sequential, "Disable parallelism");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a configuration sweep");
  std::string sweep_file, sweep_out = "out";
  std::vector<std::string> sweep_axes;
  bool sweep_sequential = false;
  size_t sweep_jobs = default_jobs();
  sweep->add_option("file", sweep_file, "Program template file")->required();
  sweep->add_option("--axis", sweep_axes, "Axis as key=v1,v2,...")
      ->required();
  sweep->add_option("--out", sweep_out, "Output directory");
  sweep->add_option("--jobs", sweep_jobs, "Parallelism cap");
  sweep->add_flag("--sequential", sweep_sequential, "Disable parallelism");

  // query
  auto* query = app.add_subcommand("query", "Span-correspondence query");
  std::string query_xml, query_in, query_value, query_by;
  query->add_option("xml", query_xml, "Exported experiment file")->required();
  query->add_option("in_agent", query_in, "Agent whose values to match")
      ->required();
  query->add_option("value", query_value, "Query value text")->required();
  query->add_option("by_agent", query_by, "Agent whose spans to report")
      ->required();

  // export-xcdl
  auto* xcdl = app.add_subcommand("export-xcdl",
                                  "Transform an export to XCDL");
  std::string xcdl_in, xcdl_out;
  xcdl->add_option("xml", xcdl_in, "Exported experiment file")->required();
  xcdl->add_option("--out", xcdl_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  tm2::agents::CatalogOptions catalog;
  catalog.wordlist_uri = wordlist;
  tm2::AgentRegistry registry = tm2::agents::default_registry(catalog);

  try {
    if (*check) {
      int code;
      check_program(check_file, registry, code);
      return code;
    }

    if (*run) {
      int code;
      auto program = check_program(run_file, registry, code);
      if (!program) return code;
      if (!run_data.empty()) program->ast.corpus = run_data;
      if (!run_gold.empty() && program->ast.eval)
        program->ast.eval->gold_location = run_gold;
      tm2::Experiment x = tm2::dsl::compile(program->ast, registry);
      tm2::RunOptions options;
      options.parallel = !run_sequential;
      options.jobs = run_jobs;
      RunArtifacts artifacts =
          run_and_export(x, registry, options, run_out, run_inline_data);
      return finish_report({artifacts.entry}, run_out);
    }

    if (*batch) {
      tm2::RunOptions options;
      options.parallel = !batch_sequential;
      options.jobs = batch_jobs;
      std::vector<tm2::Experiment> xs;
      for (const auto& file : batch_files) {
        int code;
        auto program = check_program(file, registry, code);
        if (!program) return code;
        xs.push_back(tm2::dsl::compile(program->ast, registry));
      }
      std::vector<tm2::BatchEntry> runs = tm2::batch_run(xs, registry, options);
      std::vector<tm2::ReportEntry> entries;
      fs::create_directories(batch_out);
      for (size_t i = 0; i < xs.size(); ++i) {
        tm2::ReportEntry e{xs[i], runs[i], ""};
        if (runs[i].result) {
          std::string base = sanitize(xs[i].name);
          tm2::xml_write(runs[i].result->blackboard,
                         fs::path(batch_out) / (base + ".xml"));
          e.xml_file = base + ".xml";
          std::ofstream dot(fs::path(batch_out) / (base + ".dot"),
                            std::ios::binary);
          dot << tm2::dot_emit(xs[i]);
        }
        entries.push_back(std::move(e));
      }
      return finish_report(std::move(entries), batch_out);
    }

    if (*sweep) {
      int code;
      auto program = check_program(sweep_file, registry, code);
      if (!program) return code;
      tm2::dsl::SweepSpec spec;
      for (const auto& axis : sweep_axes) {
        auto eq = axis.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == axis.size()) {
          std::cerr << "bad --axis, expected key=v1,v2,...: " << axis << "\n";
          return kExitType;
        }
        tm2::dsl::SweepAxis a;
        a.key = axis.substr(0, eq);
        std::string rest = axis.substr(eq + 1);
        for (size_t pos = 0; pos <= rest.size();) {
          size_t comma = rest.find(',', pos);
          if (comma == std::string::npos) comma = rest.size();
          a.values.push_back(rest.substr(pos, comma - pos));
          pos = comma + 1;
        }
        spec.axes.push_back(std::move(a));
      }
      tm2::dsl::ExperimentAst ast = program->ast;
      spec.make = [&ast, &registry](const tm2::AgentConfig& config) {
        return tm2::dsl::compile(substitute_ast(ast, config), registry,
                                 config);
      };
      std::vector<tm2::Experiment> xs = tm2::dsl::expand_sweep(spec);
      tm2::RunOptions options;
      options.parallel = !sweep_sequential;
      options.jobs = sweep_jobs;
      std::vector<tm2::BatchEntry> runs = tm2::batch_run(xs, registry, options);
      std::vector<tm2::ReportEntry> entries;
      fs::create_directories(sweep_out);
      for (size_t i = 0; i < xs.size(); ++i) {
        tm2::ReportEntry e{xs[i], runs[i], ""};
        if (runs[i].result) {
          std::string base = sanitize(xs[i].name);
          tm2::xml_write(runs[i].result->blackboard,
                         fs::path(sweep_out) / (base + ".xml"));
          e.xml_file = base + ".xml";
        }
        entries.push_back(std::move(e));
      }
      return finish_report(std::move(entries), sweep_out);
    }

    if (*query) {
      tm2::Blackboard bb = tm2::xml_read_file(query_xml, registry);
      tm2::TypeTag type;
      if (query_in == tm2::kSeedAgent) {
        type = "String";
      } else if (registry.has(query_in)) {
        type = registry.entry(query_in).output_type;
      } else {
        std::cerr << "unknown agent: " << query_in << "\n";
        return kExitUnknownAgent;
      }
      if (!bb.has(query_in) || !bb.has(query_by)) {
        std::cerr << "agent not in export: "
                  << (bb.has(query_in) ? query_by : query_in) << "\n";
        return kExitUnknownAgent;
      }
      tm2::Value value;
      try {
        value = tm2::Value::parse(type, query_value);
      } catch (const tm2::Error& e) {
        std::cerr << "unparseable value: " << e.what() << "\n";
        return kExitUnparseable;
      }
      tm2::Retrieval retrieval(bb, registry);
      tm2::QueryResult result;
      try {
        result = retrieval.find_by(value, query_in, query_by);
      } catch (const tm2::UnknownAgent& e) {
        std::cerr << e.what() << "\n";
        return kExitUnknownAgent;
      }
      for (const auto& hit : result.hits)
        std::cout << hit.start << ".." << hit.end << "\t" << hit.value.text()
                  << "\n";
      return kExitOk;
    }

    if (*xcdl) {
      std::string transformed = tm2::xcdl_from_export(read_file(xcdl_in));
      if (xcdl_out.empty()) {
        std::cout << transformed;
      } else {
        std::ofstream out(xcdl_out, std::ios::binary);
        if (!out) throw tm2::IoError("cannot write: " + xcdl_out);
        out << transformed;
      }
      return kExitOk;
    }
  } catch (const tm2::IoError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const tm2::SchemaError& e) {
    std::cerr << e.what() << "\n";
    return kExitIo;
  } catch (const tm2::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitEngine;
  }
  return kExitOk;
}
