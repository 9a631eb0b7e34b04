#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "tm2/blackboard.hpp"
#include "tm2/detail/text.hpp"
#include "tm2/errors.hpp"
#include "tm2/experiment.hpp"
#include "tm2/export/xml.hpp"
#include "tm2/resource.hpp"

namespace tm2 {

struct RunOptions {
  bool parallel = true;
  size_t jobs = 0;  // 0 = hardware concurrency
  const ResourceResolver* resolver = nullptr;

  const ResourceResolver& resolver_or_default() const {
    return resolver ? *resolver : default_resolver();
  }
  size_t effective_jobs() const {
    if (jobs > 0) return jobs;
    size_t hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 2;
  }
};

struct RunReport {
  struct Step {
    size_t index = 0;
    std::string kind;  // "analysis" | "synthesis"
    std::string description;
    long long millis = 0;
    size_t annotations_out = 0;
  };
  std::vector<Step> steps;
  long long total_millis = 0;
};

struct RunResult {
  Blackboard blackboard;
  std::vector<TrainedModel> models;
  std::vector<std::pair<AgentId, EvaluationResult>> evaluations;
  RunReport report;
};

namespace detail {

inline std::vector<Annotation> run_agent(
    const AgentSpec& agent, const std::vector<Annotation>& input) {
  std::vector<Annotation> out;
  try {
    out = agent.process(input);
  } catch (const std::exception& e) {
    throw AgentFailure("agent " + agent.id + " failed: " + e.what());
  }
  for (const auto& a : out) {
    if (a.author != agent.id)
      throw AgentFailure("agent " + agent.id +
                         " emitted an annotation authored by " + a.author);
    if (a.value.type() != agent.output_type)
      throw AgentFailure("agent " + agent.id + " emitted a " + a.value.type() +
                         " annotation, declared output type is " +
                         agent.output_type);
  }
  return out;
}

inline std::vector<Annotation> gather_sorted(
    const Blackboard& bb, const std::vector<AgentSpec>& agents) {
  std::vector<Annotation> all;
  for (const auto& agent : agents) {
    const auto& list = bb.entries(agent.id);
    all.insert(all.end(), list.begin(), list.end());
  }
  std::stable_sort(all.begin(), all.end(), annotation_less);
  return all;
}

inline std::string agent_names(const std::vector<AgentSpec>& agents) {
  std::string out;
  for (size_t i = 0; i < agents.size(); ++i) {
    if (i) out += ", ";
    out += agents[i].id;
  }
  return out;
}

}  // namespace detail

// Delivers the concatenated, sorted source annotations to every target and
// appends each target's output under its id. Targets run independently; the
// result is identical to sequential execution.
inline void run_analysis(const Analysis& analysis, Blackboard& bb,
                         const RunOptions& options = {}) {
  if (analysis.sources().empty() || analysis.targets().empty())
    throw MissingInput("analysis over " + analysis.type() +
                       " needs at least one source and one target");
  // Sources without an entry are bootstrapped from the corpus seed when they
  // consume the seed's type; anything else is a missing input.
  for (const auto& source : analysis.sources()) {
    if (bb.has(source.id)) continue;
    if (source.input_type == "String" && bb.has(kSeedAgent)) {
      bb.append(source.id,
                detail::run_agent(source, bb.entries(kSeedAgent)));
    } else {
      throw MissingInput("source " + source.id +
                         " has no blackboard entry");
    }
  }

  std::vector<Annotation> input = detail::gather_sorted(bb, analysis.sources());

  std::vector<std::vector<Annotation>> outputs(analysis.targets().size());
  if (options.parallel && analysis.targets().size() > 1) {
    std::vector<std::future<std::vector<Annotation>>> futures;
    futures.reserve(analysis.targets().size());
    for (const auto& target : analysis.targets())
      futures.push_back(std::async(std::launch::async, [&target, &input] {
        return detail::run_agent(target, input);
      }));
    for (size_t i = 0; i < futures.size(); ++i) outputs[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < analysis.targets().size(); ++i)
      outputs[i] = detail::run_agent(analysis.targets()[i], input);
  }
  for (size_t i = 0; i < outputs.size(); ++i)
    bb.append(analysis.targets()[i].id, std::move(outputs[i]));
}

// Trains the synthesis' model on all data and info annotations. The
// blackboard is not modified; the audit record lives in the run report.
inline TrainedModel run_synthesis(const Synthesis& synthesis,
                                  const Blackboard& bb) {
  if (synthesis.data_agents().empty() || synthesis.info_agents().empty())
    throw MissingInput("synthesis of (" + synthesis.data_type() + ", " +
                       synthesis.info_type() +
                       ") needs data and info agents");
  for (const auto& agent : synthesis.data_agents())
    if (!bb.has(agent.id))
      throw MissingInput("data agent " + agent.id + " has no blackboard entry");
  for (const auto& agent : synthesis.info_agents())
    if (!bb.has(agent.id))
      throw MissingInput("info agent " + agent.id + " has no blackboard entry");

  std::vector<Annotation> data = detail::gather_sorted(bb, synthesis.data_agents());
  std::vector<Annotation> info = detail::gather_sorted(bb, synthesis.info_agents());
  try {
    return synthesis.model().train(data, info);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw TrainFailure("training " + synthesis.model().id + " failed: " +
                       e.what());
  }
}

// Executes the experiment's interactions in declared order against a fresh
// blackboard seeded with the corpus bootstrap annotation.
inline RunResult run_experiment(const Experiment& x,
                                const AgentRegistry& registry,
                                const RunOptions& options = {}) {
  auto problems = validate(x);
  if (!problems.empty()) {
    std::string all;
    for (const auto& p : problems) all += (all.empty() ? "" : "; ") + p;
    throw ValidationError("experiment " + x.name + ": " + all);
  }

  const auto& resolver = options.resolver_or_default();
  std::string corpus_text = resolver.fetch(x.corpus);
  size_t corpus_len = detail::decode_utf8(corpus_text).size();

  RunResult result;
  result.blackboard = Blackboard(x.name, x.corpus);
  result.blackboard.append(
      kSeedAgent, {Annotation{Value::of(corpus_text), 0, corpus_len, x.corpus,
                              kSeedAgent}});

  auto start_all = std::chrono::steady_clock::now();
  for (size_t i = 0; i < x.interactions.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    RunReport::Step step;
    step.index = i;
    size_t before = result.blackboard.annotation_count();
    try {
      if (const auto* a = std::get_if<Analysis>(&x.interactions[i])) {
        run_analysis(*a, result.blackboard, options);
        step.kind = "analysis";
        step.description = detail::agent_names(a->sources()) + " -> " +
                           a->type() + " -> " +
                           detail::agent_names(a->targets());
      } else {
        const auto& s = std::get<Synthesis>(x.interactions[i]);
        TrainedModel model = run_synthesis(s, result.blackboard);
        step.kind = "synthesis";
        step.description = "(" + detail::agent_names(s.data_agents()) + "; " +
                           detail::agent_names(s.info_agents()) + ") -> " +
                           model.id;
        if (model.metrics)
          result.evaluations.emplace_back(model.id, *model.metrics);
        result.models.push_back(std::move(model));
      }
    } catch (const Error& e) {
      throw AgentFailure("experiment " + x.name + ", interaction " +
                         std::to_string(i) + ": " + e.what());
    }
    step.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    step.annotations_out = result.blackboard.annotation_count() - before;
    result.report.steps.push_back(std::move(step));
  }

  if (x.evaluation) {
    Blackboard gold = xml_read(resolver.fetch(x.evaluation->gold), registry);
    for (const auto& agent : x.evaluation->agents) {
      const auto& results = result.blackboard.entries(agent);
      std::vector<Annotation> gold_list;
      if (gold.has(agent)) {
        gold_list = gold.entries(agent);
      } else {
        for (const auto& [name, list] : gold.all())
          if (name != kSeedAgent)
            gold_list.insert(gold_list.end(), list.begin(), list.end());
      }
      result.evaluations.emplace_back(agent,
                                      evaluate_generic(results, gold_list));
    }
  }

  result.report.total_millis =
      std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - start_all)
          .count();
  return result;
}

struct BatchEntry {
  std::optional<RunResult> result;
  std::string error;  // set when the experiment failed
};

// Runs independent experiments concurrently. Results keep input order; one
// failing experiment never affects the others.
inline std::vector<BatchEntry> batch_run(const std::vector<Experiment>& xs,
                                         const AgentRegistry& registry,
                                         const RunOptions& options = {}) {
  std::set<std::string> outputs;
  for (const auto& x : xs)
    if (!x.output.empty() && !outputs.insert(x.output).second)
      throw DuplicateOutputPath("duplicate output path: " + x.output);

  std::vector<BatchEntry> results(xs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= xs.size()) return;
      try {
        results[i].result = run_experiment(xs[i], registry, options);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };
  size_t n = options.parallel
                 ? std::min(options.effective_jobs(), xs.size() ? xs.size() : 1)
                 : 1;
  std::vector<std::thread> threads;
  for (size_t i = 0; i < n; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace tm2
