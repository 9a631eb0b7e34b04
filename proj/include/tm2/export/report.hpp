#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "tm2/engine.hpp"
#include "tm2/errors.hpp"
#include "tm2/export/dot.hpp"

namespace tm2 {

struct ReportEntry {
  Experiment experiment;
  BatchEntry run;
  std::string xml_file;  // relative link target, empty when not exported
};

namespace detail {

inline std::string html_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string format_metric(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

// The primary metric shown in the Result column: the first evaluation's f1,
// else a bare annotation count.
inline std::string primary_result(const BatchEntry& entry) {
  if (!entry.result) return "failed";
  if (!entry.result->evaluations.empty())
    return "f1 " + format_metric(entry.result->evaluations.front().second.f1);
  return std::to_string(entry.result->blackboard.annotation_count()) +
         " annotations";
}

inline std::string evaluation_summary(const BatchEntry& entry) {
  if (!entry.result || entry.result->evaluations.empty()) return "-";
  std::string out;
  for (const auto& [agent, m] : entry.result->evaluations) {
    if (!out.empty()) out += "; ";
    out += html_escape(agent) + ": P " + format_metric(m.precision) + " R " +
           format_metric(m.recall) + " F " + format_metric(m.f1);
  }
  return out;
}

inline size_t synthesis_count(const BatchEntry& entry) {
  if (!entry.result) return 0;
  size_t n = 0;
  for (const auto& step : entry.result->report.steps)
    if (step.kind == "synthesis") ++n;
  return n;
}

inline std::string detail_file_name(size_t index) {
  return "experiment_" + std::to_string(index) + ".html";
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path.string());
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

inline std::string detail_page(const ReportEntry& e) {
  std::string out = "<!DOCTYPE html>\n<html><head><meta charset=\"UTF-8\">"
                    "<title>" + html_escape(e.experiment.name) +
                    "</title></head>\n<body>\n";
  out += "<h1>" + html_escape(e.experiment.name) + "</h1>\n";
  out += "<p><a href=\"index.html\">Back to index</a></p>\n";
  out += "<h2>Configuration</h2>\n<ul>\n";
  out += "<li>Data: <a href=\"" + html_escape(e.experiment.corpus) + "\">" +
         html_escape(e.experiment.corpus) + "</a></li>\n";
  out += "<li>Out: " + html_escape(e.experiment.output) + "</li>\n";
  if (!e.xml_file.empty())
    out += "<li>Export: <a href=\"" + html_escape(e.xml_file) + "\">" +
           html_escape(e.xml_file) + "</a></li>\n";
  out += "</ul>\n";

  if (!e.run.error.empty())
    out += "<h2>Failure</h2>\n<p>" + html_escape(e.run.error) + "</p>\n";

  if (e.run.result) {
    const RunResult& r = *e.run.result;
    out += "<h2>Steps</h2>\n<table border=\"1\">\n"
           "<tr><th>#</th><th>Kind</th><th>Description</th><th>Time (ms)</th>"
           "<th>Annotations</th></tr>\n";
    for (const auto& step : r.report.steps) {
      out += "<tr><td>" + std::to_string(step.index) + "</td><td>" +
             html_escape(step.kind) + "</td><td>" +
             html_escape(step.description) + "</td><td>" +
             std::to_string(step.millis) + "</td><td>" +
             std::to_string(step.annotations_out) + "</td></tr>\n";
    }
    out += "</table>\n";

    if (!r.models.empty()) {
      out += "<h2>Models</h2>\n<ul>\n";
      for (const auto& m : r.models)
        out += "<li>" + html_escape(m.description) + "</li>\n";
      out += "</ul>\n";
    }
    if (!r.evaluations.empty()) {
      out += "<h2>Evaluation</h2>\n<table border=\"1\">\n"
             "<tr><th>Agent</th><th>Precision</th><th>Recall</th><th>F1</th>"
             "<th>Accuracy</th></tr>\n";
      for (const auto& [agent, m] : r.evaluations) {
        out += "<tr><td>" + html_escape(agent) + "</td><td>" +
               format_metric(m.precision) + "</td><td>" +
               format_metric(m.recall) + "</td><td>" + format_metric(m.f1) +
               "</td><td>" + format_metric(m.accuracy) + "</td></tr>\n";
      }
      out += "</table>\n";
    }
  }

  out += "<h2>Graph</h2>\n<pre>" + html_escape(dot_emit(e.experiment)) +
         "</pre>\n";
  out += "</body></html>\n";
  return out;
}

}  // namespace detail

// Writes index.html plus one detail page per experiment into out_dir. Rows
// keep input order; the Result column carries the primary metric.
inline void html_report(const std::vector<ReportEntry>& entries,
                        const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);

  std::string index =
      "<!DOCTYPE html>\n<html><head><meta charset=\"UTF-8\">"
      "<title>Experiment results</title></head>\n<body>\n"
      "<h1>Experiment results</h1>\n<table border=\"1\">\n"
      "<tr><th>Result</th><th>Details</th><th>Syntheses</th><th>Models</th>"
      "<th>Time</th><th>Evaluation</th></tr>\n";
  for (size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    std::string detail_file = detail::detail_file_name(i);
    index += "<tr><td>" + detail::primary_result(e.run) + "</td>";
    index += "<td><a href=\"" + detail_file + "\">" +
             detail::html_escape(e.experiment.name) + "</a></td>";
    index += "<td>" + std::to_string(detail::synthesis_count(e.run)) + "</td>";
    index += "<td>" +
             std::to_string(e.run.result ? e.run.result->models.size() : 0) +
             "</td>";
    index += "<td>" +
             std::to_string(e.run.result ? e.run.result->report.total_millis
                                         : 0) +
             "</td>";
    index += "<td>" + detail::evaluation_summary(e.run) + "</td></tr>\n";
    detail::write_file(out_dir / detail_file, detail::detail_page(e));
  }
  index += "</table>\n</body></html>\n";
  detail::write_file(out_dir / "index.html", index);
}

}  // namespace tm2
