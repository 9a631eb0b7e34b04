#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tm2/agent.hpp"
#include "tm2/blackboard.hpp"
#include "tm2/detail/text.hpp"
#include "tm2/errors.hpp"
#include "tm2/payloads.hpp"
#include "tm2/resource.hpp"

namespace tm2::agents {

// Unicode letter test for the default tokenizer. Covers ASCII, Latin-1 and
// the common European blocks; the rule is a maximal run of these characters.
inline bool is_letter(char32_t c) {
  if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) return true;
  if (c >= 0xC0 && c <= 0xFF && c != 0xD7 && c != 0xF7) return true;  // Latin-1
  if (c >= 0x100 && c <= 0x24F) return true;                          // Latin ext
  if (c >= 0x370 && c <= 0x3FF && c != 0x374 && c != 0x375 && c != 0x37E)
    return true;                                                      // Greek
  if (c >= 0x400 && c <= 0x4FF) return true;                          // Cyrillic
  return false;
}

// Emits the corpus text it is handed (normally the bootstrap annotation)
// under its own identity.
inline AgentSpec make_corpus(const AgentId& id, const AgentConfig&) {
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

// One Token annotation per maximal run of letter characters, with exact
// scalar-value offsets into the annotated data.
inline AgentSpec make_tokenizer(const AgentId& id, const AgentConfig&) {
  AgentSpec spec;
  spec.id = id;
  spec.input_type = "String";
  spec.output_type = "Token";
  spec.process = [id](const std::vector<Annotation>& input) {
    std::vector<Annotation> out;
    for (const auto& a : input) {
      auto cps = detail::decode_utf8(a.value.get<std::string>());
      size_t i = 0;
      while (i < cps.size()) {
        if (!is_letter(cps[i])) {
          ++i;
          continue;
        }
        size_t begin = i;
        while (i < cps.size() && is_letter(cps[i])) ++i;
        out.push_back(Annotation{
            Value::of(Token{detail::encode_utf8(cps, begin, i)}),
            a.start + begin, a.start + i, a.data_ref, id});
      }
    }
    return out;
  };
  return spec;
}

// Word-list file format: UTF-8 lines `form=label`, '#' comments;
// multi-label forms repeat the key.
inline std::map<std::string, std::set<std::string>> parse_word_lists(
    const std::string& text) {
  std::map<std::string, std::set<std::string>> lists;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    auto eq = line.find('=', first);
    if (eq == std::string::npos)
      throw ResourceError("word list line " + std::to_string(lineno) +
                          ": expected form=label");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string()
                                    : s.substr(b, e - b + 1);
    };
    std::string form = trim(line.substr(0, eq));
    std::string label = trim(line.substr(eq + 1));
    if (form.empty() || label.empty())
      throw ResourceError("word list line " + std::to_string(lineno) +
                          ": empty form or label");
    lists[form].insert(label);
  }
  return lists;
}

// For each token found in one or more lists, one Sense annotation per
// containing list at the token's span; ambiguity is preserved.
inline AgentSpec make_gazetteer(const AgentId& id, const AgentConfig& config,
                                const ResourceResolver& resolver =
                                    default_resolver()) {
  auto it = config.find("list");
  if (it == config.end())
    throw InvalidConfig("gazetteer " + id + " needs a 'list' resource");
  bool case_sensitive = true;
  if (auto cs = config.find("case_sensitive"); cs != config.end())
    case_sensitive = cs->second != "false";

  auto lists = std::make_shared<std::map<std::string, std::set<std::string>>>(
      parse_word_lists(resolver.fetch(it->second)));
  if (!case_sensitive) {
    std::map<std::string, std::set<std::string>> folded;
    for (auto& [form, labels] : *lists) {
      std::string low = form;
      std::transform(low.begin(), low.end(), low.begin(),
                     [](unsigned char c) { return std::tolower(c); });
      folded[low].insert(labels.begin(), labels.end());
    }
    *lists = std::move(folded);
  }

  AgentSpec spec;
  spec.id = id;
  spec.input_type = "Token";
  spec.output_type = "Sense";
  spec.process = [id, lists, case_sensitive](
                     const std::vector<Annotation>& input) {
    std::vector<Annotation> out;
    for (const auto& a : input) {
      std::string form = a.value.get<Token>().form;
      if (!case_sensitive)
        std::transform(form.begin(), form.end(), form.begin(),
                       [](unsigned char c) { return std::tolower(c); });
      auto hit = lists->find(form);
      if (hit == lists->end()) continue;
      for (const auto& label : hit->second)
        out.push_back(Annotation{Value::of(Sense{label, "", ""}), a.start,
                                 a.end, a.data_ref, id});
    }
    return out;
  };
  return spec;
}

// One Integer annotation per token occurrence carrying the total corpus
// count of that form.
inline AgentSpec make_indexer(const AgentId& id, const AgentConfig&) {
  AgentSpec spec;
  spec.id = id;
  spec.input_type = "Token";
  spec.output_type = "Integer";
  spec.process = [id](const std::vector<Annotation>& input) {
    std::map<std::string, int64_t> counts;
    for (const auto& a : input) ++counts[a.value.get<Token>().form];
    std::vector<Annotation> out;
    for (const auto& a : input)
      out.push_back(Annotation{Value::of(counts[a.value.get<Token>().form]),
                               a.start, a.end, a.data_ref, id});
    return out;
  };
  return spec;
}

// Like the indexer, but the emitted payload keeps the counted form.
inline AgentSpec make_counter(const AgentId& id, const AgentConfig&) {
  AgentSpec spec;
  spec.id = id;
  spec.input_type = "Token";
  spec.output_type = "Frequency";
  spec.process = [id](const std::vector<Annotation>& input) {
    std::map<std::string, uint64_t> counts;
    for (const auto& a : input) ++counts[a.value.get<Token>().form];
    std::vector<Annotation> out;
    for (const auto& a : input) {
      const std::string& form = a.value.get<Token>().form;
      out.push_back(Annotation{Value::of(Frequency{form, counts[form]}),
                               a.start, a.end, a.data_ref, id});
    }
    return out;
  };
  return spec;
}

// Pseudo-word generator: every occurrence of one of the two configured
// forms becomes, in "ambiguous" mode, a Context targeting the merged form
// w1-w2, and in "gold" mode a Sense labeled with the original form. Context
// windows and gold instances are numbered identically, so training pairs
// align by (lemma, instance_id).
inline AgentSpec make_pseudo_ambig(const AgentId& id,
                                   const AgentConfig& config) {
  auto get = [&](const char* key, const std::string& fallback) {
    auto it = config.find(key);
    return it == config.end() ? fallback : it->second;
  };
  std::string w1 = get("w1", "");
  std::string w2 = get("w2", "");
  std::string mode = get("mode", "ambiguous");
  size_t window = std::stoul(get("window", "4"));
  if (w1.empty() || w2.empty() || w1 == w2)
    throw InvalidConfig("pseudo-ambiguity " + id +
                        " needs two distinct forms w1 and w2");
  if (mode != "ambiguous" && mode != "gold")
    throw InvalidConfig("pseudo-ambiguity mode must be ambiguous or gold");
  std::string merged = w1 + "-" + w2;

  AgentSpec spec;
  spec.id = id;
  spec.input_type = "Token";
  spec.output_type = mode == "ambiguous" ? "Context" : "Sense";
  spec.process = [id, w1, w2, mode, window, merged](
                     const std::vector<Annotation>& input) {
    std::vector<Annotation> out;
    size_t instance = 0;
    for (size_t i = 0; i < input.size(); ++i) {
      const std::string& form = input[i].value.get<Token>().form;
      if (form != w1 && form != w2) continue;
      std::string instance_id = "i" + std::to_string(instance++);
      const Annotation& t = input[i];
      if (mode == "gold") {
        out.push_back(Annotation{Value::of(Sense{form, merged, instance_id}),
                                 t.start, t.end, t.data_ref, id});
        continue;
      }
      Context c;
      c.target = merged;
      c.lemma = merged;
      c.instance_id = instance_id;
      c.target_start = t.start;
      c.target_end = t.end;
      for (size_t j = i > window ? i - window : 0; j < i; ++j)
        c.left.push_back(input[j].value.get<Token>().form);
      for (size_t j = i + 1; j < input.size() && j <= i + window; ++j)
        c.right.push_back(input[j].value.get<Token>().form);
      out.push_back(
          Annotation{Value::of(std::move(c)), t.start, t.end, t.data_ref, id});
    }
    return out;
  };
  return spec;
}

}  // namespace tm2::agents
