#pragma once

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <iterator>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tm2/agent.hpp"
#include "tm2/blackboard.hpp"
#include "tm2/detail/text.hpp"
#include "tm2/errors.hpp"

namespace tm2 {

inline constexpr const char* kExportNamespace = "http://www.quui.com/tm2";

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

// Serializes a blackboard to the export format: one agent element per agent
// (sorted by id, empty agents skipped to stay schema-valid), each with its
// sorted annotations. Byte-deterministic for a given blackboard.
inline std::string xml_to_string(
    const Blackboard& bb,
    const std::optional<std::string>& data_override = std::nullopt) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<experiment xmlns=\"";
  out += kExportNamespace;
  out += "\" data=\"" +
         detail::xml_escape(data_override ? *data_override : bb.data_ref()) +
         "\">\n";
  for (const auto& [agent, list] : bb.all()) {
    if (list.empty()) continue;
    out += "  <agent name=\"" + detail::xml_escape(agent) + "\">\n";
    for (const auto& a : list) {
      out += "    <a start=\"" + std::to_string(a.start) + "\" end=\"" +
             std::to_string(a.end) + "\" label=\"" +
             detail::xml_escape(a.value.text()) + "\"";
      if (auto bin = a.value.binary())
        out += " object=\"" + detail::base64_encode(*bin) + "\"";
      out += "/>\n";
    }
    out += "  </agent>\n";
  }
  out += "</experiment>\n";
  return out;
}

inline void xml_write(const Blackboard& bb, const std::filesystem::path& path,
                      const std::optional<std::string>& data_override =
                          std::nullopt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write: " + path.string());
  out << xml_to_string(bb, data_override);
  if (!out) throw IoError("write failed: " + path.string());
}

namespace detail {

// Minimal XML reader for the export schema: elements, attributes, comments
// and character references. Anything else fails fast.
struct XmlNode {
  std::string name;
  std::map<std::string, std::string> attrs;
  std::vector<XmlNode> children;
};

class XmlParser {
 public:
  explicit XmlParser(const std::string& text) : s_(text) {}

  XmlNode parse_document() {
    skip_prolog();
    XmlNode root = parse_element();
    skip_misc();
    if (pos_ != s_.size()) fail("content after document element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError("malformed XML at offset " + std::to_string(pos_) + ": " +
                      what);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  void skip_misc() {
    for (;;) {
      skip_ws();
      if (s_.compare(pos_, 4, "<!--") == 0) {
        auto end = s_.find("-->", pos_ + 4);
        if (end == std::string::npos) fail("unterminated comment");
        pos_ = end + 3;
      } else if (s_.compare(pos_, 2, "<?") == 0) {
        auto end = s_.find("?>", pos_ + 2);
        if (end == std::string::npos) fail("unterminated processing instruction");
        pos_ = end + 2;
      } else {
        return;
      }
    }
  }

  void skip_prolog() {
    if (s_.compare(pos_, 3, "\xEF\xBB\xBF") == 0) pos_ += 3;
    skip_misc();
  }

  std::string parse_name() {
    size_t begin = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_' || s_[pos_] == ':' || s_[pos_] == '-' ||
            s_[pos_] == '.'))
      ++pos_;
    if (pos_ == begin) fail("expected a name");
    return s_.substr(begin, pos_ - begin);
  }

  std::string parse_attr_value() {
    if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\''))
      fail("expected a quoted attribute value");
    char quote = s_[pos_++];
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      char c = s_[pos_];
      if (c == '<') fail("'<' in attribute value");
      if (c == '&') {
        auto end = s_.find(';', pos_);
        if (end == std::string::npos) fail("unterminated entity");
        std::string ent = s_.substr(pos_ + 1, end - pos_ - 1);
        if (ent == "amp") out.push_back('&');
        else if (ent == "lt") out.push_back('<');
        else if (ent == "gt") out.push_back('>');
        else if (ent == "quot") out.push_back('"');
        else if (ent == "apos") out.push_back('\'');
        else if (!ent.empty() && ent[0] == '#') {
          long cp = ent[1] == 'x' ? std::strtol(ent.c_str() + 2, nullptr, 16)
                                  : std::strtol(ent.c_str() + 1, nullptr, 10);
          append_utf8(out, static_cast<char32_t>(cp));
        } else {
          fail("unknown entity: " + ent);
        }
        pos_ = end + 1;
      } else {
        out.push_back(c);
        ++pos_;
      }
    }
    if (pos_ >= s_.size()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  XmlNode parse_element() {
    if (pos_ >= s_.size() || s_[pos_] != '<') fail("expected an element");
    ++pos_;
    XmlNode node;
    node.name = parse_name();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated start tag");
      if (s_[pos_] == '/') {
        if (s_.compare(pos_, 2, "/>") != 0) fail("malformed empty-element tag");
        pos_ += 2;
        return node;
      }
      if (s_[pos_] == '>') {
        ++pos_;
        break;
      }
      std::string attr = parse_name();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '='");
      ++pos_;
      skip_ws();
      if (node.attrs.count(attr)) fail("duplicate attribute: " + attr);
      node.attrs[attr] = parse_attr_value();
    }
    for (;;) {
      skip_misc();
      if (pos_ >= s_.size()) fail("unterminated element: " + node.name);
      if (s_.compare(pos_, 2, "</") == 0) {
        pos_ += 2;
        std::string name = parse_name();
        if (name != node.name)
          fail("mismatched end tag: " + name + " closes " + node.name);
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '>') fail("expected '>'");
        ++pos_;
        return node;
      }
      if (s_[pos_] == '<') {
        node.children.push_back(parse_element());
      } else {
        fail("unexpected character data inside " + node.name);
      }
    }
  }

  const std::string& s_;
  size_t pos_ = 0;
};

inline Offset parse_offset(const XmlNode& a, const char* attr) {
  auto it = a.attrs.find(attr);
  if (it == a.attrs.end())
    throw SchemaError(std::string("a element without required attribute ") +
                      attr);
  const std::string& s = it->second;
  if (s.empty() ||
      s.find_first_not_of("0123456789") != std::string::npos)
    throw SchemaError(std::string("non-numeric ") + attr + " offset: " + s);
  return static_cast<Offset>(std::stoull(s));
}

}  // namespace detail

// Parses and structurally validates an export document against the schema:
// an experiment element with a data attribute containing one or more agent
// elements, each with one or more annotation elements. Throws SchemaError
// naming the first violation.
inline detail::XmlNode parse_export(const std::string& text) {
  detail::XmlParser parser(text);
  detail::XmlNode root = parser.parse_document();
  if (root.name != "experiment")
    throw SchemaError("document element must be experiment, got " + root.name);
  auto ns = root.attrs.find("xmlns");
  if (ns == root.attrs.end() || ns->second != kExportNamespace)
    throw SchemaError("experiment element must declare the export namespace");
  if (!root.attrs.count("data"))
    throw SchemaError("experiment element without required data attribute");
  if (root.children.empty())
    throw SchemaError("experiment element needs at least one agent element");
  for (const auto& agent : root.children) {
    if (agent.name != "agent")
      throw SchemaError("unexpected element inside experiment: " + agent.name);
    if (!agent.attrs.count("name"))
      throw SchemaError("agent element without required name attribute");
    if (agent.children.empty())
      throw SchemaError("agent element needs at least one a element");
    for (const auto& a : agent.children) {
      if (a.name != "a")
        throw SchemaError("unexpected element inside agent: " + a.name);
      if (!a.children.empty())
        throw SchemaError("a elements must be empty");
      Offset start = detail::parse_offset(a, "start");
      Offset end = detail::parse_offset(a, "end");
      if (start > end)
        throw SchemaError("annotation span with start > end");
      if (!a.attrs.count("label"))
        throw SchemaError("a element without required label attribute");
    }
  }
  return root;
}

// Reconstructs a blackboard from an export document. Values come from the
// object blob when present and decodable, else from parsing the label via
// the type's registered text parser. Agent ids resolve through the registry.
inline Blackboard xml_read(const std::string& text,
                           const AgentRegistry& registry) {
  detail::XmlNode root = parse_export(text);
  Blackboard bb("", root.attrs.at("data"));
  for (const auto& agent : root.children) {
    const std::string& name = agent.attrs.at("name");
    TypeTag type;
    if (name == kSeedAgent) {
      type = "String";
    } else if (registry.has(name)) {
      type = registry.entry(name).output_type;
    } else {
      throw SchemaError("agent not in registry: " + name);
    }
    std::vector<Annotation> list;
    for (size_t i = 0; i < agent.children.size(); ++i) {
      const auto& a = agent.children[i];
      Value value;
      bool decoded = false;
      if (auto obj = a.attrs.find("object"); obj != a.attrs.end()) {
        std::string bytes;
        if (!detail::base64_decode(obj->second, bytes))
          throw UnparseableValue("agent " + name + ", annotation " +
                                 std::to_string(i) + ": bad base64 object");
        if (auto v = Value::decode(type, bytes)) {
          value = *v;
          decoded = true;
        }
      }
      if (!decoded) {
        try {
          value = Value::parse(type, a.attrs.at("label"));
        } catch (const Error& e) {
          throw UnparseableValue("agent " + name + ", annotation " +
                                 std::to_string(i) + ": " + e.what());
        }
      }
      list.push_back(Annotation{value, detail::parse_offset(a, "start"),
                                detail::parse_offset(a, "end"),
                                bb.data_ref(), name});
    }
    bb.append(name, std::move(list));
  }
  return bb;
}

inline Blackboard xml_read_file(const std::filesystem::path& path,
                                const AgentRegistry& registry) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return xml_read(text, registry);
}

}  // namespace tm2
