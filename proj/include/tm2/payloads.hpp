#pragma once

#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "tm2/annotation.hpp"
#include "tm2/detail/text.hpp"
#include "tm2/errors.hpp"
#include "tm2/value.hpp"

namespace tm2 {

// Built-in payload types. "String" and "Integer" map to std::string and
// int64_t directly.

struct Token {
  std::string form;
  auto operator<=>(const Token&) const = default;
};

struct Sense {
  std::string label;
  std::string lemma;        // optional
  std::string instance_id;  // optional
  auto operator<=>(const Sense&) const = default;
};

struct Frequency {
  std::string form;
  uint64_t count = 0;
  auto operator<=>(const Frequency&) const = default;
};

struct Context {
  std::string target;  // ambiguous surface form
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::string lemma;
  std::string instance_id;
  Offset target_start = 0;
  Offset target_end = 0;
  auto operator<=>(const Context&) const = default;
};

struct FeatureVector {
  std::vector<double> values;
  std::string lemma;
  std::string instance_id;
  size_t dim() const { return values.size(); }
  auto operator<=>(const FeatureVector&) const = default;
};

struct Ambiguity {
  Context context;
  Sense correct_sense;
  auto operator<=>(const Ambiguity&) const = default;
};

inline constexpr const char* kUnknownSense = "__unknown__";

namespace detail {

template <typename T>
int cmp3(const T& a, const T& b) {
  if (a < b) return -1;
  if (b < a) return 1;
  return 0;
}

template <typename T>
TypeOps ordered_ops(std::function<std::string(const T&)> to_text,
                    std::function<T(const std::string&)> parse,
                    std::function<std::string(const T&)> encode = nullptr,
                    std::function<T(const std::string&)> decode = nullptr) {
  TypeOps ops;
  ops.compare = [](const std::any& a, const std::any& b) {
    return cmp3(*std::any_cast<T>(&a), *std::any_cast<T>(&b));
  };
  ops.to_text = [to_text](const std::any& a) {
    return to_text(*std::any_cast<T>(&a));
  };
  ops.parse = [parse](const std::string& s) { return std::any(parse(s)); };
  if (encode)
    ops.encode = [encode](const std::any& a) {
      return encode(*std::any_cast<T>(&a));
    };
  if (decode)
    ops.decode = [decode](const std::string& s) { return std::any(decode(s)); };
  return ops;
}

inline std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline double parse_double(const std::string& s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw UnparseableValue("not a number: " + s);
  return v;
}

inline uint64_t parse_u64(const std::string& s) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw UnparseableValue("not a count: " + s);
  return v;
}

// Length-prefixed binary framing for the portable object encoding.
inline void put_str(std::string& out, const std::string& s) {
  uint32_t n = static_cast<uint32_t>(s.size());
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((n >> (8 * i)) & 0xFF));
  out += s;
}

inline std::string get_str(const std::string& in, size_t& pos) {
  if (pos + 4 > in.size()) throw UnparseableValue("truncated object data");
  uint32_t n = 0;
  for (int i = 0; i < 4; ++i)
    n |= static_cast<uint32_t>(static_cast<unsigned char>(in[pos + i]))
         << (8 * i);
  pos += 4;
  if (pos + n > in.size()) throw UnparseableValue("truncated object data");
  std::string s = in.substr(pos, n);
  pos += n;
  return s;
}

inline std::string context_text(const Context& c) {
  std::string left, right;
  for (size_t i = 0; i < c.left.size(); ++i) {
    if (i) left.push_back(' ');
    left += c.left[i];
  }
  for (size_t i = 0; i < c.right.size(); ++i) {
    if (i) right.push_back(' ');
    right += c.right[i];
  }
  return join_fields({c.target, c.lemma, c.instance_id,
                      std::to_string(c.target_start),
                      std::to_string(c.target_end), left, right});
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

inline Context parse_context(const std::string& s) {
  auto f = split_fields(s);
  if (f.size() != 7) throw UnparseableValue("bad Context text: " + s);
  Context c;
  c.target = f[0];
  c.lemma = f[1];
  c.instance_id = f[2];
  c.target_start = parse_u64(f[3]);
  c.target_end = parse_u64(f[4]);
  c.left = split_ws(f[5]);
  c.right = split_ws(f[6]);
  return c;
}

inline std::string encode_context(const Context& c) {
  std::string out;
  put_str(out, c.target);
  put_str(out, c.lemma);
  put_str(out, c.instance_id);
  put_str(out, std::to_string(c.target_start));
  put_str(out, std::to_string(c.target_end));
  put_str(out, std::to_string(c.left.size()));
  for (const auto& t : c.left) put_str(out, t);
  put_str(out, std::to_string(c.right.size()));
  for (const auto& t : c.right) put_str(out, t);
  return out;
}

inline Context decode_context(const std::string& in) {
  size_t pos = 0;
  Context c;
  c.target = get_str(in, pos);
  c.lemma = get_str(in, pos);
  c.instance_id = get_str(in, pos);
  c.target_start = parse_u64(get_str(in, pos));
  c.target_end = parse_u64(get_str(in, pos));
  size_t nl = parse_u64(get_str(in, pos));
  for (size_t i = 0; i < nl; ++i) c.left.push_back(get_str(in, pos));
  size_t nr = parse_u64(get_str(in, pos));
  for (size_t i = 0; i < nr; ++i) c.right.push_back(get_str(in, pos));
  return c;
}

inline void register_default_types() {
  auto& reg = TypeRegistry::instance();

  reg.add<std::string>(
      "String",
      ordered_ops<std::string>([](const std::string& s) { return s; },
                               [](const std::string& s) { return s; }));

  reg.add<int64_t>("Integer",
                   ordered_ops<int64_t>(
                       [](const int64_t& v) { return std::to_string(v); },
                       [](const std::string& s) -> int64_t {
                         int64_t v = 0;
                         auto [p, ec] =
                             std::from_chars(s.data(), s.data() + s.size(), v);
                         if (ec != std::errc() || p != s.data() + s.size())
                           throw UnparseableValue("not an integer: " + s);
                         return v;
                       }));

  reg.add<Token>("Token", ordered_ops<Token>(
                              [](const Token& t) { return t.form; },
                              [](const std::string& s) { return Token{s}; }));

  // The canonical Sense text is the label alone, so hand-written gold files
  // and generically compared results agree; lemma and instance survive via
  // the binary object encoding.
  reg.add<Sense>(
      "Sense",
      ordered_ops<Sense>(
          [](const Sense& s) { return s.label; },
          [](const std::string& s) {
            return Sense{s.empty() ? kUnknownSense : s, "", ""};
          },
          [](const Sense& s) {
            std::string out;
            put_str(out, s.label);
            put_str(out, s.lemma);
            put_str(out, s.instance_id);
            return out;
          },
          [](const std::string& in) {
            size_t pos = 0;
            Sense s;
            s.label = get_str(in, pos);
            s.lemma = get_str(in, pos);
            s.instance_id = get_str(in, pos);
            return s;
          }));

  reg.add<Frequency>(
      "Frequency",
      ordered_ops<Frequency>(
          [](const Frequency& f) {
            return f.form + ":" + std::to_string(f.count);
          },
          [](const std::string& s) {
            auto pos = s.rfind(':');
            if (pos == std::string::npos)
              throw UnparseableValue("bad Frequency text: " + s);
            return Frequency{s.substr(0, pos), parse_u64(s.substr(pos + 1))};
          }));

  reg.add<Context>("Context",
                   ordered_ops<Context>(context_text, parse_context,
                                        encode_context, decode_context));

  reg.add<FeatureVector>(
      "FeatureVector",
      ordered_ops<FeatureVector>(
          [](const FeatureVector& v) {
            std::string csv;
            for (size_t i = 0; i < v.values.size(); ++i) {
              if (i) csv.push_back(',');
              csv += format_double(v.values[i]);
            }
            return join_fields({v.lemma, v.instance_id, csv});
          },
          [](const std::string& s) {
            auto f = split_fields(s);
            if (f.size() != 3)
              throw UnparseableValue("bad FeatureVector text: " + s);
            FeatureVector v;
            v.lemma = f[0];
            v.instance_id = f[1];
            std::string cell;
            std::istringstream in(f[2]);
            while (std::getline(in, cell, ','))
              v.values.push_back(parse_double(cell));
            return v;
          }));

  reg.add<Ambiguity>(
      "Ambiguity",
      ordered_ops<Ambiguity>(
          [](const Ambiguity& a) {
            return join_fields({context_text(a.context), a.correct_sense.label});
          },
          [](const std::string& s) {
            auto f = split_fields(s);
            if (f.size() != 2) throw UnparseableValue("bad Ambiguity text: " + s);
            return Ambiguity{parse_context(f[0]), Sense{f[1], "", ""}};
          }));
}

inline const bool default_types_registered = (register_default_types(), true);

}  // namespace detail

}  // namespace tm2
