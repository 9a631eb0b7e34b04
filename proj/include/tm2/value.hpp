#pragma once

#include <any>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <typeindex>

#include "tm2/errors.hpp"

namespace tm2 {

// Name of an annotation payload type as used in the DSL and in exports,
// e.g. "String", "Token", "Sense".
using TypeTag = std::string;

// Operations a payload type must register: a total order, a canonical text
// serialization with a parser, and optionally a portable binary encoding.
struct TypeOps {
  std::function<int(const std::any&, const std::any&)> compare;
  std::function<std::string(const std::any&)> to_text;
  std::function<std::any(const std::string&)> parse;
  std::function<std::string(const std::any&)> encode;  // optional
  std::function<std::any(const std::string&)> decode;  // optional
};

class TypeRegistry {
 public:
  static TypeRegistry& instance() {
    static TypeRegistry r;
    return r;
  }

  template <typename T>
  void add(const TypeTag& tag, TypeOps ops) {
    std::lock_guard lock(mutex_);
    ops_[tag] = std::move(ops);
    tags_[std::type_index(typeid(T))] = tag;
  }

  bool known(const TypeTag& tag) const {
    std::lock_guard lock(mutex_);
    return ops_.count(tag) > 0;
  }

  const TypeOps& ops(const TypeTag& tag) const {
    std::lock_guard lock(mutex_);
    auto it = ops_.find(tag);
    if (it == ops_.end()) throw UnknownType("unregistered payload type: " + tag);
    return it->second;
  }

  template <typename T>
  TypeTag tag_of() const {
    std::lock_guard lock(mutex_);
    auto it = tags_.find(std::type_index(typeid(T)));
    if (it == tags_.end())
      throw UnknownType(std::string("unregistered payload type: ") +
                        typeid(T).name());
    return it->second;
  }

 private:
  mutable std::mutex mutex_;
  std::map<TypeTag, TypeOps> ops_;
  std::map<std::type_index, TypeTag> tags_;
};

// A typed annotation payload. Payloads are immutable once constructed.
class Value {
 public:
  Value() = default;

  template <typename T>
  static Value of(T payload) {
    Value v;
    v.tag_ = TypeRegistry::instance().tag_of<T>();
    v.payload_ = std::make_shared<std::any>(std::move(payload));
    return v;
  }

  static Value parse(const TypeTag& tag, const std::string& text) {
    const TypeOps& ops = TypeRegistry::instance().ops(tag);
    Value v;
    v.tag_ = tag;
    v.payload_ = std::make_shared<std::any>(ops.parse(text));
    return v;
  }

  static std::optional<Value> decode(const TypeTag& tag,
                                     const std::string& bytes) {
    const TypeOps& ops = TypeRegistry::instance().ops(tag);
    if (!ops.decode) return std::nullopt;
    Value v;
    v.tag_ = tag;
    v.payload_ = std::make_shared<std::any>(ops.decode(bytes));
    return v;
  }

  const TypeTag& type() const { return tag_; }

  template <typename T>
  const T& get() const {
    const T* p = std::any_cast<T>(payload_.get());
    if (!p) throw TypeMismatch("payload is not of the requested type");
    return *p;
  }

  // Canonical text representation, used for ordering, evaluation and the
  // label attribute of the XML export.
  std::string text() const {
    return TypeRegistry::instance().ops(tag_).to_text(*payload_);
  }

  // Portable binary form, if the type registers one.
  std::optional<std::string> binary() const {
    const TypeOps& ops = TypeRegistry::instance().ops(tag_);
    if (!ops.encode) return std::nullopt;
    return ops.encode(*payload_);
  }

  int compare(const Value& other) const {
    if (tag_ != other.tag_) return tag_ < other.tag_ ? -1 : 1;
    return TypeRegistry::instance().ops(tag_).compare(*payload_,
                                                      *other.payload_);
  }

  bool operator==(const Value& other) const { return compare(other) == 0; }

 private:
  TypeTag tag_;
  std::shared_ptr<std::any> payload_;
};

}  // namespace tm2
