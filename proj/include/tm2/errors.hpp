#pragma once

#include <stdexcept>
#include <string>

namespace tm2 {

// Base for all framework errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidSpan : Error {
  using Error::Error;
};
struct UnknownType : Error {
  using Error::Error;
};
struct TypeMismatch : Error {
  using Error::Error;
};
struct MissingInput : Error {
  using Error::Error;
};
struct AgentFailure : Error {
  using Error::Error;
};
struct TrainFailure : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct DuplicateOutputPath : Error {
  using Error::Error;
};
struct ResourceError : Error {
  using Error::Error;
};
struct InvalidConfig : Error {
  using Error::Error;
};
struct AlignmentError : Error {
  using Error::Error;
};
struct UnknownLemma : Error {
  using Error::Error;
};
struct DataMismatch : Error {
  using Error::Error;
};
struct UnknownAgent : Error {
  using Error::Error;
};
struct EmptyAxis : Error {
  using Error::Error;
};
struct SchemaError : Error {
  using Error::Error;
};
struct UnparseableValue : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace tm2
