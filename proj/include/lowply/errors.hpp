#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lowply {

// Malformed input text (tree files, drawing files, certificates).
class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, cycle, disconnected, duplicate_parent, unknown_root };

  ParseError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// An algorithm was called on input outside its contract (degree too high,
// bad configuration). Carries the offending vertex when there is one.
class PreconditionError : public std::invalid_argument {
 public:
  static constexpr std::int64_t kNoVertex = -1;

  explicit PreconditionError(const std::string& what, std::int64_t vertex = kNoVertex)
      : std::invalid_argument(what), vertex_(vertex) {}

  std::int64_t vertex() const noexcept { return vertex_; }

 private:
  std::int64_t vertex_;
};

// A tree and a drawing that should describe the same graph do not.
class MismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured resource ceiling (e.g. maximum generated vertex count) was hit.
class ResourceLimitError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace lowply
