#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace okra {

// Thrown by parse(). position is a byte offset into the input string.
class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t position, std::string detail)
      : std::runtime_error("parse error at position " + std::to_string(position) +
                           ": " + detail),
        position(position),
        detail(std::move(detail)) {}

  std::size_t position;
  std::string detail;
};

// Malformed model or problem documents.
class model_error : public std::runtime_error {
public:
  explicit model_error(const std::string& what) : std::runtime_error(what) {}
};

// Semantic failures during evaluation: unknown atoms, violated invariants.
class eval_error : public std::runtime_error {
public:
  explicit eval_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace okra
