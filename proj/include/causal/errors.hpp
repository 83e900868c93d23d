#pragma once

#include <stdexcept>
#include <string>

namespace causal {

/// Raised when stream or expression dimensions do not line up.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a partial operation (stream inverse) is applied outside its
/// domain. `node()` identifies the expression node that failed, when known.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what, const void* node = nullptr)
      : std::domain_error(what), node_(node) {}

  const void* node() const noexcept { return node_; }

 private:
  const void* node_;
};

}  // namespace causal
