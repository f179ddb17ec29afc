#pragma once

#include <stdexcept>
#include <string>

namespace mdc {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Iterative solver gave up; what() carries the last residual.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

}  // namespace mdc
