#pragma once

#include <stdexcept>
#include <string>

namespace invol {

/// Base class for all library errors.
class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// A bounded search ran out of budget. Distinct from a proof of
/// nonexistence: callers report it as "not found (budget)".
class budget_exhausted : public error {
 public:
  explicit budget_exhausted(const std::string& what) : error(what) {}
};

}  // namespace invol
