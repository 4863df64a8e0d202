#pragma once

#include <stdexcept>
#include <string>

namespace mporbits {

// A mathematical precondition or postcondition failed at runtime.
class MathError : public std::runtime_error {
 public:
  MathError(const std::string& kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(kind) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mporbits
