#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace ged {

// Argument outside an operation's documented domain.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// An iterative scheme failed to converge. Carries the last two estimates
// so the caller can judge the size of the disagreement.
class numeric_failure : public std::runtime_error {
 public:
  explicit numeric_failure(const std::string& what,
                           double estimate_a = std::numeric_limits<double>::quiet_NaN(),
                           double estimate_b = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), estimate_a_(estimate_a), estimate_b_(estimate_b) {}

  double estimate_a() const noexcept { return estimate_a_; }
  double estimate_b() const noexcept { return estimate_b_; }

 private:
  double estimate_a_;
  double estimate_b_;
};

}  // namespace ged
