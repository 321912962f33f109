#pragma once

#include <stdexcept>
#include <string>

namespace casimir {

/// Trajectory parameters violate a physical constraint (names the inequality).
class ConstraintViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An inner root solve ran out of iterations.
class ConvergenceFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sigma evaluation would need more inverse iterations than the budget allows.
class PullbackOverflow : public std::runtime_error {
 public:
  PullbackOverflow(double t, long limit)
      : std::runtime_error("pullback budget of " + std::to_string(limit) +
                           " inverse steps exceeded at t=" + std::to_string(t)),
        t_(t) {}
  [[nodiscard]] double where() const noexcept { return t_; }

 private:
  double t_;
};

/// A space-time point lies outside the cavity domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// No phase-locked parameter value exists in the searched bracket.
class NotLocked : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace casimir
