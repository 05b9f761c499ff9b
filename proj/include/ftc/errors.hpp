#ifndef FTC_ERRORS_HPP
#define FTC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ftc {

/// Raised when an input violates the documented precondition of an operation.
/// The CLI maps it to exit status 1.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an internal invariant fails (a bug, not bad input).
/// The CLI maps it to exit status 2.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A randomized search ran out of its retry budget.
class BudgetExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

inline void ensure(bool ok, const std::string& what) {
  if (!ok) throw InvariantError(what);
}

}  // namespace detail
}  // namespace ftc

#endif  // FTC_ERRORS_HPP
