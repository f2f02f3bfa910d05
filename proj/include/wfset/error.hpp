#ifndef WFSET_ERROR_HPP
#define WFSET_ERROR_HPP

#include <stdexcept>
#include <string>

namespace wfset {

enum class ErrorKind {
  InvalidArgument,
  InvalidPair,        // lattice pair beyond critical density
  NotNested,          // cones without a gap
  PainlessViolated,   // window support too wide for the frequency step
  IllConditioned,     // partition of unity lower bound too small
  WindowOverflow,     // window does not fit the sample box / segment
  OracleUnavailable,
  InsufficientRange,  // not enough dynamic range for a fit
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace wfset

#endif  // WFSET_ERROR_HPP
