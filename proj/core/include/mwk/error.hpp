#pragma once

#include <stdexcept>
#include <string>

namespace mwk {

enum class ErrorKind {
  kDomain,           // argument outside an operation's domain
  kDimension,        // mismatched or unsupported ambient dimension
  kDegenerate,       // coincident / affinely dependent input
  kGeneralPosition,  // measure-zero configuration hit during construction
  kInfeasible,       // simplex violates the inscribed-maximizer conditions
  kSampling,         // Monte Carlo estimator could not be formed
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mwk
