#ifndef EPSH_ERRORS_HPP
#define EPSH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epsh {

// Configuration / input problems. CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg)
      : std::runtime_error("config: " + msg) {}
};

// Solver-side failures. CLI maps these to exit code 3.
class SolverError : public std::runtime_error {
public:
  SolverError(std::string code, const std::string& msg)
      : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

#define EPSH_DEFINE_SOLVER_ERROR(Name, code_str)                   \
  class Name : public SolverError {                                \
  public:                                                          \
    explicit Name(const std::string& msg)                          \
        : SolverError(code_str, msg) {}                            \
  }

EPSH_DEFINE_SOLVER_ERROR(TemperatureNonpositive, "TemperatureNonpositive");
EPSH_DEFINE_SOLVER_ERROR(BranchExhausted, "BranchExhausted");
EPSH_DEFINE_SOLVER_ERROR(BohmViolated, "BohmViolated");
EPSH_DEFINE_SOLVER_ERROR(NonMonotone, "NonMonotone");
EPSH_DEFINE_SOLVER_ERROR(WindowDegenerate, "WindowDegenerate");
EPSH_DEFINE_SOLVER_ERROR(WindowTooShort, "WindowTooShort");
EPSH_DEFINE_SOLVER_ERROR(NewtonDiverged, "NewtonDiverged");
EPSH_DEFINE_SOLVER_ERROR(BoundsViolated, "BoundsViolated");
EPSH_DEFINE_SOLVER_ERROR(NotConverged, "NotConverged");
EPSH_DEFINE_SOLVER_ERROR(SupersonicLost, "SupersonicLost");
EPSH_DEFINE_SOLVER_ERROR(OrderUnsupported, "OrderUnsupported");

#undef EPSH_DEFINE_SOLVER_ERROR

}  // namespace epsh

#endif
