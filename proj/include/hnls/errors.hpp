#pragma once

#include <stdexcept>
#include <string>

namespace hnls {

/// Error taxonomy. Each class maps to a distinct CLI exit code (see tools/).
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual const char* kind() const noexcept { return "error"; }
  virtual int exit_code() const noexcept { return 1; }
};

#define HNLS_DEFINE_ERROR(Name, kind_str, code)                        \
  struct Name : Error {                                                \
    explicit Name(const std::string& msg) : Error(msg) {}              \
    const char* kind() const noexcept override { return kind_str; }    \
    int exit_code() const noexcept override { return code; }           \
  }

HNLS_DEFINE_ERROR(ConfigError, "config", 2);
HNLS_DEFINE_ERROR(PhysicsError, "physics-domain", 3);
HNLS_DEFINE_ERROR(UsageError, "usage", 4);
HNLS_DEFINE_ERROR(DomainError, "domain", 5);
HNLS_DEFINE_ERROR(SingularModelError, "singular-model", 6);
HNLS_DEFINE_ERROR(ResolutionError, "resolution", 7);
HNLS_DEFINE_ERROR(ConvergenceError, "convergence", 8);
HNLS_DEFINE_ERROR(OracleError, "oracle", 9);
HNLS_DEFINE_ERROR(CertificationError, "certification", 10);
HNLS_DEFINE_ERROR(IntegratorError, "integrator", 11);
HNLS_DEFINE_ERROR(StepError, "step", 12);
HNLS_DEFINE_ERROR(DataAvailabilityError, "data-availability", 13);
HNLS_DEFINE_ERROR(DependencyError, "dependency", 14);
HNLS_DEFINE_ERROR(IoError, "io", 15);

#undef HNLS_DEFINE_ERROR

} // namespace hnls
