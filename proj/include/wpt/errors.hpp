#pragma once

#include <stdexcept>
#include <string>

namespace wpt {

/// Base of every error raised by the library. Each subclass maps to one
/// failure class so callers (sweeps in particular) can record a status token
/// instead of aborting.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* token() const noexcept { return "ERR_INTERNAL"; }
};

#define WPT_DEFINE_ERROR(Name, Token)                                \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(what) {}          \
    const char* token() const noexcept override { return Token; }    \
  };

WPT_DEFINE_ERROR(InvalidArgument, "ERR_INVALID_ARGUMENT")
WPT_DEFINE_ERROR(SingularNetwork, "ERR_SINGULAR_NETWORK")
WPT_DEFINE_ERROR(SingularConversion, "ERR_SINGULAR_CONVERSION")
WPT_DEFINE_ERROR(ModelDomainError, "ERR_MODEL_DOMAIN")
WPT_DEFINE_ERROR(NoSolution, "ERR_NO_SOLUTION")
WPT_DEFINE_ERROR(BiasRangeError, "ERR_BIAS_RANGE")
WPT_DEFINE_ERROR(UntunableError, "ERR_UNTUNABLE")
WPT_DEFINE_ERROR(UnmatchableError, "ERR_UNMATCHABLE")
WPT_DEFINE_ERROR(QuadratureSingularity, "ERR_QUADRATURE_SINGULARITY")
WPT_DEFINE_ERROR(ConvergenceError, "ERR_NO_CONVERGENCE")
WPT_DEFINE_ERROR(ConfigError, "ERR_CONFIG")

#undef WPT_DEFINE_ERROR

}  // namespace wpt
