#pragma once

#include <stdexcept>
#include <string>

namespace aoa {

/// Coarse failure class; doubles as the CLI process exit status.
enum class ErrorCategory : int {
  Config = 2,     // invalid input data or configuration
  Geometry = 3,   // degenerate or unlocalizable sensor geometry
  Numerical = 4,  // numerical failure during estimation
  Io = 5,         // file system / parse failures
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }
  int exit_status() const noexcept { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

#define AOA_DEFINE_ERROR(Name, Category)                        \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what)                      \
        : Error(ErrorCategory::Category, std::string(#Name) +   \
                                             ": " + what) {}    \
  }

AOA_DEFINE_ERROR(IdenticalPoints, Geometry);
AOA_DEFINE_ERROR(DegenerateGeometry, Geometry);
AOA_DEFINE_ERROR(RankDeficient, Geometry);
AOA_DEFINE_ERROR(SingularFisher, Geometry);
AOA_DEFINE_ERROR(TangentSingularity, Geometry);

AOA_DEFINE_ERROR(InvalidElevation, Config);
AOA_DEFINE_ERROR(LengthMismatch, Config);
AOA_DEFINE_ERROR(InsufficientSensors, Config);
AOA_DEFINE_ERROR(ZeroNoise, Config);
AOA_DEFINE_ERROR(EmptyInput, Config);
AOA_DEFINE_ERROR(ConfigError, Config);

AOA_DEFINE_ERROR(NonFinite, Numerical);
AOA_DEFINE_ERROR(DegenerateTLS, Numerical);

AOA_DEFINE_ERROR(IoError, Io);

#undef AOA_DEFINE_ERROR

}  // namespace aoa
