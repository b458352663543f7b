#pragma once
#include <stdexcept>
#include <string>

namespace horo {

// every library failure derives from Error so the CLI can map it to an exit code
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidElementError : Error { using Error::Error; };
struct SamplingError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct PrecisionError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };
struct ResourceError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct DegenerateFitError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct OverflowError : Error { using Error::Error; };

}  // namespace horo
