#pragma once

#include <stdexcept>
#include <string>

namespace cavsim {

enum class ErrorCode {
    VariantMismatch,
    InconsistentParams,
    CableResonanceSingularity,
    ZeroCoupling,
    ChainSize,
    TimeGrid,
    NonFiniteInput,
    UndriveablePort,
    NoSteadyState,
    DimensionTooSmall,
    UndefinedLifetime,
    ConfigSchema,
    Io,
    Internal,
};

/// Stable machine-readable name ("variant-mismatch", "no-steady-state", ...).
const char* error_code_name(ErrorCode code);

/// Exception carrying a machine-readable code plus free-form context
/// (offending key, grid point, parameter values).
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message, std::string context = {})
        : std::runtime_error(message), code_(code), context_(std::move(context)) {}

    ErrorCode code() const { return code_; }
    const std::string& context() const { return context_; }

    /// Single-line JSON object {code, message, context} for stderr reporting.
    std::string to_json() const;

  private:
    ErrorCode code_;
    std::string context_;
};

}  // namespace cavsim
