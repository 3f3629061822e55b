#include "cavsim/errors.hpp"

#include <nlohmann/json.hpp>

namespace cavsim {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::VariantMismatch: return "variant-mismatch";
        case ErrorCode::InconsistentParams: return "inconsistent-params";
        case ErrorCode::CableResonanceSingularity: return "cable-resonance-singularity";
        case ErrorCode::ZeroCoupling: return "zero-coupling";
        case ErrorCode::ChainSize: return "chain-size";
        case ErrorCode::TimeGrid: return "time-grid";
        case ErrorCode::NonFiniteInput: return "non-finite-input";
        case ErrorCode::UndriveablePort: return "undriveable-port";
        case ErrorCode::NoSteadyState: return "no-steady-state";
        case ErrorCode::DimensionTooSmall: return "dimension-too-small";
        case ErrorCode::UndefinedLifetime: return "undefined-lifetime";
        case ErrorCode::ConfigSchema: return "config-schema";
        case ErrorCode::Io: return "io";
        case ErrorCode::Internal: return "internal";
    }
    return "internal";
}

std::string Error::to_json() const {
    nlohmann::json j;
    j["code"] = error_code_name(code_);
    j["message"] = what();
    j["context"] = context_;
    return j.dump();
}

}  // namespace cavsim
