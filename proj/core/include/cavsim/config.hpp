#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cavsim/common.hpp"
#include "cavsim/dynamics.hpp"
#include "cavsim/model.hpp"

namespace cavsim {

enum class UnitsFlag { RadPerS, HzAngular, HzCyclic };
enum class SystemKind { Direct, Cable, Chain };
enum class Protocol { FreeDecay, Driven, SteadyDecay, Lindblad };
enum class OutputFormat { Csv, Json };

struct TimeGridConfig {
    double t_max = 0.0;  ///< seconds; 0 = auto (8 bare 1/e times)
    int samples = 2000;
    bool operator==(const TimeGridConfig&) const = default;
};

struct SweepAxisConfig {
    std::string parameter;
    std::vector<double> values;
    bool operator==(const SweepAxisConfig&) const = default;
};

struct SweepConfig {
    std::vector<SweepAxisConfig> axes;
    int target_mode = 1;
    double base_delta_phi = 0.0;
    bool operator==(const SweepConfig&) const = default;
};

struct LindbladConfig {
    int dim_per_mode = 10;
    double n_thermal = 0.0;
    double leakage_tol = 1e-5;
    bool operator==(const LindbladConfig&) const = default;
};

struct ChainConfig {
    int n = 2;
    double g = 0.0;
    double kappa_i = 0.0;
    double kappa_e_first = 0.0;
    double kappa_e_last = 0.0;
    double omega = 0.0;
    std::vector<int> n_values;  ///< chain-scaling sizes; defaults to {n}

    ChainSpec to_spec(int size) const;
    bool operator==(const ChainConfig&) const = default;
};

struct OutputConfig {
    std::string path = "out.csv";
    OutputFormat format = OutputFormat::Csv;
    bool operator==(const OutputConfig&) const = default;
};

/// Fully resolved experiment description: units normalized to rad/s,
/// defaults applied. Produced by parse_config, reproduced by emit_config.
struct ExperimentConfig {
    SystemKind system = SystemKind::Direct;
    std::vector<CavityParams> cavities;
    std::optional<CouplingSpec> coupling;
    std::optional<ChainConfig> chain;
    double frame_frequency = 0.0;
    Protocol protocol = Protocol::FreeDecay;
    std::optional<DriveSpec> drive;
    std::optional<std::vector<cplx>> initial_amplitudes;
    int observe_port = -1;  ///< steady_decay observation port; resolved to a mode index
    std::optional<SweepConfig> sweep;
    std::optional<LindbladConfig> lindblad;
    TimeGridConfig time_grid;
    OutputConfig output;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Parse and validate a JSON experiment document. Unknown keys are
/// rejected; every diagnostic names the offending key. Angles accept plain
/// radians or strings like "0.1pi"; rates are converted to rad/s according
/// to the mandatory "units" flag.
ExperimentConfig parse_config(const std::string& text);

/// Canonical resolved form (units rad_per_s, defaults materialized);
/// parse_config(emit_config(c)) == c for every valid config.
std::string emit_config(const ExperimentConfig& config);

/// "0.25pi" / "-pi" / plain numeric string -> radians.
double parse_angle_string(const std::string& text);

const char* system_kind_name(SystemKind kind);
const char* protocol_name(Protocol protocol);
const char* output_format_name(OutputFormat format);

}  // namespace cavsim
