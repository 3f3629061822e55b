#include "cavsim/config.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cavsim/errors.hpp"

namespace cavsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message, const std::string& where) {
    throw Error(ErrorCode::ConfigSchema, message, where);
}

std::string join(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        if (allowed.find(item.key()) == allowed.end()) {
            fail("unknown key \"" + item.key() + "\"", where);
        }
    }
}

const json& require_key(const json& obj, const std::string& key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        fail("missing required key \"" + key + "\"", where);
    }
    return *it;
}

double as_number(const json& value, const std::string& where) {
    if (!value.is_number()) {
        fail("expected a number", where);
    }
    const double x = value.get<double>();
    if (!std::isfinite(x)) {
        fail("value must be finite", where);
    }
    return x;
}

int as_int(const json& value, const std::string& where) {
    if (!value.is_number_integer()) {
        fail("expected an integer", where);
    }
    return value.get<int>();
}

bool as_bool(const json& value, const std::string& where) {
    if (!value.is_boolean()) {
        fail("expected a boolean", where);
    }
    return value.get<bool>();
}

std::string as_string(const json& value, const std::string& where) {
    if (!value.is_string()) {
        fail("expected a string", where);
    }
    return value.get<std::string>();
}

double as_angle(const json& value, const std::string& where) {
    if (value.is_string()) {
        try {
            return parse_angle_string(value.get<std::string>());
        } catch (const Error& e) {
            fail(e.what(), where);
        }
    }
    return as_number(value, where);
}

/// Drive/initial amplitudes: number, [re, im], or {"abs": ..., "phase": ...}.
cplx as_amplitude(const json& value, const std::string& where) {
    if (value.is_number()) {
        return cplx(value.get<double>(), 0.0);
    }
    if (value.is_array()) {
        if (value.size() != 2) {
            fail("complex amplitude array must be [re, im]", where);
        }
        return cplx(as_number(value[0], where + "[0]"), as_number(value[1], where + "[1]"));
    }
    if (value.is_object()) {
        reject_unknown_keys(value, {"abs", "phase"}, where);
        const double mag = as_number(require_key(value, "abs", where), join(where, "abs"));
        const double phase = as_angle(require_key(value, "phase", where), join(where, "phase"));
        return std::polar(mag, phase);
    }
    fail("expected a number, [re, im], or {abs, phase}", where);
}

UnitsFlag parse_units(const json& root) {
    const std::string where = "units";
    const std::string value = as_string(require_key(root, "units", ""), where);
    if (value == "rad_per_s") {
        return UnitsFlag::RadPerS;
    }
    if (value == "hz_angular") {
        return UnitsFlag::HzAngular;
    }
    if (value == "hz_cyclic") {
        return UnitsFlag::HzCyclic;
    }
    fail("units must be one of rad_per_s, hz_angular, hz_cyclic", where);
}

double units_factor(UnitsFlag units) {
    return units == UnitsFlag::HzCyclic ? two_pi : 1.0;
}

CavityParams parse_cavity(const json& obj, double factor, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected a cavity object", where);
    }
    reject_unknown_keys(obj, {"omega", "kappa_i", "kappa_e", "gamma"}, where);
    CavityParams cavity;
    cavity.omega = factor * as_number(require_key(obj, "omega", where), join(where, "omega"));
    if (obj.contains("kappa_i")) {
        cavity.kappa_i = factor * as_number(obj["kappa_i"], join(where, "kappa_i"));
    }
    if (obj.contains("kappa_e")) {
        cavity.kappa_e = factor * as_number(obj["kappa_e"], join(where, "kappa_e"));
    }
    if (obj.contains("gamma")) {
        cavity.gamma = factor * as_number(obj["gamma"], join(where, "gamma"));
    }
    cavity.validate();
    return cavity;
}

CouplingSpec parse_coupling(const json& obj, double factor, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected a coupling object", where);
    }
    const std::string type = as_string(require_key(obj, "type", where), join(where, "type"));
    if (type == "direct") {
        reject_unknown_keys(obj, {"type", "g"}, where);
        return CouplingSpec::direct(factor *
                                    as_number(require_key(obj, "g", where), join(where, "g")));
    }
    if (type == "cable") {
        reject_unknown_keys(obj, {"type", "theta", "gamma0_l0"}, where);
        const double theta = as_angle(require_key(obj, "theta", where), join(where, "theta"));
        const double gamma0_l0 =
            as_number(require_key(obj, "gamma0_l0", where), join(where, "gamma0_l0"));
        return CouplingSpec::cable(theta, gamma0_l0);
    }
    fail("coupling type must be direct or cable", join(where, "type"));
}

ChainConfig parse_chain(const json& obj, double factor, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected a chain object", where);
    }
    reject_unknown_keys(
        obj, {"n", "g", "kappa_i", "kappa_e_first", "kappa_e_last", "omega", "n_values"}, where);
    ChainConfig chain;
    chain.n = as_int(require_key(obj, "n", where), join(where, "n"));
    chain.g = factor * as_number(require_key(obj, "g", where), join(where, "g"));
    chain.kappa_i = factor * as_number(require_key(obj, "kappa_i", where), join(where, "kappa_i"));
    chain.kappa_e_first =
        factor * as_number(require_key(obj, "kappa_e_first", where), join(where, "kappa_e_first"));
    chain.kappa_e_last =
        factor * as_number(require_key(obj, "kappa_e_last", where), join(where, "kappa_e_last"));
    chain.omega = factor * as_number(require_key(obj, "omega", where), join(where, "omega"));
    if (obj.contains("n_values")) {
        if (!obj["n_values"].is_array() || obj["n_values"].empty()) {
            fail("n_values must be a nonempty array of integers", join(where, "n_values"));
        }
        for (const auto& v : obj["n_values"]) {
            chain.n_values.push_back(as_int(v, join(where, "n_values")));
        }
    } else {
        chain.n_values = {chain.n};
    }
    chain.to_spec(chain.n);  // validates
    return chain;
}

bool is_angle_parameter(const std::string& parameter) {
    return parameter == "delta_phi" || parameter == "theta";
}

bool is_rate_parameter(const std::string& parameter) {
    return parameter == "g" || parameter == "gamma1" || parameter == "gamma2";
}

SweepAxisConfig parse_axis(const json& obj, double factor, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected an axis object", where);
    }
    SweepAxisConfig axis;
    axis.parameter = as_string(require_key(obj, "parameter", where), join(where, "parameter"));
    const bool angle = is_angle_parameter(axis.parameter);
    const double scale = is_rate_parameter(axis.parameter) ? factor : 1.0;

    auto value_of = [&](const json& v, const std::string& w) {
        return angle ? as_angle(v, w) : scale * as_number(v, w);
    };

    if (obj.contains("values")) {
        reject_unknown_keys(obj, {"parameter", "values"}, where);
        if (!obj["values"].is_array() || obj["values"].empty()) {
            fail("axis values must be a nonempty array", join(where, "values"));
        }
        for (const auto& v : obj["values"]) {
            axis.values.push_back(value_of(v, join(where, "values")));
        }
        return axis;
    }

    reject_unknown_keys(obj, {"parameter", "start", "stop", "count", "endpoint"}, where);
    const double start = value_of(require_key(obj, "start", where), join(where, "start"));
    const double stop = value_of(require_key(obj, "stop", where), join(where, "stop"));
    const int count = as_int(require_key(obj, "count", where), join(where, "count"));
    const bool endpoint = obj.contains("endpoint")
                              ? as_bool(obj["endpoint"], join(where, "endpoint"))
                              : true;
    if (count < 1) {
        fail("axis count must be positive", join(where, "count"));
    }
    const int denom = endpoint ? std::max(count - 1, 1) : count;
    for (int i = 0; i < count; ++i) {
        axis.values.push_back(start + (stop - start) * static_cast<double>(i) / denom);
    }
    return axis;
}

SweepConfig parse_sweep(const json& obj, double factor, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected a sweep object", where);
    }
    reject_unknown_keys(obj, {"axes", "target_mode", "base_delta_phi"}, where);
    SweepConfig sweep;
    const json& axes = require_key(obj, "axes", where);
    if (!axes.is_array() || axes.empty() || axes.size() > 2) {
        fail("sweep needs one or two axes", join(where, "axes"));
    }
    for (std::size_t i = 0; i < axes.size(); ++i) {
        sweep.axes.push_back(
            parse_axis(axes[i], factor, join(where, "axes[" + std::to_string(i) + "]")));
    }
    if (obj.contains("target_mode")) {
        sweep.target_mode = as_int(obj["target_mode"], join(where, "target_mode"));
    }
    if (obj.contains("base_delta_phi")) {
        sweep.base_delta_phi = as_angle(obj["base_delta_phi"], join(where, "base_delta_phi"));
    }
    return sweep;
}

LindbladConfig parse_lindblad(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected a lindblad object", where);
    }
    reject_unknown_keys(obj, {"dim_per_mode", "n_thermal", "leakage_tol"}, where);
    LindbladConfig lindblad;
    if (obj.contains("dim_per_mode")) {
        lindblad.dim_per_mode = as_int(obj["dim_per_mode"], join(where, "dim_per_mode"));
    }
    if (obj.contains("n_thermal")) {
        lindblad.n_thermal = as_number(obj["n_thermal"], join(where, "n_thermal"));
    }
    if (obj.contains("leakage_tol")) {
        lindblad.leakage_tol = as_number(obj["leakage_tol"], join(where, "leakage_tol"));
    }
    return lindblad;
}

TimeGridConfig parse_time_grid(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected a time_grid object", where);
    }
    reject_unknown_keys(obj, {"t_max", "samples"}, where);
    TimeGridConfig grid;
    if (obj.contains("t_max")) {
        grid.t_max = as_number(obj["t_max"], join(where, "t_max"));
        if (grid.t_max < 0.0) {
            fail("t_max must be nonnegative (0 means auto)", join(where, "t_max"));
        }
    }
    if (obj.contains("samples")) {
        grid.samples = as_int(obj["samples"], join(where, "samples"));
        if (grid.samples < 2) {
            fail("samples must be at least 2", join(where, "samples"));
        }
    }
    return grid;
}

OutputConfig parse_output(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        fail("expected an output object", where);
    }
    reject_unknown_keys(obj, {"path", "format"}, where);
    OutputConfig output;
    if (obj.contains("path")) {
        output.path = as_string(obj["path"], join(where, "path"));
        if (output.path.ends_with(".json")) {
            output.format = OutputFormat::Json;
        }
    }
    if (obj.contains("format")) {
        const std::string format = as_string(obj["format"], join(where, "format"));
        if (format == "csv") {
            output.format = OutputFormat::Csv;
        } else if (format == "json") {
            output.format = OutputFormat::Json;
        } else {
            fail("format must be csv or json", join(where, "format"));
        }
    }
    return output;
}

}  // namespace

ChainSpec ChainConfig::to_spec(int size) const {
    return ChainSpec::uniform(size, g, kappa_i, kappa_e_first, kappa_e_last, omega);
}

double parse_angle_string(const std::string& text) {
    std::string body = text;
    // trim
    while (!body.empty() && body.front() == ' ') {
        body.erase(body.begin());
    }
    while (!body.empty() && body.back() == ' ') {
        body.pop_back();
    }
    double scale = 1.0;
    if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
        scale = pi;
        body = body.substr(0, body.size() - 2);
        if (body.empty() || body == "+") {
            return pi;
        }
        if (body == "-") {
            return -pi;
        }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), value);
    if (ec != std::errc() || ptr != body.data() + body.size()) {
        throw Error(ErrorCode::ConfigSchema, "cannot parse angle \"" + text + "\"");
    }
    return value * scale;
}

ExperimentConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ConfigSchema, std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        fail("config must be a JSON object", "");
    }
    reject_unknown_keys(root,
                        {"units", "system", "cavities", "coupling", "chain", "frame_frequency",
                         "protocol", "drive", "initial_state", "observe_port", "sweep", "lindblad",
                         "time_grid", "output"},
                        "");

    const UnitsFlag units = parse_units(root);
    const double factor = units_factor(units);

    ExperimentConfig config;

    const std::string system = as_string(require_key(root, "system", ""), "system");
    if (system == "direct") {
        config.system = SystemKind::Direct;
    } else if (system == "cable") {
        config.system = SystemKind::Cable;
    } else if (system == "chain") {
        config.system = SystemKind::Chain;
    } else {
        fail("system must be direct, cable, or chain", "system");
    }

    const std::string protocol = as_string(require_key(root, "protocol", ""), "protocol");
    if (protocol == "free_decay") {
        config.protocol = Protocol::FreeDecay;
    } else if (protocol == "driven") {
        config.protocol = Protocol::Driven;
    } else if (protocol == "steady_decay") {
        config.protocol = Protocol::SteadyDecay;
    } else if (protocol == "lindblad") {
        config.protocol = Protocol::Lindblad;
    } else {
        fail("protocol must be free_decay, driven, steady_decay, or lindblad", "protocol");
    }

    // system description
    if (config.system == SystemKind::Chain) {
        if (root.contains("cavities") || root.contains("coupling")) {
            fail("chain systems are described by the chain block", "system");
        }
        config.chain = parse_chain(require_key(root, "chain", ""), factor, "chain");
    } else {
        if (root.contains("chain")) {
            fail("the chain block is only valid for system=chain", "chain");
        }
        const json& cavities = require_key(root, "cavities", "");
        if (!cavities.is_array() || cavities.empty() || cavities.size() > 2) {
            fail("cavities must list one or two cavity objects", "cavities");
        }
        for (std::size_t i = 0; i < cavities.size(); ++i) {
            config.cavities.push_back(
                parse_cavity(cavities[i], factor, "cavities[" + std::to_string(i) + "]"));
        }
        if (config.cavities.size() == 1) {
            if (root.contains("coupling")) {
                fail("a single-cavity system has no coupling", "coupling");
            }
            if (config.system == SystemKind::Cable) {
                fail("cable systems need two cavities", "cavities");
            }
        } else {
            config.coupling = parse_coupling(require_key(root, "coupling", ""), factor, "coupling");
            if (config.system == SystemKind::Direct && !config.coupling->is_direct()) {
                fail("system=direct needs a direct coupling", "coupling.type");
            }
            if (config.system == SystemKind::Cable && !config.coupling->is_cable()) {
                fail("system=cable needs a cable coupling", "coupling.type");
            }
        }
    }

    // protocol-dependent blocks: exactly one of initial_state / drive
    const bool has_sweep = root.contains("sweep");
    const bool wants_initial =
        config.protocol == Protocol::FreeDecay || config.protocol == Protocol::Lindblad;
    if (wants_initial && has_sweep) {
        if (root.contains("drive")) {
            fail("sweeps evolve freely; remove the drive block", "drive");
        }
        if (root.contains("initial_state")) {
            fail("sweeps build their own initial states; remove initial_state", "initial_state");
        }
    } else if (wants_initial) {
        if (root.contains("drive")) {
            fail("protocol " + std::string(protocol_name(config.protocol)) +
                     " evolves freely; remove the drive block",
                 "drive");
        }
        const json& init = require_key(root, "initial_state", "");
        if (!init.is_object()) {
            fail("expected an initial_state object", "initial_state");
        }
        reject_unknown_keys(init, {"amplitudes"}, "initial_state");
        const json& amplitudes = require_key(init, "amplitudes", "initial_state");
        if (!amplitudes.is_array() || amplitudes.empty()) {
            fail("amplitudes must be a nonempty array", "initial_state.amplitudes");
        }
        std::vector<cplx> values;
        for (std::size_t i = 0; i < amplitudes.size(); ++i) {
            values.push_back(as_amplitude(amplitudes[i],
                                          "initial_state.amplitudes[" + std::to_string(i) + "]"));
        }
        config.initial_amplitudes = std::move(values);
    } else {
        if (root.contains("initial_state")) {
            fail("protocol " + std::string(protocol_name(config.protocol)) +
                     " derives its own initial state; remove initial_state",
                 "initial_state");
        }
        const json& drive = require_key(root, "drive", "");
        if (!drive.is_object()) {
            fail("expected a drive object", "drive");
        }
        reject_unknown_keys(drive, {"port", "amplitude", "frequency"}, "drive");
        DriveSpec spec;
        spec.port = as_int(require_key(drive, "port", "drive"), "drive.port");
        spec.amplitude = as_amplitude(require_key(drive, "amplitude", "drive"), "drive.amplitude");
        spec.frequency =
            factor * as_number(require_key(drive, "frequency", "drive"), "drive.frequency");
        config.drive = spec;
    }

    if (root.contains("observe_port")) {
        if (config.protocol != Protocol::SteadyDecay) {
            fail("observe_port applies to the steady_decay protocol only", "observe_port");
        }
        config.observe_port = as_int(root["observe_port"], "observe_port");
    }

    // frame: drive frequency when driven, first mode frequency otherwise
    if (root.contains("frame_frequency")) {
        config.frame_frequency = factor * as_number(root["frame_frequency"], "frame_frequency");
        if (config.drive.has_value() &&
            std::abs(config.drive->frequency - config.frame_frequency) >
                1e-9 * std::max(1.0, std::abs(config.frame_frequency))) {
            fail("frame_frequency must match the drive frequency", "frame_frequency");
        }
    } else if (config.drive.has_value()) {
        config.frame_frequency = config.drive->frequency;
    } else if (config.system == SystemKind::Chain) {
        config.frame_frequency = config.chain->omega;
    } else {
        config.frame_frequency = config.cavities.front().omega;
    }

    if (has_sweep) {
        if (config.protocol == Protocol::Driven || config.protocol == Protocol::SteadyDecay) {
            fail("sweeps run the free-decay or lindblad protocols", "sweep");
        }
        config.sweep = parse_sweep(root["sweep"], factor, "sweep");
        for (const auto& axis : config.sweep->axes) {
            if (axis.parameter == "n" && config.system != SystemKind::Chain) {
                fail("the n axis needs system=chain", "sweep.axes");
            }
            if (axis.parameter != "n" && config.system == SystemKind::Chain) {
                fail("chain systems sweep over n only", "sweep.axes");
            }
        }
        if (config.protocol == Protocol::Lindblad) {
            for (const auto& axis : config.sweep->axes) {
                if (axis.parameter != "delta_phi" && axis.parameter != "g") {
                    fail("lindblad sweeps cover the delta_phi and g axes", "sweep.axes");
                }
            }
        }
    }

    if (config.protocol == Protocol::Lindblad) {
        if (config.system != SystemKind::Direct) {
            fail("the quantum model covers directly coupled systems", "protocol");
        }
        config.lindblad =
            root.contains("lindblad") ? parse_lindblad(root["lindblad"], "lindblad") : LindbladConfig{};
    } else if (root.contains("lindblad")) {
        fail("the lindblad block applies to protocol=lindblad only", "lindblad");
    }

    if (root.contains("time_grid")) {
        config.time_grid = parse_time_grid(root["time_grid"], "time_grid");
    }
    if (root.contains("output")) {
        config.output = parse_output(root["output"], "output");
    }

    // resolved defaults
    if (config.protocol == Protocol::SteadyDecay && config.observe_port < 0) {
        config.observe_port =
            config.system == SystemKind::Chain ? config.chain->n - 1
                                               : static_cast<int>(config.cavities.size()) - 1;
    }

    // cross checks that need the whole picture
    if (config.initial_amplitudes.has_value() && config.protocol != Protocol::Lindblad) {
        const std::size_t dim = config.system == SystemKind::Chain
                                    ? static_cast<std::size_t>(config.chain->n)
                                    : config.cavities.size();
        if (config.initial_amplitudes->size() != dim) {
            fail("initial_state.amplitudes size must match the mode count",
                 "initial_state.amplitudes");
        }
    }
    if (config.protocol == Protocol::Lindblad && config.initial_amplitudes.has_value() &&
        config.initial_amplitudes->size() != config.cavities.size()) {
        fail("initial_state.amplitudes size must match the cavity count",
             "initial_state.amplitudes");
    }

    return config;
}

namespace {

json amplitude_to_json(const cplx& value) {
    return json::array({value.real(), value.imag()});
}

}  // namespace

std::string emit_config(const ExperimentConfig& config) {
    json root;
    root["units"] = "rad_per_s";
    root["system"] = system_kind_name(config.system);
    root["protocol"] = protocol_name(config.protocol);
    root["frame_frequency"] = config.frame_frequency;

    if (config.system == SystemKind::Chain) {
        json chain;
        chain["n"] = config.chain->n;
        chain["g"] = config.chain->g;
        chain["kappa_i"] = config.chain->kappa_i;
        chain["kappa_e_first"] = config.chain->kappa_e_first;
        chain["kappa_e_last"] = config.chain->kappa_e_last;
        chain["omega"] = config.chain->omega;
        chain["n_values"] = config.chain->n_values;
        root["chain"] = chain;
    } else {
        json cavities = json::array();
        for (const auto& cavity : config.cavities) {
            json c;
            c["omega"] = cavity.omega;
            c["kappa_i"] = cavity.kappa_i;
            c["kappa_e"] = cavity.kappa_e;
            c["gamma"] = cavity.gamma;
            cavities.push_back(c);
        }
        root["cavities"] = cavities;
        if (config.coupling.has_value()) {
            json coupling;
            if (config.coupling->is_direct()) {
                coupling["type"] = "direct";
                coupling["g"] = config.coupling->g;
            } else {
                coupling["type"] = "cable";
                coupling["theta"] = config.coupling->theta;
                coupling["gamma0_l0"] = config.coupling->gamma0_l0;
            }
            root["coupling"] = coupling;
        }
    }

    if (config.drive.has_value()) {
        json drive;
        drive["port"] = config.drive->port;
        drive["amplitude"] = amplitude_to_json(config.drive->amplitude);
        drive["frequency"] = config.drive->frequency;
        root["drive"] = drive;
    }
    if (config.initial_amplitudes.has_value()) {
        json amplitudes = json::array();
        for (const auto& value : *config.initial_amplitudes) {
            amplitudes.push_back(amplitude_to_json(value));
        }
        root["initial_state"] = json{{"amplitudes", amplitudes}};
    }
    if (config.protocol == Protocol::SteadyDecay) {
        root["observe_port"] = config.observe_port;
    }
    if (config.sweep.has_value()) {
        json sweep;
        json axes = json::array();
        for (const auto& axis : config.sweep->axes) {
            json a;
            a["parameter"] = axis.parameter;
            a["values"] = axis.values;
            axes.push_back(a);
        }
        sweep["axes"] = axes;
        sweep["target_mode"] = config.sweep->target_mode;
        sweep["base_delta_phi"] = config.sweep->base_delta_phi;
        root["sweep"] = sweep;
    }
    if (config.lindblad.has_value()) {
        json lindblad;
        lindblad["dim_per_mode"] = config.lindblad->dim_per_mode;
        lindblad["n_thermal"] = config.lindblad->n_thermal;
        lindblad["leakage_tol"] = config.lindblad->leakage_tol;
        root["lindblad"] = lindblad;
    }
    root["time_grid"] = json{{"t_max", config.time_grid.t_max},
                             {"samples", config.time_grid.samples}};
    root["output"] = json{{"path", config.output.path},
                          {"format", output_format_name(config.output.format)}};
    return root.dump(2);
}

const char* system_kind_name(SystemKind kind) {
    switch (kind) {
        case SystemKind::Direct: return "direct";
        case SystemKind::Cable: return "cable";
        case SystemKind::Chain: return "chain";
    }
    return "direct";
}

const char* protocol_name(Protocol protocol) {
    switch (protocol) {
        case Protocol::FreeDecay: return "free_decay";
        case Protocol::Driven: return "driven";
        case Protocol::SteadyDecay: return "steady_decay";
        case Protocol::Lindblad: return "lindblad";
    }
    return "free_decay";
}

const char* output_format_name(OutputFormat format) {
    return format == OutputFormat::Csv ? "csv" : "json";
}

}  // namespace cavsim
