#include "cavsim/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <thread>

#include <nlohmann/json.hpp>

#include "cavsim/analysis.hpp"
#include "cavsim/errors.hpp"
#include "cavsim/lindblad.hpp"
#include "cavsim/version.hpp"

namespace cavsim {

using nlohmann::json;

namespace {

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

int resolve_threads(const RunOptions& options) {
    if (options.threads > 0) {
        return options.threads;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

json complex_json(const cplx& z) { return json::array({z.real(), z.imag()}); }

/// Longest uncoupled 1/e time among the configured cavities; a cavity that
/// loses energy only through the cable falls back to its total rate.
double slowest_bare_lifetime(const ExperimentConfig& config) {
    double slowest = 0.0;
    auto consider = [&slowest](double kappa_bare, double kappa_total) {
        const double rate = kappa_bare > 0.0 ? kappa_bare : kappa_total;
        if (rate > 0.0) {
            slowest = std::max(slowest, 1.0 / rate);
        }
    };
    if (config.system == SystemKind::Chain) {
        const ChainConfig& chain = *config.chain;
        consider(chain.kappa_i + chain.kappa_e_first, chain.kappa_i + chain.kappa_e_first);
        consider(chain.kappa_i, chain.kappa_i);
        consider(chain.kappa_i + chain.kappa_e_last, chain.kappa_i + chain.kappa_e_last);
    } else {
        for (const auto& cavity : config.cavities) {
            consider(cavity.kappa_i + cavity.kappa_e, cavity.kappa());
        }
    }
    if (!(slowest > 0.0)) {
        throw Error(ErrorCode::InconsistentParams, "system has no decay channel; cannot size the grid");
    }
    return slowest;
}

std::vector<double> resolve_times(const ExperimentConfig& config) {
    const double t_max = config.time_grid.t_max > 0.0
                             ? config.time_grid.t_max
                             : 8.0 * slowest_bare_lifetime(config);
    return uniform_grid(t_max, config.time_grid.samples);
}

json effective_coupling_json(const EffectiveCoupling& eff) {
    json j;
    j["delta_omega_1"] = complex_json(eff.delta_omega_1);
    j["delta_omega_2"] = complex_json(eff.delta_omega_2);
    j["g_eff"] = complex_json(eff.g_eff);
    j["zeta"] = eff.zeta;
    j["zeta_over_pi"] = eff.zeta / pi;
    j["kappa_eff_1"] = eff.kappa_eff_1;
    j["kappa_eff_2"] = eff.kappa_eff_2;
    return j;
}

json base_metadata(const ExperimentConfig& config) {
    json meta;
    meta["version"] = version;
    meta["generated_at"] = iso8601_utc_now();
    meta["config"] = json::parse(emit_config(config));
    if (config.system == SystemKind::Cable) {
        meta["derived"]["effective_coupling"] = effective_coupling_json(
            effective_coupling(config.cavities[0], config.cavities[1], *config.coupling));
    } else if (config.system == SystemKind::Direct && config.cavities.size() == 2) {
        meta["derived"]["zeta"] = wrap_two_pi(1.5 * pi);
        meta["derived"]["zeta_over_pi"] = 1.5;
    }
    return meta;
}

InitialState initial_state_from(const ExperimentConfig& config, int dim) {
    InitialState init;
    init.amplitudes = Eigen::VectorXcd::Zero(dim);
    if (config.initial_amplitudes.has_value()) {
        if (static_cast<int>(config.initial_amplitudes->size()) != dim) {
            throw Error(ErrorCode::ConfigSchema, "initial state size must match the mode count");
        }
        for (int j = 0; j < dim; ++j) {
            init.amplitudes(j) = (*config.initial_amplitudes)[static_cast<std::size_t>(j)];
        }
    }
    return init;
}

Table trajectory_table(const Trajectory& traj, const std::vector<double>* output_power) {
    Table table;
    table.name = "trajectory";
    table.columns = {"time_s"};
    for (int j = 0; j < traj.modes(); ++j) {
        const std::string suffix = std::to_string(j + 1);
        table.columns.push_back("re_A" + suffix);
        table.columns.push_back("im_A" + suffix);
        table.columns.push_back("n" + suffix);
    }
    if (output_power != nullptr) {
        table.columns.push_back("output_power");
    }
    table.rows.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<Cell> row;
        row.reserve(table.columns.size());
        row.emplace_back(traj.times[k]);
        for (int j = 0; j < traj.modes(); ++j) {
            const auto& a = traj.amplitudes[static_cast<std::size_t>(j)][k];
            row.emplace_back(a.real());
            row.emplace_back(a.imag());
            row.emplace_back(traj.photon_numbers[static_cast<std::size_t>(j)][k]);
        }
        if (output_power != nullptr) {
            row.emplace_back((*output_power)[k]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

Table expectation_table(const ExpectationTrajectory& traj) {
    Table table;
    table.name = "trajectory";
    table.columns = {"time_s"};
    const int modes = static_cast<int>(traj.a_mean.size());
    for (int j = 0; j < modes; ++j) {
        const std::string suffix = std::to_string(j + 1);
        table.columns.push_back("re_A" + suffix);
        table.columns.push_back("im_A" + suffix);
        table.columns.push_back("n" + suffix);
    }
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<Cell> row;
        row.emplace_back(traj.times[k]);
        for (int j = 0; j < modes; ++j) {
            const auto& a = traj.a_mean[static_cast<std::size_t>(j)][k];
            row.emplace_back(a.real());
            row.emplace_back(a.imag());
            row.emplace_back(traj.n_mean[static_cast<std::size_t>(j)][k]);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

double max_amplitude_deviation(const Trajectory& a, const Trajectory& b) {
    double worst = 0.0;
    for (std::size_t j = 0; j < a.amplitudes.size(); ++j) {
        for (std::size_t k = 0; k < a.amplitudes[j].size(); ++k) {
            worst = std::max(worst, std::abs(a.amplitudes[j][k] - b.amplitudes[j][k]));
        }
    }
    return worst;
}

Cell lifetime_cell(const LifetimeResult& result) {
    return result.crossing_found ? Cell(result.t_1e)
                                 : Cell(std::numeric_limits<double>::quiet_NaN());
}

Table sweep_table(const SweepResult& sweep) {
    Table table;
    table.name = "sweep";
    const bool chain_axis = sweep.axes.front().parameter == "n";
    for (const auto& axis : sweep.axes) {
        table.columns.push_back(axis.parameter);
    }
    if (chain_axis) {
        table.columns.insert(table.columns.end(), {"t1e", "q_equiv", "error"});
    } else {
        table.columns.insert(table.columns.end(),
                             {"t1e_cavity1", "q_equiv_cavity1", "t1e_cavity2", "q_equiv_cavity2",
                              "verdict_cavity1", "verdict_cavity2", "error"});
    }

    const std::size_t inner = sweep.axes.size() == 2 ? sweep.axes[1].values.size() : 1;
    for (std::size_t flat = 0; flat < sweep.cells.size(); ++flat) {
        const SweepCell& cell = sweep.cells[flat];
        std::vector<Cell> row;
        row.emplace_back(sweep.axes[0].values[flat / inner]);
        if (sweep.axes.size() == 2) {
            row.emplace_back(sweep.axes[1].values[flat % inner]);
        }
        if (chain_axis) {
            if (cell.ok && !cell.lifetimes.empty()) {
                row.push_back(lifetime_cell(cell.lifetimes.front()));
                row.emplace_back(cell.lifetimes.front().q_equivalent);
            } else {
                row.emplace_back(std::numeric_limits<double>::quiet_NaN());
                row.emplace_back(std::numeric_limits<double>::quiet_NaN());
            }
            row.emplace_back(cell.ok ? std::string() : cell.error_code + ": " + cell.error);
        } else {
            if (cell.ok && cell.lifetimes.size() == 2) {
                row.push_back(lifetime_cell(cell.lifetimes[0]));
                row.emplace_back(cell.lifetimes[0].q_equivalent);
                row.push_back(lifetime_cell(cell.lifetimes[1]));
                row.emplace_back(cell.lifetimes[1].q_equivalent);
                row.emplace_back(std::string(interference_name(
                    classify_interference(cell.delta_phi, cell.zeta, 1).verdict)));
                row.emplace_back(std::string(interference_name(
                    classify_interference(cell.delta_phi, cell.zeta, 2).verdict)));
            } else {
                for (int i = 0; i < 4; ++i) {
                    row.emplace_back(std::numeric_limits<double>::quiet_NaN());
                }
                row.emplace_back(std::string());
                row.emplace_back(std::string());
            }
            row.emplace_back(cell.ok ? std::string() : cell.error_code + ": " + cell.error);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ResultBundle simulate_pipeline(const ExperimentConfig& config, const RunOptions& options) {
    ResultBundle bundle;
    json meta = base_metadata(config);

    if (config.protocol == Protocol::Lindblad) {
        if (config.cavities.size() > 2) {
            throw Error(ErrorCode::ConfigSchema, "the quantum model covers one or two modes");
        }
        LindbladParams params;
        for (const auto& cavity : config.cavities) {
            params.omega.push_back(cavity.omega);
            params.kappa.push_back(cavity.kappa());
        }
        params.g = config.coupling.has_value() ? config.coupling->g : 0.0;
        params.frame_frequency = config.frame_frequency;

        FockConfig fock;
        const LindbladConfig lc = config.lindblad.value_or(LindbladConfig{});
        fock.dim_per_mode = lc.dim_per_mode;
        fock.n_thermal = lc.n_thermal;
        fock.leakage_tol = lc.leakage_tol;
        fock.modes = static_cast<int>(config.cavities.size());

        const InitialState init = initial_state_from(config, fock.modes);
        const auto times = resolve_times(config);
        const ExpectationTrajectory traj = lindblad_evolve(params, init, fock, times);
        meta["derived"]["max_leakage"] = traj.max_leakage;

        if (options.validate) {
            const LinearModel model = build_model(config);
            const Trajectory classical = evolve_free(model, init, times);
            double worst = 0.0;
            for (int j = 0; j < fock.modes; ++j) {
                for (std::size_t k = 0; k < times.size(); ++k) {
                    worst = std::max(worst,
                                     std::abs(traj.a_mean[static_cast<std::size_t>(j)][k] -
                                              classical.amplitudes[static_cast<std::size_t>(j)][k]));
                }
            }
            meta["validation"]["semiclassical_max_deviation"] = worst;
        }
        bundle.tables.push_back(expectation_table(traj));
        bundle.metadata_json = meta.dump(2);
        return bundle;
    }

    const LinearModel model = build_model(config);
    const auto times = resolve_times(config);

    Trajectory traj;
    const std::vector<double>* power = nullptr;
    std::vector<double> power_storage;
    if (config.protocol == Protocol::FreeDecay) {
        traj = evolve_free(model, initial_state_from(config, model.dim()), times);
        if (options.validate) {
            const Trajectory check =
                evolve_free_rk(model, initial_state_from(config, model.dim()), times);
            meta["validation"]["propagator_max_deviation"] = max_amplitude_deviation(traj, check);
        }
    } else if (config.protocol == Protocol::Driven) {
        const InitialState vacuum = initial_state_from(config, model.dim());
        traj = evolve_driven(model, vacuum, *config.drive, times);
        if (options.validate) {
            const Trajectory check = evolve_driven_rk(model, vacuum, *config.drive, times);
            meta["validation"]["propagator_max_deviation"] = max_amplitude_deviation(traj, check);
        }
    } else {  // SteadyDecay
        const DecayProtocolResult result =
            decay_protocol(model, *config.drive, config.observe_port, times);
        traj = result.trajectory;
        power_storage = result.output_power;
        power = &power_storage;

        const double omega_obs = config.cavities.empty()
                                     ? config.chain->omega
                                     : config.cavities[static_cast<std::size_t>(
                                                           config.observe_port)].omega;
        const LifetimeResult lifetime = photon_lifetime(traj, config.observe_port, omega_obs);
        meta["derived"]["observe_port"] = config.observe_port;
        if (lifetime.crossing_found) {
            meta["derived"]["t_1e"] = lifetime.t_1e;
            meta["derived"]["q_effective"] = lifetime.q_equivalent;
        }
        if (options.validate) {
            const InitialState prepared = steady_state(model, *config.drive);
            const Trajectory check = evolve_free_rk(model, prepared, times);
            meta["validation"]["propagator_max_deviation"] = max_amplitude_deviation(traj, check);
        }
    }

    bundle.tables.push_back(trajectory_table(traj, power));
    bundle.metadata_json = meta.dump(2);
    return bundle;
}

ResultBundle sweep_pipeline(const ExperimentConfig& config, const RunOptions& options) {
    if (!config.sweep.has_value()) {
        throw Error(ErrorCode::ConfigSchema, "sweep pipeline needs a sweep block");
    }
    ResultBundle bundle;
    json meta = base_metadata(config);
    const int threads = resolve_threads(options);

    if (config.protocol == Protocol::Lindblad) {
        // resonant two-mode quantum sweep over (delta_phi, g)
        if (config.cavities.size() != 2) {
            throw Error(ErrorCode::ConfigSchema, "lindblad sweeps need two cavities");
        }
        if (config.cavities[0].omega != config.cavities[1].omega) {
            throw Error(ErrorCode::ConfigSchema, "lindblad sweeps assume resonant cavities");
        }
        std::vector<double> delta_phi_values{config.sweep->base_delta_phi};
        std::vector<double> g_values{config.coupling.has_value() ? config.coupling->g : 0.0};
        for (const auto& axis : config.sweep->axes) {
            if (axis.parameter == "delta_phi") {
                delta_phi_values = axis.values;
            } else if (axis.parameter == "g") {
                g_values = axis.values;
            }
        }
        FockConfig fock;
        const LindbladConfig lc = config.lindblad.value_or(LindbladConfig{});
        fock.dim_per_mode = lc.dim_per_mode;
        fock.n_thermal = lc.n_thermal;
        fock.leakage_tol = lc.leakage_tol;
        fock.modes = 2;

        TimeGridSpec grid{config.time_grid.t_max, config.time_grid.samples};
        const LindbladSweepResult result =
            lindblad_lifetime_sweep(delta_phi_values, g_values, config.cavities[0].kappa(),
                                    config.cavities[1].kappa(), fock, grid, threads);

        SweepResult view;
        view.axes = {{"delta_phi", result.delta_phi_values}};
        if (result.g_values.size() > 1 ||
            (config.sweep->axes.size() == 2)) {
            view.axes.push_back({"g", result.g_values});
        }
        view.cells = result.cells;
        bundle.tables.push_back(sweep_table(view));
        bundle.metadata_json = meta.dump(2);
        return bundle;
    }

    SweepSpec spec;
    for (const auto& axis : config.sweep->axes) {
        spec.axes.push_back({axis.parameter, axis.values});
    }
    if (config.system == SystemKind::Chain) {
        spec.chain_base = config.chain->to_spec(config.chain->n);
        // placeholder cavities keep the spec self-consistent; the n axis
        // never touches them
        spec.c1 = CavityParams{config.chain->omega, config.chain->kappa_i, 0.0, 0.0};
        spec.c2 = spec.c1;
        spec.coupling = CouplingSpec::direct(config.chain->g);
    } else {
        if (config.cavities.size() != 2) {
            throw Error(ErrorCode::ConfigSchema, "two cavities are required for lifetime sweeps");
        }
        spec.c1 = config.cavities[0];
        spec.c2 = config.cavities[1];
        spec.coupling = *config.coupling;
    }
    spec.frame_frequency = config.frame_frequency;
    spec.base_delta_phi = config.sweep->base_delta_phi;
    spec.grid = TimeGridSpec{config.time_grid.t_max, config.time_grid.samples};
    spec.target_mode = config.sweep->target_mode;

    const SweepResult result = sweep_lifetime(spec, threads);
    bundle.tables.push_back(sweep_table(result));
    bundle.metadata_json = meta.dump(2);
    return bundle;
}

ResultBundle chain_pipeline(const ExperimentConfig& config) {
    if (config.system != SystemKind::Chain) {
        throw Error(ErrorCode::ConfigSchema, "chain scaling needs system=chain");
    }
    ResultBundle bundle;
    json meta = base_metadata(config);

    const ChainScalingResult result =
        chain_lifetime_scaling(config.chain->to_spec(config.chain->n), config.chain->n_values,
                               TimeGridSpec{config.time_grid.t_max, config.time_grid.samples});

    Table table;
    table.name = "chain_scaling";
    table.columns = {"n", "t1e", "q_equiv"};
    for (std::size_t i = 0; i < result.n_values.size(); ++i) {
        std::vector<Cell> row;
        row.emplace_back(static_cast<double>(result.n_values[i]));
        row.push_back(lifetime_cell(result.lifetimes[i]));
        row.emplace_back(result.lifetimes[i].q_equivalent);
        table.rows.push_back(std::move(row));
    }
    bundle.tables.push_back(std::move(table));

    meta["fit"]["slope"] = result.slope;
    meta["fit"]["intercept"] = result.intercept;
    meta["fit"]["r_squared"] = result.r_squared;
    bundle.metadata_json = meta.dump(2);
    return bundle;
}

ResultBundle eigen_pipeline(const ExperimentConfig& config) {
    ResultBundle bundle;
    json meta = base_metadata(config);

    const LinearModel model = build_model(config);
    const ModeSpectrum spectrum = eigenmodes(model);

    Table table;
    table.name = "eigenmodes";
    table.columns = {"mode", "re_eigenvalue", "im_eigenvalue", "frequency", "decay_rate", "q"};
    for (std::size_t i = 0; i < spectrum.modes.size(); ++i) {
        const auto& mode = spectrum.modes[i];
        table.rows.push_back({Cell(static_cast<double>(i)), Cell(mode.eigenvalue.real()),
                              Cell(mode.eigenvalue.imag()), Cell(mode.frequency),
                              Cell(mode.decay_rate), Cell(mode.q)});
    }
    bundle.tables.push_back(std::move(table));

    if (spectrum.modes.size() == 2) {
        meta["derived"]["frequency_splitting"] = frequency_splitting(spectrum);
        if (config.system == SystemKind::Direct && config.cavities.size() == 2 &&
            config.cavities[0].omega == config.cavities[1].omega) {
            const double g = config.coupling->g;
            const double k1 = config.cavities[0].kappa();
            const double k2 = config.cavities[1].kappa();
            if (4.0 * g * g > 0.25 * (k1 - k2) * (k1 - k2)) {
                meta["derived"]["splitting_formula"] = direct_splitting_formula(g, k1, k2);
            }
        }
    }
    bundle.metadata_json = meta.dump(2);
    return bundle;
}

}  // namespace

LinearModel build_model(const ExperimentConfig& config) {
    switch (config.system) {
        case SystemKind::Chain:
            return build_chain_model(config.chain->to_spec(config.chain->n),
                                     config.frame_frequency);
        case SystemKind::Cable:
            return build_cable_model(config.cavities.at(0), config.cavities.at(1),
                                     *config.coupling, config.frame_frequency);
        case SystemKind::Direct:
            if (config.cavities.size() == 1) {
                return single_mode_model(config.cavities.front(), config.frame_frequency);
            }
            return build_direct_model(config.cavities.at(0), config.cavities.at(1),
                                      *config.coupling, config.frame_frequency);
    }
    throw Error(ErrorCode::Internal, "unhandled system kind");
}

ResultBundle run(const ExperimentConfig& config, const RunOptions& options) {
    RunPipeline pipeline = options.pipeline;
    if (pipeline == RunPipeline::Auto) {
        if (config.sweep.has_value()) {
            pipeline = RunPipeline::Sweep;
        } else if (config.system == SystemKind::Chain && config.chain->n_values.size() > 1) {
            pipeline = RunPipeline::ChainScaling;
        } else {
            pipeline = RunPipeline::Simulate;
        }
    }
    switch (pipeline) {
        case RunPipeline::Simulate: return simulate_pipeline(config, options);
        case RunPipeline::Sweep: return sweep_pipeline(config, options);
        case RunPipeline::ChainScaling: return chain_pipeline(config);
        case RunPipeline::Eigen: return eigen_pipeline(config);
        case RunPipeline::Auto: break;
    }
    throw Error(ErrorCode::Internal, "unhandled pipeline");
}

}  // namespace cavsim
