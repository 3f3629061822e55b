#include "cavsim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "cavsim/errors.hpp"

namespace cavsim {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double interpolate_crossing(double t0, double t1, double n0, double n1, double threshold) {
    // linear interpolation in log-energy; falls back to linear energy when a
    // bracketing sample is nonpositive
    if (n0 > 0.0 && n1 > 0.0) {
        const double l0 = std::log(n0);
        const double l1 = std::log(n1);
        const double lt = std::log(threshold);
        return t0 + (t1 - t0) * (l0 - lt) / (l0 - l1);
    }
    return t0 + (t1 - t0) * (n0 - threshold) / (n0 - n1);
}

}  // namespace

const char* interference_name(Interference verdict) {
    switch (verdict) {
        case Interference::Constructive: return "constructive";
        case Interference::Destructive: return "destructive";
        case Interference::Intermediate: return "intermediate";
    }
    return "intermediate";
}

LifetimeResult photon_lifetime_series(const std::vector<double>& times,
                                      const std::vector<double>& energy, double omega) {
    if (times.size() != energy.size() || times.size() < 2) {
        throw Error(ErrorCode::InconsistentParams, "lifetime needs matching time and energy series");
    }
    const double initial = energy.front();
    if (!(initial > 0.0)) {
        throw Error(ErrorCode::UndefinedLifetime, "initial energy must be positive");
    }
    const double threshold = initial * std::exp(-1.0);

    LifetimeResult result;
    for (std::size_t k = 1; k < energy.size(); ++k) {
        if (energy[k] < threshold) {
            result.t_1e = interpolate_crossing(times[k - 1], times[k], energy[k - 1], energy[k],
                                               threshold);
            result.crossing_found = true;
            break;
        }
    }
    if (!result.crossing_found) {
        result.t_1e = kNan;
    }
    result.q_equivalent = result.crossing_found ? omega * result.t_1e : kNan;
    return result;
}

LifetimeResult photon_lifetime(const Trajectory& traj, int mode, std::optional<double> omega) {
    if (mode < 0 || mode >= traj.modes()) {
        throw Error(ErrorCode::InconsistentParams, "lifetime mode index out of range");
    }
    return photon_lifetime_series(traj.times, traj.photon_numbers[static_cast<std::size_t>(mode)],
                                  omega.value_or(traj.frame_frequency));
}

InterferenceVerdict classify_interference(double delta_phi, double zeta, int cavity,
                                          double tolerance) {
    if (cavity != 1 && cavity != 2) {
        throw Error(ErrorCode::InconsistentParams, "cavity index must be 1 or 2");
    }
    const double phase = (cavity == 1) ? delta_phi + zeta : delta_phi - zeta;
    const double to_even = circular_distance(phase, 0.0);     // 2m*pi
    const double to_odd = circular_distance(phase, pi);       // (2m+1)*pi

    InterferenceVerdict verdict;
    verdict.cavity_index = cavity;
    verdict.residual = std::min(to_even, to_odd);
    if (to_even <= tolerance && to_even <= to_odd) {
        verdict.verdict = Interference::Constructive;
    } else if (to_odd <= tolerance && to_odd < to_even) {
        verdict.verdict = Interference::Destructive;
    } else {
        verdict.verdict = Interference::Intermediate;
    }
    return verdict;
}

LifetimeResult q_from_decay(const Trajectory& traj, int mode, double omega,
                            std::pair<double, double> fit_window) {
    if (mode < 0 || mode >= traj.modes()) {
        throw Error(ErrorCode::InconsistentParams, "fit mode index out of range");
    }
    if (!(fit_window.first >= 0.0 && fit_window.second <= 1.0 &&
          fit_window.first < fit_window.second)) {
        throw Error(ErrorCode::InconsistentParams, "fit window must be an increasing fraction pair");
    }
    const auto& times = traj.times;
    const auto& energy = traj.photon_numbers[static_cast<std::size_t>(mode)];
    const double span = times.back() - times.front();
    const double t_lo = times.front() + fit_window.first * span;
    const double t_hi = times.front() + fit_window.second * span;

    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < t_lo || times[k] > t_hi) {
            continue;
        }
        if (!(energy[k] > 0.0)) {
            throw Error(ErrorCode::UndefinedLifetime,
                        "photon number must stay positive over the fit window");
        }
        xs.push_back(times[k]);
        ys.push_back(std::log(energy[k]));
    }
    if (xs.size() < 2) {
        throw Error(ErrorCode::InconsistentParams, "fit window contains fewer than two samples");
    }
    const LinearFit fit = fit_line(xs, ys);

    LifetimeResult result = photon_lifetime(traj, mode, omega);
    result.fit_kappa = -fit.slope;
    if (result.crossing_found && *result.fit_kappa > 0.0) {
        const double q_crossing = omega * result.t_1e;
        const double q_fit = omega / *result.fit_kappa;
        result.fit_discrepancy = std::abs(q_crossing - q_fit) > 0.1 * std::abs(q_fit);
    }
    return result;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InconsistentParams, "line fit needs at least two points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) {
        throw Error(ErrorCode::InconsistentParams, "line fit is degenerate (constant abscissa)");
    }
    LinearFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;

    const double mean_y = sy / n;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double model = fit.intercept + fit.slope * x[i];
        ss_res += (y[i] - model) * (y[i] - model);
        ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
    }
    fit.r_squared = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

// ---------------------------------------------------------------------------
// Sweep engine
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kTwoCavityAxes = {"delta_phi", "theta", "g",
                                                 "gamma0_l0", "gamma1", "gamma2"};

bool is_two_cavity_axis(const std::string& name) {
    return std::find(kTwoCavityAxes.begin(), kTwoCavityAxes.end(), name) != kTwoCavityAxes.end();
}

void validate_axes(const SweepSpec& spec) {
    if (spec.axes.empty() || spec.axes.size() > 2) {
        throw Error(ErrorCode::ConfigSchema, "sweep needs one or two axes");
    }
    for (const auto& axis : spec.axes) {
        if (axis.values.empty()) {
            throw Error(ErrorCode::ConfigSchema, "sweep axis has no values", axis.parameter);
        }
        for (double v : axis.values) {
            if (!std::isfinite(v)) {
                throw Error(ErrorCode::NonFiniteInput, "sweep axis value must be finite",
                            axis.parameter);
            }
        }
        if (axis.parameter == "n") {
            if (spec.axes.size() != 1) {
                throw Error(ErrorCode::ConfigSchema, "the chain-length axis cannot be combined");
            }
            if (!spec.chain_base.has_value()) {
                throw Error(ErrorCode::ConfigSchema, "the chain-length axis needs a chain base");
            }
        } else if (!is_two_cavity_axis(axis.parameter)) {
            throw Error(ErrorCode::ConfigSchema, "unknown sweep parameter", axis.parameter);
        }
    }
}

/// Bare (uncoupled) decay time of a cavity: 1/(kappa_i + kappa_e), falling
/// back to the total rate when the cavity loses energy only through the
/// cable.
double bare_lifetime(const CavityParams& c) {
    const double bare_rate = c.kappa_i + c.kappa_e;
    const double rate = bare_rate > 0.0 ? bare_rate : c.kappa();
    if (!(rate > 0.0)) {
        throw Error(ErrorCode::InconsistentParams, "cavity has no decay channel");
    }
    return 1.0 / rate;
}

std::vector<double> resolve_grid(const TimeGridSpec& grid, double slowest_lifetime) {
    const double t_max = grid.t_max > 0.0 ? grid.t_max : 8.0 * slowest_lifetime;
    return uniform_grid(t_max, grid.samples);
}

struct PointSystem {
    CavityParams c1, c2;
    CouplingSpec coupling;
    double delta_phi = 0.0;
};

PointSystem apply_axes(const SweepSpec& spec, const std::vector<double>& point) {
    PointSystem sys{spec.c1, spec.c2, spec.coupling, spec.base_delta_phi};
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const std::string& name = spec.axes[i].parameter;
        const double value = point[i];
        if (name == "delta_phi") {
            sys.delta_phi = value;
        } else if (name == "theta") {
            if (!sys.coupling.is_cable()) {
                throw Error(ErrorCode::VariantMismatch, "theta axis needs a cable coupling");
            }
            sys.coupling.theta = value;
        } else if (name == "gamma0_l0") {
            if (!sys.coupling.is_cable()) {
                throw Error(ErrorCode::VariantMismatch, "gamma0_l0 axis needs a cable coupling");
            }
            sys.coupling.gamma0_l0 = value;
        } else if (name == "g") {
            if (!sys.coupling.is_direct()) {
                throw Error(ErrorCode::VariantMismatch, "g axis needs a direct coupling");
            }
            sys.coupling.g = value;
        } else if (name == "gamma1") {
            sys.c1.gamma = value;
        } else if (name == "gamma2") {
            sys.c2.gamma = value;
        }
    }
    return sys;
}

SweepCell run_two_cavity_point(const SweepSpec& spec, const std::vector<double>& point) {
    SweepCell cell;
    try {
        const PointSystem sys = apply_axes(spec, point);
        cell.delta_phi = wrap_two_pi(sys.delta_phi);

        LinearModel model;
        if (sys.coupling.is_cable()) {
            const EffectiveCoupling eff = effective_coupling(sys.c1, sys.c2, sys.coupling);
            cell.zeta = eff.zeta;
            model = build_cable_model(sys.c1, sys.c2, sys.coupling, spec.frame_frequency);
        } else {
            cell.zeta = wrap_two_pi(1.5 * pi);
            model = build_direct_model(sys.c1, sys.c2, sys.coupling, spec.frame_frequency);
        }

        InitialState init;
        init.amplitudes.resize(2);
        init.amplitudes(0) = cplx(spec.alpha_abs, 0.0);
        init.amplitudes(1) = std::polar(spec.alpha_abs, sys.delta_phi);

        const double slowest = std::max(bare_lifetime(sys.c1), bare_lifetime(sys.c2));
        const Trajectory traj = evolve_free(model, init, resolve_grid(spec.grid, slowest));
        cell.lifetimes.push_back(photon_lifetime(traj, 0, sys.c1.omega));
        cell.lifetimes.push_back(photon_lifetime(traj, 1, sys.c2.omega));
        cell.ok = true;
    } catch (const Error& e) {
        cell.error_code = error_code_name(e.code());
        cell.error = e.what();
    }
    return cell;
}

SweepCell run_chain_point(const SweepSpec& spec, double n_value) {
    SweepCell cell;
    cell.delta_phi = kNan;
    cell.zeta = kNan;
    try {
        const int n = static_cast<int>(std::lround(n_value));
        const ChainSpec chain = spec.chain_base->with_size(n);
        const ChainScalingResult scaling = chain_lifetime_scaling(chain, {n}, spec.grid);
        cell.lifetimes = scaling.lifetimes;
        cell.ok = true;
    } catch (const Error& e) {
        cell.error_code = error_code_name(e.code());
        cell.error = e.what();
    }
    return cell;
}

}  // namespace

const SweepCell& SweepResult::at(std::size_t i0, std::size_t i1) const {
    const std::size_t inner = axes.size() == 2 ? axes[1].values.size() : 1;
    return cells.at(i0 * inner + i1);
}

SweepResult sweep_lifetime(const SweepSpec& spec, int threads) {
    validate_axes(spec);
    if (!spec.axes.empty() && spec.axes.front().parameter != "n") {
        spec.c1.validate();
        spec.c2.validate();
        spec.coupling.validate();
        if (!(spec.alpha_abs > 0.0)) {
            throw Error(ErrorCode::InconsistentParams, "sweep initial amplitude must be positive");
        }
    }

    SweepResult result;
    result.axes = spec.axes;
    const std::size_t outer = spec.axes[0].values.size();
    const std::size_t inner = spec.axes.size() == 2 ? spec.axes[1].values.size() : 1;
    result.cells.resize(outer * inner);

    const bool chain_axis = spec.axes.front().parameter == "n";
    auto run_point = [&](std::size_t flat) {
        const std::size_t i0 = flat / inner;
        const std::size_t i1 = flat % inner;
        if (chain_axis) {
            result.cells[flat] = run_chain_point(spec, spec.axes[0].values[i0]);
            return;
        }
        std::vector<double> point{spec.axes[0].values[i0]};
        if (spec.axes.size() == 2) {
            point.push_back(spec.axes[1].values[i1]);
        }
        result.cells[flat] = run_two_cavity_point(spec, point);
    };

    const std::size_t total = result.cells.size();
    const int workers = std::max(1, threads);
    if (workers == 1 || total < 2) {
        for (std::size_t flat = 0; flat < total; ++flat) {
            run_point(flat);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t count = std::min(static_cast<std::size_t>(workers), total);
        pool.reserve(count);
        for (std::size_t w = 0; w < count; ++w) {
            pool.emplace_back([&]() {
                for (std::size_t flat = next.fetch_add(1); flat < total; flat = next.fetch_add(1)) {
                    run_point(flat);
                }
            });
        }
        for (auto& worker : pool) {
            worker.join();
        }
    }
    return result;
}

ChainScalingResult chain_lifetime_scaling(const ChainSpec& base, const std::vector<int>& n_values,
                                          TimeGridSpec grid) {
    if (n_values.empty()) {
        throw Error(ErrorCode::ConfigSchema, "chain scaling needs at least one cavity count");
    }
    ChainScalingResult result;
    result.n_values = n_values;
    for (int n : n_values) {
        const ChainSpec spec = base.with_size(n);
        const LinearModel model = build_chain_model(spec, spec.omega);

        DriveSpec drive;
        drive.port = 0;
        drive.amplitude = cplx(1.0, 0.0);
        drive.frequency = spec.omega;

        double slowest = 0.0;
        for (double k : spec.kappa_i) {
            if (k + spec.kappa_e_first > 0.0) {
                slowest = std::max(slowest, 1.0 / (k + spec.kappa_e_first));
            }
        }
        if (!(slowest > 0.0)) {
            throw Error(ErrorCode::InconsistentParams, "chain has no decay channel");
        }
        // the end-cavity lifetime grows roughly linearly with N; stretch the
        // window accordingly so the crossing stays inside the grid
        TimeGridSpec stretched = grid;
        if (stretched.t_max <= 0.0) {
            stretched.t_max = 8.0 * slowest * static_cast<double>(n);
        }
        const auto times = uniform_grid(stretched.t_max, stretched.samples);
        const DecayProtocolResult decay = decay_protocol(model, drive, n - 1, times);
        result.lifetimes.push_back(photon_lifetime(decay.trajectory, n - 1, spec.omega));
    }

    if (n_values.size() >= 2) {
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < n_values.size(); ++i) {
            if (result.lifetimes[i].crossing_found) {
                xs.push_back(static_cast<double>(n_values[i]));
                ys.push_back(result.lifetimes[i].t_1e);
            }
        }
        if (xs.size() >= 2) {
            const LinearFit fit = fit_line(xs, ys);
            result.slope = fit.slope;
            result.intercept = fit.intercept;
            result.r_squared = fit.r_squared;
        }
    }
    return result;
}

}  // namespace cavsim
