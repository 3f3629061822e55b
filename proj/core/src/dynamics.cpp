#include "cavsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "cavsim/errors.hpp"

namespace cavsim {

namespace {

void check_times(const std::vector<double>& times) {
    if (times.empty()) {
        throw Error(ErrorCode::TimeGrid, "sample grid is empty");
    }
    if (times.front() != 0.0) {
        throw Error(ErrorCode::TimeGrid, "sample grid must start at t = 0");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1]) || !std::isfinite(times[k])) {
            throw Error(ErrorCode::TimeGrid, "sample instants must be finite and strictly increasing");
        }
    }
}

void check_state(const LinearModel& model, const InitialState& init) {
    model.validate();
    if (init.amplitudes.size() != model.dim()) {
        throw Error(ErrorCode::InconsistentParams, "initial state size must match mode count");
    }
    if (!init.amplitudes.allFinite()) {
        throw Error(ErrorCode::NonFiniteInput, "initial amplitudes must be finite");
    }
}

Trajectory make_trajectory(const LinearModel& model, const std::vector<double>& times) {
    Trajectory traj;
    traj.times = times;
    traj.frame_frequency = model.frame_frequency;
    traj.amplitudes.assign(static_cast<std::size_t>(model.dim()),
                           std::vector<cplx>(times.size()));
    traj.photon_numbers.assign(static_cast<std::size_t>(model.dim()),
                               std::vector<double>(times.size()));
    return traj;
}

void record_sample(Trajectory& traj, std::size_t k, const Eigen::VectorXcd& state) {
    for (int j = 0; j < state.size(); ++j) {
        const cplx a = state(j);
        traj.amplitudes[static_cast<std::size_t>(j)][k] = a;
        traj.photon_numbers[static_cast<std::size_t>(j)][k] = std::norm(a);
    }
}

/// Offset of the drive vector in dA/dt = M A - s.
Eigen::VectorXcd drive_vector(const LinearModel& model, const DriveSpec& drive) {
    if (drive.port < 0 || drive.port >= model.dim()) {
        throw Error(ErrorCode::UndriveablePort, "drive port index out of range");
    }
    if (model.input_couplings(drive.port) <= 0.0) {
        throw Error(ErrorCode::UndriveablePort, "driven port has zero external coupling");
    }
    const double frame_tol = 1e-9 * std::max(1.0, std::abs(model.frame_frequency));
    if (std::abs(drive.frequency - model.frame_frequency) > frame_tol) {
        std::ostringstream oss;
        oss << "drive=" << drive.frequency << " frame=" << model.frame_frequency;
        throw Error(ErrorCode::InconsistentParams,
                    "drive frequency must equal the rotating-frame frequency", oss.str());
    }
    Eigen::VectorXcd s = Eigen::VectorXcd::Zero(model.dim());
    s(drive.port) = model.input_couplings(drive.port) * drive.amplitude;
    return s;
}

/// Propagate with per-segment matrix exponentials, caching exp(M dt) for
/// repeated segment lengths (uniform grids reuse a single exponential).
template <typename SampleFn>
void propagate_expm(const Eigen::MatrixXcd& matrix, Eigen::VectorXcd state,
                    const std::vector<double>& times, SampleFn&& on_sample) {
    on_sample(std::size_t{0}, state);
    Eigen::MatrixXcd step;
    double cached_dt = -1.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        if (dt != cached_dt) {
            step = (matrix * dt).exp();
            cached_dt = dt;
        }
        state = step * state;
        on_sample(k, state);
    }
}

}  // namespace

double InitialState::delta_phi() const {
    if (amplitudes.size() != 2) {
        throw Error(ErrorCode::InconsistentParams, "delta_phi is defined for two-mode states");
    }
    return wrap_two_pi(std::arg(amplitudes(1)) - std::arg(amplitudes(0)));
}

std::vector<double> uniform_grid(double t_max, int samples) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) {
        throw Error(ErrorCode::TimeGrid, "grid span must be positive and finite");
    }
    if (samples < 2) {
        throw Error(ErrorCode::TimeGrid, "grid needs at least two samples");
    }
    std::vector<double> times(static_cast<std::size_t>(samples));
    for (int k = 0; k < samples; ++k) {
        times[static_cast<std::size_t>(k)] = t_max * static_cast<double>(k) / (samples - 1);
    }
    times.front() = 0.0;
    return times;
}

double drive_detuning(const DriveSpec& drive, double omega, cplx delta_omega) {
    return drive.frequency - omega - delta_omega.real();
}

Trajectory evolve_free(const LinearModel& model, const InitialState& init,
                       const std::vector<double>& times) {
    check_state(model, init);
    check_times(times);
    Trajectory traj = make_trajectory(model, times);
    propagate_expm(model.matrix, init.amplitudes, times,
                   [&](std::size_t k, const Eigen::VectorXcd& state) { record_sample(traj, k, state); });
    return traj;
}

Trajectory evolve_free_rk(const LinearModel& model, const InitialState& init,
                          const std::vector<double>& times, const AdaptiveOptions& opt) {
    check_state(model, init);
    check_times(times);
    Trajectory traj = make_trajectory(model, times);
    Eigen::VectorXcd state = init.amplitudes;
    record_sample(traj, 0, state);
    auto rhs = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return model.matrix * y; };
    Dp54Cache<Eigen::VectorXcd> cache;
    for (std::size_t k = 1; k < times.size(); ++k) {
        integrate_adaptive(rhs, state, times[k - 1], times[k], opt, &cache);
        record_sample(traj, k, state);
    }
    return traj;
}

Trajectory evolve_driven(const LinearModel& model, const InitialState& init,
                         const DriveSpec& drive, const std::vector<double>& times) {
    check_state(model, init);
    check_times(times);
    if (drive.amplitude == cplx(0.0, 0.0)) {
        return evolve_free(model, init, times);
    }
    InitialState fixed_point;
    try {
        fixed_point = steady_state(model, drive);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NoSteadyState) {
            throw;
        }
        // marginally stable generator: no affine fixed point, integrate directly
        return evolve_driven_rk(model, init, drive, times);
    }
    Trajectory traj = make_trajectory(model, times);
    const Eigen::VectorXcd offset = init.amplitudes - fixed_point.amplitudes;
    propagate_expm(model.matrix, offset, times, [&](std::size_t k, const Eigen::VectorXcd& state) {
        record_sample(traj, k, Eigen::VectorXcd(state + fixed_point.amplitudes));
    });
    return traj;
}

Trajectory evolve_driven_rk(const LinearModel& model, const InitialState& init,
                            const DriveSpec& drive, const std::vector<double>& times,
                            const AdaptiveOptions& opt) {
    check_state(model, init);
    check_times(times);
    const Eigen::VectorXcd s = drive_vector(model, drive);
    Trajectory traj = make_trajectory(model, times);
    Eigen::VectorXcd state = init.amplitudes;
    record_sample(traj, 0, state);
    auto rhs = [&](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return model.matrix * y - s; };
    Dp54Cache<Eigen::VectorXcd> cache;
    for (std::size_t k = 1; k < times.size(); ++k) {
        integrate_adaptive(rhs, state, times[k - 1], times[k], opt, &cache);
        record_sample(traj, k, state);
    }
    return traj;
}

InitialState steady_state(const LinearModel& model, const DriveSpec& drive) {
    model.validate();
    const Eigen::VectorXcd s = drive_vector(model, drive);

    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(model.matrix, false);
    const double scale = model.matrix.cwiseAbs().maxCoeff();
    for (int j = 0; j < model.dim(); ++j) {
        if (solver.eigenvalues()(j).real() >= -1e-14 * std::max(scale, 1.0)) {
            throw Error(ErrorCode::NoSteadyState,
                        "generator has an undamped mode; no steady state exists");
        }
    }

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(model.matrix);
    if (lu.rcond() < 1e-12) {
        std::cerr << "cavsim: steady-state solve is ill-conditioned (rcond="
                  << lu.rcond() << ")\n";
    }
    InitialState state;
    state.amplitudes = lu.solve(s);
    return state;
}

DecayProtocolResult decay_protocol(const LinearModel& model, const DriveSpec& drive,
                                   int observe_port, const std::vector<double>& times) {
    if (observe_port < 0 || observe_port >= model.dim()) {
        throw Error(ErrorCode::UndriveablePort, "observe port index out of range");
    }
    if (model.input_couplings(observe_port) <= 0.0) {
        throw Error(ErrorCode::UndriveablePort, "observed port has zero external coupling");
    }

    DecayProtocolResult result;
    result.observe_port = observe_port;
    if (drive.amplitude == cplx(0.0, 0.0)) {
        InitialState zero;
        zero.amplitudes = Eigen::VectorXcd::Zero(model.dim());
        result.trajectory = evolve_free(model, zero, times);
    } else {
        result.trajectory = evolve_free(model, steady_state(model, drive), times);
    }
    const double kappa_e = model.input_couplings(observe_port) * model.input_couplings(observe_port);
    const auto& n_obs = result.trajectory.photon_numbers[static_cast<std::size_t>(observe_port)];
    result.output_power.resize(n_obs.size());
    std::transform(n_obs.begin(), n_obs.end(), result.output_power.begin(),
                   [kappa_e](double n) { return kappa_e * n; });
    return result;
}

ModeSpectrum eigenmodes(const LinearModel& model) {
    model.validate();
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(model.matrix, false);

    ModeSpectrum spectrum;
    spectrum.frame_frequency = model.frame_frequency;
    for (int j = 0; j < model.dim(); ++j) {
        ModeSpectrum::Mode mode;
        mode.eigenvalue = solver.eigenvalues()(j);
        mode.frequency = -mode.eigenvalue.imag() + model.frame_frequency;
        mode.decay_rate = -2.0 * mode.eigenvalue.real();
        mode.q = (mode.decay_rate != 0.0)
                     ? mode.frequency / mode.decay_rate
                     : std::numeric_limits<double>::infinity();
        spectrum.modes.push_back(mode);
    }
    std::sort(spectrum.modes.begin(), spectrum.modes.end(),
              [](const auto& a, const auto& b) { return a.frequency < b.frequency; });
    return spectrum;
}

double frequency_splitting(const ModeSpectrum& spectrum) {
    if (spectrum.modes.size() != 2) {
        throw Error(ErrorCode::InconsistentParams, "frequency splitting is defined for two modes");
    }
    return std::abs(spectrum.modes[1].frequency - spectrum.modes[0].frequency);
}

double direct_splitting_formula(double g, double kappa1, double kappa2) {
    const double radicand = 4.0 * g * g - 0.25 * (kappa1 - kappa2) * (kappa1 - kappa2);
    if (radicand < 0.0) {
        throw Error(ErrorCode::InconsistentParams,
                    "splitting formula needs 4g^2 > (kappa1 - kappa2)^2 / 4");
    }
    return std::sqrt(radicand);
}

}  // namespace cavsim
