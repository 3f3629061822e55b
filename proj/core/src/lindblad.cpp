#include "cavsim/lindblad.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include <unsupported/Eigen/KroneckerProduct>

#include "cavsim/errors.hpp"

namespace cavsim {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

Eigen::SparseMatrix<cplx> to_sparse(const Eigen::MatrixXcd& dense) {
    return dense.sparseView(1.0, 0.0);
}

/// Single-mode annihilation operator, levels 0..d-1.
Eigen::MatrixXcd annihilation(int d) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        a(n - 1, n) = cplx(std::sqrt(static_cast<double>(n)), 0.0);
    }
    return a;
}

/// Truncated coherent-state vector, renormalized.
Eigen::VectorXcd coherent_vector(int d, cplx alpha) {
    Eigen::VectorXcd c(d);
    c(0) = cplx(1.0, 0.0);
    for (int n = 1; n < d; ++n) {
        c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    c *= std::exp(-0.5 * std::norm(alpha));
    const double norm = c.norm();
    if (!(norm > 0.0)) {
        throw Error(ErrorCode::NonFiniteInput, "coherent amplitude too large for this truncation");
    }
    return c / norm;
}

}  // namespace

int FockConfig::total_dim() const {
    int total = 1;
    for (int m = 0; m < modes; ++m) {
        total *= dim_per_mode;
    }
    return total;
}

void FockConfig::validate() const {
    if (dim_per_mode < 2) {
        throw Error(ErrorCode::DimensionTooSmall, "Fock truncation needs at least two levels");
    }
    if (modes != 1 && modes != 2) {
        throw Error(ErrorCode::InconsistentParams, "the quantum model covers one or two modes");
    }
    if (!(n_thermal >= 0.0) || !std::isfinite(n_thermal)) {
        throw Error(ErrorCode::InconsistentParams, "thermal occupancy must be nonnegative");
    }
    if (!(leakage_tol > 0.0)) {
        throw Error(ErrorCode::InconsistentParams, "leakage tolerance must be positive");
    }
}

void LindbladParams::validate(int modes) const {
    if (omega.size() != static_cast<std::size_t>(modes) ||
        kappa.size() != static_cast<std::size_t>(modes)) {
        throw Error(ErrorCode::InconsistentParams,
                    "master-equation parameters need one omega and kappa per mode");
    }
    for (int m = 0; m < modes; ++m) {
        if (!std::isfinite(omega[static_cast<std::size_t>(m)]) ||
            !std::isfinite(kappa[static_cast<std::size_t>(m)]) ||
            kappa[static_cast<std::size_t>(m)] < 0.0) {
            throw Error(ErrorCode::InconsistentParams, "mode rates must be finite and nonnegative");
        }
    }
    if (!std::isfinite(g) || (modes == 1 && g != 0.0)) {
        throw Error(ErrorCode::InconsistentParams, "coupling g applies to two-mode systems only");
    }
    if (!std::isfinite(frame_frequency)) {
        throw Error(ErrorCode::NonFiniteInput, "frame frequency must be finite");
    }
}

LindbladGenerator::LindbladGenerator(const LindbladParams& params, const FockConfig& config)
    : config_(config), params_(params) {
    config_.validate();
    params_.validate(config_.modes);
    dim_ = config_.total_dim();

    const int d = config_.dim_per_mode;
    const Eigen::MatrixXcd a = annihilation(d);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);

    std::vector<Eigen::MatrixXcd> mode_ops;
    if (config_.modes == 1) {
        mode_ops.push_back(a);
    } else {
        mode_ops.push_back(Eigen::kroneckerProduct(a, id).eval());
        mode_ops.push_back(Eigen::kroneckerProduct(id, a).eval());
    }

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim_, dim_);
    for (int m = 0; m < config_.modes; ++m) {
        const double detuning = params_.omega[static_cast<std::size_t>(m)] - params_.frame_frequency;
        const Eigen::MatrixXcd& am = mode_ops[static_cast<std::size_t>(m)];
        h += detuning * (am.adjoint() * am);

        lower_.push_back(to_sparse(am));
        raise_.push_back(to_sparse(am.adjoint()));
        number_.push_back((am.adjoint() * am).diagonal().real());
        number1_.push_back((am * am.adjoint()).diagonal().real());

        Eigen::VectorXd top = Eigen::VectorXd::Zero(dim_);
        for (int i = 0; i < dim_; ++i) {
            const int level = (config_.modes == 1) ? i : (m == 0 ? i / d : i % d);
            if (level == d - 1) {
                top(i) = 1.0;
            }
        }
        top_.push_back(std::move(top));
    }
    if (config_.modes == 2) {
        h += params_.g * (mode_ops[0].adjoint() * mode_ops[1] + mode_ops[0] * mode_ops[1].adjoint());
    }
    hamiltonian_ = to_sparse(h);
}

Eigen::MatrixXcd LindbladGenerator::apply(const Eigen::MatrixXcd& rho) const {
    const cplx minus_i(0.0, -1.0);
    Eigen::MatrixXcd deriv = minus_i * (hamiltonian_ * rho - rho * hamiltonian_);
    const double n_th = config_.n_thermal;
    for (int m = 0; m < config_.modes; ++m) {
        const std::size_t j = static_cast<std::size_t>(m);
        const double kappa = params_.kappa[j];
        if (kappa == 0.0) {
            continue;
        }
        const double down = kappa * (n_th + 1.0);
        deriv.noalias() += down * (lower_[j] * rho * raise_[j]);
        deriv.noalias() -= (0.5 * down) * (number_[j].asDiagonal() * rho);
        deriv.noalias() -= (0.5 * down) * (rho * number_[j].asDiagonal());
        if (n_th > 0.0) {
            const double up = kappa * n_th;
            deriv.noalias() += up * (raise_[j] * rho * lower_[j]);
            deriv.noalias() -= (0.5 * up) * (number1_[j].asDiagonal() * rho);
            deriv.noalias() -= (0.5 * up) * (rho * number1_[j].asDiagonal());
        }
    }
    return deriv;
}

Eigen::MatrixXcd LindbladGenerator::superoperator() const {
    if (dim_ > 64) {
        throw Error(ErrorCode::InconsistentParams,
                    "dense superoperator is restricted to total dimension <= 64");
    }
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim_, dim_);
    const Eigen::MatrixXcd h = Eigen::MatrixXcd(hamiltonian_);
    const cplx minus_i(0.0, -1.0);

    // vec(A rho B) = (B^T (x) A) vec(rho), column-major vec
    Eigen::MatrixXcd superop =
        minus_i * (Eigen::kroneckerProduct(id, h).eval() -
                   Eigen::kroneckerProduct(h.transpose(), id).eval());
    const double n_th = config_.n_thermal;
    for (int m = 0; m < config_.modes; ++m) {
        const std::size_t j = static_cast<std::size_t>(m);
        const double kappa = params_.kappa[j];
        if (kappa == 0.0) {
            continue;
        }
        const Eigen::MatrixXcd a = Eigen::MatrixXcd(lower_[j]);
        const Eigen::MatrixXcd ad = Eigen::MatrixXcd(raise_[j]);
        const Eigen::MatrixXcd n_op = number_[j].cast<cplx>().asDiagonal();
        const Eigen::MatrixXcd n1_op = number1_[j].cast<cplx>().asDiagonal();
        superop += kappa * (n_th + 1.0) *
                   (Eigen::kroneckerProduct(a.conjugate(), a).eval() -
                    0.5 * Eigen::kroneckerProduct(id, n_op).eval() -
                    0.5 * Eigen::kroneckerProduct(n_op.transpose(), id).eval());
        if (n_th > 0.0) {
            superop += kappa * n_th *
                       (Eigen::kroneckerProduct(ad.conjugate(), ad).eval() -
                        0.5 * Eigen::kroneckerProduct(id, n1_op).eval() -
                        0.5 * Eigen::kroneckerProduct(n1_op.transpose(), id).eval());
        }
    }
    return superop;
}

Eigen::MatrixXcd LindbladGenerator::coherent_density(const Eigen::VectorXcd& alphas) const {
    if (alphas.size() != config_.modes) {
        throw Error(ErrorCode::InconsistentParams, "one coherent amplitude per mode required");
    }
    Eigen::VectorXcd psi = coherent_vector(config_.dim_per_mode, alphas(0));
    if (config_.modes == 2) {
        psi = Eigen::kroneckerProduct(psi, coherent_vector(config_.dim_per_mode, alphas(1))).eval();
    }
    return psi * psi.adjoint();
}

cplx LindbladGenerator::mean_amplitude(const Eigen::MatrixXcd& rho, int mode) const {
    // tr(a rho) = sum over the sparse entries of a
    const Sparse& a = lower_[static_cast<std::size_t>(mode)];
    cplx sum(0.0, 0.0);
    for (int outer = 0; outer < a.outerSize(); ++outer) {
        for (Sparse::InnerIterator it(a, outer); it; ++it) {
            sum += it.value() * rho(it.col(), it.row());
        }
    }
    return sum;
}

double LindbladGenerator::mean_photon_number(const Eigen::MatrixXcd& rho, int mode) const {
    return (number_[static_cast<std::size_t>(mode)].array() *
            rho.diagonal().real().array())
        .sum();
}

double LindbladGenerator::top_level_population(const Eigen::MatrixXcd& rho, int mode) const {
    return (top_[static_cast<std::size_t>(mode)].array() * rho.diagonal().real().array()).sum();
}

LindbladGenerator build_liouvillian_action(const LindbladParams& params, const FockConfig& config) {
    return LindbladGenerator(params, config);
}

ExpectationTrajectory lindblad_evolve(const LindbladParams& params, const InitialState& init,
                                      const FockConfig& config, const std::vector<double>& times,
                                      const AdaptiveOptions& opt) {
    config.validate();
    if (times.empty()) {
        throw Error(ErrorCode::TimeGrid, "sample grid is empty");
    }
    if (init.amplitudes.size() != config.modes) {
        throw Error(ErrorCode::InconsistentParams, "one coherent amplitude per mode required");
    }
    for (int m = 0; m < config.modes; ++m) {
        const double mag = std::abs(init.amplitudes(m));
        if (mag * mag + 5.0 * mag >= static_cast<double>(config.dim_per_mode)) {
            std::ostringstream oss;
            oss << "|alpha|=" << mag << " dim_per_mode=" << config.dim_per_mode;
            throw Error(ErrorCode::DimensionTooSmall,
                        "coherent amplitude too large for the Fock truncation", oss.str());
        }
    }

    const LindbladGenerator generator(params, config);
    ExpectationTrajectory traj;
    traj.times = times;
    traj.a_mean.assign(static_cast<std::size_t>(config.modes), std::vector<cplx>(times.size()));
    traj.n_mean.assign(static_cast<std::size_t>(config.modes), std::vector<double>(times.size()));

    Eigen::MatrixXcd rho = generator.coherent_density(init.amplitudes);
    auto record = [&](std::size_t k) {
        for (int m = 0; m < config.modes; ++m) {
            traj.a_mean[static_cast<std::size_t>(m)][k] = generator.mean_amplitude(rho, m);
            traj.n_mean[static_cast<std::size_t>(m)][k] = generator.mean_photon_number(rho, m);
            const double leakage = generator.top_level_population(rho, m);
            traj.max_leakage = std::max(traj.max_leakage, leakage);
            if (leakage > config.leakage_tol) {
                std::ostringstream oss;
                oss << "leakage=" << leakage << " tol=" << config.leakage_tol
                    << " t=" << traj.times[k];
                throw Error(ErrorCode::DimensionTooSmall,
                            "top Fock level population exceeds the truncation tolerance",
                            oss.str());
            }
        }
    };

    record(0);
    auto rhs = [&](const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd { return generator.apply(y); };
    Dp54Cache<Eigen::MatrixXcd> cache;
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw Error(ErrorCode::TimeGrid, "sample instants must be strictly increasing");
        }
        integrate_adaptive(rhs, rho, times[k - 1], times[k], opt, &cache);
        record(k);
    }
    traj.final_state.rho = std::move(rho);
    traj.final_state.time = times.back();
    return traj;
}

LindbladSweepResult lindblad_lifetime_sweep(const std::vector<double>& delta_phi_values,
                                            const std::vector<double>& g_values, double kappa1,
                                            double kappa2, const FockConfig& config,
                                            TimeGridSpec grid, int threads) {
    config.validate();
    if (config.modes != 2) {
        throw Error(ErrorCode::InconsistentParams, "the lifetime sweep covers two-mode systems");
    }
    if (delta_phi_values.empty() || g_values.empty()) {
        throw Error(ErrorCode::ConfigSchema, "lifetime sweep needs nonempty axis values");
    }
    if (!(kappa1 > 0.0) || !(kappa2 > 0.0)) {
        throw Error(ErrorCode::InconsistentParams, "sweep decay rates must be positive");
    }

    const double slowest = 1.0 / std::min(kappa1, kappa2);
    const double t_max = grid.t_max > 0.0 ? grid.t_max : 8.0 * slowest;
    const std::vector<double> times = uniform_grid(t_max, grid.samples);

    LindbladSweepResult result;
    result.delta_phi_values = delta_phi_values;
    result.g_values = g_values;
    result.cells.resize(delta_phi_values.size() * g_values.size());

    auto run_point = [&](std::size_t flat) {
        const std::size_t i_phi = flat / g_values.size();
        const std::size_t i_g = flat % g_values.size();
        SweepCell cell;
        cell.delta_phi = wrap_two_pi(delta_phi_values[i_phi]);
        cell.zeta = wrap_two_pi(1.5 * pi);
        try {
            LindbladParams params;
            // resonant pair evolved in its own frame
            params.omega = {1.0, 1.0};
            params.kappa = {kappa1, kappa2};
            params.g = g_values[i_g];
            params.frame_frequency = 1.0;

            InitialState init;
            init.amplitudes.resize(2);
            init.amplitudes(0) = cplx(1.0, 0.0);
            init.amplitudes(1) = std::polar(1.0, delta_phi_values[i_phi]);

            const ExpectationTrajectory traj = lindblad_evolve(params, init, config, times);
            cell.lifetimes.push_back(photon_lifetime_series(traj.times, traj.n_mean[0]));
            cell.lifetimes.push_back(photon_lifetime_series(traj.times, traj.n_mean[1]));
            cell.ok = true;
        } catch (const Error& e) {
            cell.error_code = error_code_name(e.code());
            cell.error = e.what();
        }
        result.cells[flat] = std::move(cell);
    };

    const std::size_t total = result.cells.size();
    const std::size_t workers =
        std::min(static_cast<std::size_t>(std::max(1, threads)), total);
    if (workers <= 1) {
        for (std::size_t flat = 0; flat < total; ++flat) {
            run_point(flat);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (std::size_t flat = next.fetch_add(1); flat < total;
                     flat = next.fetch_add(1)) {
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

double thermal_occupancy(double temperature_kelvin, double omega_rad_per_s) {
    constexpr double hbar = 1.054571817e-34;  // J s
    constexpr double k_b = 1.380649e-23;      // J/K
    if (!(temperature_kelvin > 0.0) || !(omega_rad_per_s > 0.0)) {
        return 0.0;
    }
    const double x = hbar * omega_rad_per_s / (k_b * temperature_kelvin);
    return 1.0 / std::expm1(x);
}

}  // namespace cavsim
