#pragma once

#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "cavsim/analysis.hpp"
#include "cavsim/common.hpp"
#include "cavsim/dynamics.hpp"
#include "cavsim/integrator.hpp"

namespace cavsim {

/// Truncated Fock-space setup for the full quantum model (hbar = 1; all
/// energies are angular frequencies).
struct FockConfig {
    int dim_per_mode = 10;      ///< Fock levels 0..d-1 per cavity
    double n_thermal = 0.0;     ///< mean bath occupancy
    int modes = 2;              ///< 1 or 2
    double leakage_tol = 1e-5;  ///< abort threshold on top-level population

    int total_dim() const;
    void validate() const;
};

/// Density matrix snapshot.
struct DensityState {
    Eigen::MatrixXcd rho;
    double time = 0.0;
};

/// Directly coupled 1-2 mode system parameters for the master equation.
struct LindbladParams {
    std::vector<double> omega;  ///< per-mode angular frequency (rad/s)
    std::vector<double> kappa;  ///< per-mode total decay rate (rad/s)
    double g = 0.0;             ///< inter-mode coupling (rad/s), 2-mode only
    double frame_frequency = 0.0;

    void validate(int modes) const;
};

/// Lindblad generator
///   drho/dt = -i[H, rho] + sum_j kappa_j (n_th+1) D[a_j] rho
///                        + sum_j kappa_j n_th D[a_j^dag] rho
/// applied operator-by-operator (the dense dim^2 x dim^2 superoperator is
/// never materialized for large spaces; a dense form is available for
/// small-dimension testing).
class LindbladGenerator {
  public:
    using Sparse = Eigen::SparseMatrix<cplx>;

    LindbladGenerator(const LindbladParams& params, const FockConfig& config);

    /// Time derivative of rho.
    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const;

    /// Dense superoperator acting on column-major vec(rho); only allowed
    /// for total dimensions up to 64.
    Eigen::MatrixXcd superoperator() const;

    int dim() const { return dim_; }
    int modes() const { return config_.modes; }
    const FockConfig& config() const { return config_; }

    /// Product of truncated, renormalized coherent states.
    Eigen::MatrixXcd coherent_density(const Eigen::VectorXcd& alphas) const;

    cplx mean_amplitude(const Eigen::MatrixXcd& rho, int mode) const;
    double mean_photon_number(const Eigen::MatrixXcd& rho, int mode) const;

    /// Population of the top Fock level of one mode.
    double top_level_population(const Eigen::MatrixXcd& rho, int mode) const;

  private:
    FockConfig config_;
    LindbladParams params_;
    int dim_ = 0;
    Sparse hamiltonian_;
    std::vector<Sparse> lower_;             ///< a_j in the full space
    std::vector<Sparse> raise_;             ///< a_j^dag
    std::vector<Eigen::VectorXd> number_;   ///< diag(a_j^dag a_j)
    std::vector<Eigen::VectorXd> number1_;  ///< diag(a_j a_j^dag)
    std::vector<Eigen::VectorXd> top_;      ///< diag of the top-level projector
};

LindbladGenerator build_liouvillian_action(const LindbladParams& params, const FockConfig& config);

/// Expectation-value record of a master-equation run.
struct ExpectationTrajectory {
    std::vector<double> times;
    std::vector<std::vector<cplx>> a_mean;    ///< [mode][sample]
    std::vector<std::vector<double>> n_mean;  ///< [mode][sample]
    DensityState final_state;
    double max_leakage = 0.0;
};

/// Integrate the master equation from a product coherent state and record
/// per-mode <a> and <n>. Aborts with DimensionTooSmall when the top-level
/// population exceeds the configured leakage tolerance.
ExpectationTrajectory lindblad_evolve(const LindbladParams& params, const InitialState& init,
                                      const FockConfig& config, const std::vector<double>& times,
                                      const AdaptiveOptions& opt = {1e-10, 1e-12});

/// Lifetime grids of both cavities over (delta_phi, g) from master-equation
/// photon-number traces, |alpha| = 1 initial states.
struct LindbladSweepResult {
    std::vector<double> delta_phi_values;
    std::vector<double> g_values;
    std::vector<SweepCell> cells;  ///< row-major over delta_phi (outer) x g

    const SweepCell& at(std::size_t i_phi, std::size_t i_g) const {
        return cells.at(i_phi * g_values.size() + i_g);
    }
};

LindbladSweepResult lindblad_lifetime_sweep(const std::vector<double>& delta_phi_values,
                                            const std::vector<double>& g_values, double kappa1,
                                            double kappa2, const FockConfig& config,
                                            TimeGridSpec grid = {}, int threads = 1);

/// Bose factor 1/(exp(hbar*omega/(k_B T)) - 1).
double thermal_occupancy(double temperature_kelvin, double omega_rad_per_s);

}  // namespace cavsim
