#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cavsim/common.hpp"

namespace cavsim {

/// One cavity mode: angular frequency plus its loss and coupling rates.
/// All rates are angular (rad/s). `gamma` is the rate into the coupling
/// cable and is zero for directly coupled systems.
struct CavityParams {
    double omega = 0.0;    ///< mode angular frequency (rad/s)
    double kappa_i = 0.0;  ///< internal loss rate (rad/s)
    double kappa_e = 0.0;  ///< external port coupling rate (rad/s)
    double gamma = 0.0;    ///< cable coupling rate (rad/s)

    /// Total decay rate kappa = kappa_i + kappa_e + gamma.
    double kappa() const { return kappa_i + kappa_e + gamma; }

    /// Throws InconsistentParams unless omega > 0 and all rates >= 0 and finite.
    void validate() const;
};

/// Inter-cavity coupling: either a direct coupling strength g or a cable
/// described by its one-way phase shift theta and attenuation exponent
/// gamma0_l0 (the product of the loss coefficient and the cable length).
struct CouplingSpec {
    enum class Kind { Direct, Cable };

    Kind kind = Kind::Direct;
    double g = 0.0;          ///< direct coupling strength (rad/s), Direct only
    double theta = 0.0;      ///< one-way cable phase shift (rad), Cable only; stored unreduced
    double gamma0_l0 = 0.0;  ///< dimensionless one-way attenuation exponent, Cable only

    static CouplingSpec direct(double g);
    static CouplingSpec cable(double theta, double gamma0_l0);

    bool is_direct() const { return kind == Kind::Direct; }
    bool is_cable() const { return kind == Kind::Cable; }

    void validate() const;
};

/// Reduced description of a cable-coupled pair: complex frequency shifts,
/// complex effective coupling, the tunneling phase, and effective loss rates.
struct EffectiveCoupling {
    cplx delta_omega_1{0.0, 0.0};  ///< complex frequency shift of cavity 1 (rad/s)
    cplx delta_omega_2{0.0, 0.0};  ///< complex frequency shift of cavity 2 (rad/s)
    cplx g_eff{0.0, 0.0};          ///< complex effective coupling (rad/s)
    double zeta = 0.0;             ///< tunneling phase 3*pi/2 + arg(g_eff), in [0, 2*pi)
    double kappa_eff_1 = 0.0;      ///< kappa_1 - 2*Im(delta_omega_1) (rad/s)
    double kappa_eff_2 = 0.0;      ///< kappa_2 - 2*Im(delta_omega_2) (rad/s)
};

/// Junction field amplitudes at the two cable ends.
struct CableFields {
    cplx b1{0.0, 0.0};
    cplx b2{0.0, 0.0};
};

/// Rotating-frame linear dynamical model dA/dt = matrix * A - drive.
/// Diagonal entries are -i*(omega_j - frame + delta_omega_j) - kappa_j/2,
/// so their real parts are nonpositive for any physical input (decay,
/// never gain). For 2-mode models the off-diagonal entries are equal.
struct LinearModel {
    Eigen::MatrixXcd matrix;              ///< dim x dim generator (rad/s)
    Eigen::VectorXd input_couplings;      ///< per-mode sqrt(kappa_e) (rad/s^(1/2))
    double frame_frequency = 0.0;         ///< rotating-frame angular frequency (rad/s)
    std::vector<std::string> labels;      ///< per-mode names

    int dim() const { return static_cast<int>(matrix.rows()); }

    /// Structural checks: square matrix, finite entries, nonpositive diagonal
    /// real parts, matching vector sizes. Throws on violation.
    void validate() const;
};

/// Chain of N >= 2 identical-frequency cavities with nearest-neighbor
/// coupling g; only the first and last cavities carry external ports.
struct ChainSpec {
    int n = 2;
    double g = 0.0;                        ///< nearest-neighbor coupling (rad/s)
    std::vector<double> kappa_i;           ///< internal rate per cavity, size n
    double kappa_e_first = 0.0;
    double kappa_e_last = 0.0;
    double omega = 0.0;                    ///< common frequency (rad/s)

    static ChainSpec uniform(int n, double g, double kappa_i, double kappa_e_first,
                             double kappa_e_last, double omega);

    /// Same parameters with a different cavity count (kappa_i re-broadcast
    /// from the first entry).
    ChainSpec with_size(int n) const;

    void validate() const;
};

/// Threshold on |1 - e^{2i*theta - gamma0_l0}| below which the cable
/// elimination is treated as singular.
inline constexpr double cable_singularity_threshold = 1e-9;

/// One-way cable propagation factor e^{i*theta - gamma0_l0/2}; theta is
/// reduced mod 2*pi before exponentiation.
cplx cable_one_way_factor(const CouplingSpec& coupling);

/// Two-mode model of a directly coupled pair in a rotating frame.
/// Requires a Direct coupling and gamma == 0 on both cavities.
LinearModel build_direct_model(const CavityParams& c1, const CavityParams& c2,
                               const CouplingSpec& coupling, double frame_frequency);

/// Solve the two junction-field equations
///   b1 = b2*e^{i*theta - gamma0_l0/2} + sqrt(gamma1)*a1
///   b2 = b1*e^{i*theta - gamma0_l0/2} + sqrt(gamma2)*a2
/// for (b1, b2). Throws CableResonanceSingularity when the round-trip
/// factor is within cable_singularity_threshold of 1.
CableFields eliminate_cable(cplx a1, cplx a2, const CouplingSpec& coupling,
                            double gamma1, double gamma2);

/// Closed-form reduced coupling of a cable-coupled pair:
///   delta_omega_j = -i*gamma_j*e^{2i*theta - gamma0_l0} / (1 - e^{2i*theta - gamma0_l0})
///   g_eff = -i*sqrt(gamma1*gamma2)*e^{i*theta - gamma0_l0/2} / (1 - e^{2i*theta - gamma0_l0})
/// with zeta = 3*pi/2 + arg(g_eff) reduced into [0, 2*pi) and
/// kappa_eff_j = kappa_j - 2*Im(delta_omega_j).
EffectiveCoupling effective_coupling(const CavityParams& c1, const CavityParams& c2,
                                     const CouplingSpec& coupling);

/// Two-mode model of a cable-coupled pair; the complex delta_omega_j is
/// folded into the diagonal so one generator covers both coupling types.
LinearModel build_cable_model(const CavityParams& c1, const CavityParams& c2,
                              const CouplingSpec& coupling, double frame_frequency);

/// Tridiagonal N-mode model of a cavity chain.
LinearModel build_chain_model(const ChainSpec& spec, double frame_frequency);

/// One-mode model of an isolated cavity (no coupling terms).
LinearModel single_mode_model(const CavityParams& c, double frame_frequency);

}  // namespace cavsim
