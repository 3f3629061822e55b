#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cavsim/common.hpp"
#include "cavsim/integrator.hpp"
#include "cavsim/model.hpp"

namespace cavsim {

/// Coherent input at one port, constant in the rotating frame.
struct DriveSpec {
    int port = 0;                ///< mode index receiving the input
    cplx amplitude{0.0, 0.0};    ///< input amplitude a_in (arbitrary normalization)
    double frequency = 0.0;      ///< drive angular frequency (rad/s)
};

/// Per-mode coherent-state amplitudes at t = 0.
struct InitialState {
    Eigen::VectorXcd amplitudes;

    /// Phase difference arg(alpha2) - arg(alpha1) mod 2*pi (2-mode states).
    double delta_phi() const;
};

/// Sampled rotating-frame envelopes and photon numbers.
struct Trajectory {
    std::vector<double> times;                        ///< strictly increasing, times[0] = 0
    std::vector<std::vector<cplx>> amplitudes;        ///< [mode][sample]
    std::vector<std::vector<double>> photon_numbers;  ///< [mode][sample] = |A|^2
    double frame_frequency = 0.0;

    int modes() const { return static_cast<int>(amplitudes.size()); }
};

/// Eigenvalues of the generator with derived frequencies, decay rates and
/// Q factors, sorted by frequency.
struct ModeSpectrum {
    struct Mode {
        cplx eigenvalue{0.0, 0.0};  ///< rotating-frame eigenvalue (rad/s)
        double frequency = 0.0;     ///< lab-frame angular frequency (rad/s)
        double decay_rate = 0.0;    ///< energy decay rate -2*Re(eigenvalue) (rad/s)
        double q = 0.0;             ///< frequency / decay_rate
    };
    std::vector<Mode> modes;
    double frame_frequency = 0.0;
};

struct DecayProtocolResult {
    Trajectory trajectory;
    std::vector<double> output_power;  ///< kappa_e * |A_obs|^2, arbitrary units
    int observe_port = 0;
};

/// Uniform grid of `samples` points covering [0, t_max].
std::vector<double> uniform_grid(double t_max, int samples);

/// Detuning of a drive from a mode's shifted resonance,
/// drive_frequency - omega - Re(delta_omega).
double drive_detuning(const DriveSpec& drive, double omega, cplx delta_omega = {});

/// Free decay A(t) = exp(M t) A(0) via scaling-and-squaring matrix
/// exponentials (exact for these time-invariant generators).
Trajectory evolve_free(const LinearModel& model, const InitialState& init,
                       const std::vector<double>& times);

/// Same trajectory by adaptive Runge-Kutta integration; kept as an
/// independent cross-check of the matrix-exponential path.
Trajectory evolve_free_rk(const LinearModel& model, const InitialState& init,
                          const std::vector<double>& times, const AdaptiveOptions& opt = {});

/// Driven evolution dA/dt = M A - s with s = sqrt(kappa_e) a_in at the
/// driven port. The drive must be resonant with the frame so that s is
/// constant; the solution is the exact affine propagation
/// A(t) = A_ss + exp(M t) (A0 - A_ss).
Trajectory evolve_driven(const LinearModel& model, const InitialState& init,
                         const DriveSpec& drive, const std::vector<double>& times);

Trajectory evolve_driven_rk(const LinearModel& model, const InitialState& init,
                            const DriveSpec& drive, const std::vector<double>& times,
                            const AdaptiveOptions& opt = {});

/// Steady state A_ss = M^{-1} s of the driven system. Requires every
/// eigenvalue of M to have a strictly negative real part.
InitialState steady_state(const LinearModel& model, const DriveSpec& drive);

/// Drive one port to steady state, switch the input off at t = 0, and
/// record the free decay plus the emitted power at the observed port.
DecayProtocolResult decay_protocol(const LinearModel& model, const DriveSpec& drive,
                                   int observe_port, const std::vector<double>& times);

ModeSpectrum eigenmodes(const LinearModel& model);

/// Angular frequency difference of the two spectrum modes (2-mode spectra).
double frequency_splitting(const ModeSpectrum& spectrum);

/// Resonant direct-coupling splitting sqrt(4 g^2 - (kappa1 - kappa2)^2 / 4);
/// valid when the radicand is positive.
double direct_splitting_formula(double g, double kappa1, double kappa2);

}  // namespace cavsim
