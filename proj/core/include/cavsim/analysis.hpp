#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cavsim/dynamics.hpp"
#include "cavsim/model.hpp"

namespace cavsim {

/// Photon lifetime extracted from an energy trace: the first instant the
/// energy crosses 1/e of its initial value (the operational definition,
/// well defined even for beating decays).
struct LifetimeResult {
    double t_1e = 0.0;                 ///< first 1/e crossing (s), valid when crossing_found
    double q_equivalent = 0.0;         ///< omega * t_1e
    std::optional<double> fit_kappa;   ///< log-slope decay rate over a fit window (rad/s)
    bool crossing_found = false;
    bool fit_discrepancy = false;      ///< omega*t_1e vs omega/fit_kappa differ above 10%
};

enum class Interference { Constructive, Destructive, Intermediate };

const char* interference_name(Interference verdict);

struct InterferenceVerdict {
    int cavity_index = 1;  ///< 1 or 2
    Interference verdict = Interference::Intermediate;
    double residual = 0.0;  ///< distance (rad) to the nearest exact condition, in [0, pi/2]
};

/// First 1/e crossing of an energy series, located by linear interpolation
/// in log-energy between the bracketing samples. `omega` scales
/// q_equivalent (pass the lab-frame mode frequency).
LifetimeResult photon_lifetime_series(const std::vector<double>& times,
                                      const std::vector<double>& energy, double omega = 0.0);

/// Lifetime of one mode's photon-number trace. q_equivalent uses `omega`
/// when given, else the trajectory's frame frequency.
LifetimeResult photon_lifetime(const Trajectory& traj, int mode,
                               std::optional<double> omega = std::nullopt);

/// Interference class at a given initial phase difference and tunneling
/// phase. Cavity 1 tests delta_phi + zeta against even/odd multiples of pi,
/// cavity 2 tests delta_phi - zeta. Direct coupling is the zeta = 3*pi/2
/// special case.
InterferenceVerdict classify_interference(double delta_phi, double zeta, int cavity,
                                          double tolerance = 0.05);

/// Log-slope fit of a photon-number trace over a window given as fractions
/// of the trace span; returns the first-crossing lifetime with fit_kappa
/// populated and the q comparison flag set.
LifetimeResult q_from_decay(const Trajectory& traj, int mode, double omega,
                            std::pair<double, double> fit_window);

// ---------------------------------------------------------------------------
// Sweep engine
// ---------------------------------------------------------------------------

struct SweepAxis {
    std::string parameter;       ///< delta_phi | theta | g | gamma0_l0 | gamma1 | gamma2 | n
    std::vector<double> values;
};

struct TimeGridSpec {
    double t_max = 0.0;  ///< 0 = auto: 8 bare 1/e times
    int samples = 2000;
};

/// Free-decay lifetime sweep over one or two axes. Each grid point rebuilds
/// the system with the axis values applied, starts from amplitudes
/// (|alpha|, |alpha| e^{i delta_phi}) and measures every mode's lifetime.
/// The "n" axis instead sweeps chain length with the steady-state
/// preparation protocol and needs `chain_base`.
struct SweepSpec {
    std::vector<SweepAxis> axes;            // 1 or 2
    CavityParams c1, c2;
    CouplingSpec coupling;
    std::optional<ChainSpec> chain_base;    // required by the "n" axis
    double frame_frequency = 0.0;
    double alpha_abs = 1.0;
    double base_delta_phi = 0.0;            // used when delta_phi is not an axis
    TimeGridSpec grid;
    int target_mode = 1;                    // 0-based mode index for argmax queries
};

/// One grid point: lifetimes for every mode, or the error that point hit.
struct SweepCell {
    bool ok = false;
    std::string error_code;
    std::string error;
    std::vector<LifetimeResult> lifetimes;
    double delta_phi = 0.0;  ///< initial phase difference used at this point
    double zeta = 0.0;       ///< tunneling phase of this point's coupling
};

struct SweepResult {
    std::vector<SweepAxis> axes;
    std::vector<SweepCell> cells;  ///< row-major over axes[0] (outer) x axes[1]

    std::size_t size() const { return cells.size(); }
    const SweepCell& at(std::size_t i0, std::size_t i1 = 0) const;
};

/// Runs every grid point (independent pure computations; `threads` > 1
/// executes them in parallel with results ordered by grid index).
SweepResult sweep_lifetime(const SweepSpec& spec, int threads = 1);

/// Per-N lifetime of the last cavity after resonant left-port steady-state
/// preparation, plus an ordinary-least-squares fit of t_1e versus N.
struct ChainScalingResult {
    std::vector<int> n_values;
    std::vector<LifetimeResult> lifetimes;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

ChainScalingResult chain_lifetime_scaling(const ChainSpec& base, const std::vector<int>& n_values,
                                          TimeGridSpec grid = {});

/// Ordinary least squares y = intercept + slope * x with R^2.
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace cavsim
