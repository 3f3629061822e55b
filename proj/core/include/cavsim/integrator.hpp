#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "cavsim/errors.hpp"

namespace cavsim {

struct AdaptiveOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 50'000'000;
};

/// Embedded Dormand-Prince 5(4) step with FSAL, adaptive step control.
/// `State` is any Eigen vector/matrix type with complex entries; `rhs`
/// maps a state to its time derivative (autonomous systems only, which
/// covers every rotating-frame generator used here).
///
/// Advances `y` from t0 to t1 in place. The optional cache carries the FSAL
/// derivative and the adapted step size across consecutive segments of one
/// trajectory, so stepping through a dense sample grid stays cheap.
template <typename State>
struct Dp54Cache {
    State k1;
    double h_ctrl = 0.0;
    bool fresh = false;
};

template <typename State, typename Rhs>
void integrate_adaptive(Rhs&& rhs, State& y, double t0, double t1, const AdaptiveOptions& opt,
                        Dp54Cache<State>* cache = nullptr) {
    if (!(t1 > t0)) {
        if (t1 == t0) {
            return;
        }
        throw Error(ErrorCode::TimeGrid, "integration interval must move forward");
    }

    // Dormand-Prince coefficients.
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // 5th-order minus embedded 4th-order weights.
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State k1;
    if (cache != nullptr && cache->fresh) {
        k1 = cache->k1;
    } else {
        k1 = rhs(y);
    }

    auto scaled_norm = [&](const State& err, const State& y0, const State& y1) {
        const auto scale =
            opt.atol + opt.rtol * y0.array().abs().max(y1.array().abs());
        const double n2 = (err.array().abs() / scale).square().sum();
        return std::sqrt(n2 / static_cast<double>(err.size()));
    };

    double t = t0;
    double h_ctrl = 0.0;
    if (cache != nullptr && cache->fresh && cache->h_ctrl > 0.0) {
        h_ctrl = cache->h_ctrl;
    } else {
        // crude first step from the derivative magnitude; the controller
        // homes in within a few steps
        h_ctrl = (t1 - t0) / 16.0;
        const double dy = std::sqrt(y.array().abs().square().sum()) + opt.atol;
        const double df = std::sqrt(k1.array().abs().square().sum());
        if (df > 0.0) {
            h_ctrl = std::min(h_ctrl, 0.1 * dy / df);
        }
        h_ctrl = std::max(h_ctrl, (t1 - t0) * 1e-12);
    }
    h_ctrl = std::min(h_ctrl, opt.max_step);

    std::size_t steps = 0;
    while (t < t1) {
        if (++steps > opt.max_steps) {
            throw Error(ErrorCode::Internal, "adaptive integrator exceeded its step budget");
        }
        const bool clipped = h_ctrl >= t1 - t;
        const double h = clipped ? (t1 - t) : h_ctrl;

        const State k2 = rhs(State(y + h * (a21 * k1)));
        const State k3 = rhs(State(y + h * (a31 * k1 + a32 * k2)));
        const State k4 = rhs(State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        const State k5 = rhs(State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        const State k6 = rhs(State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        const State y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const State k7 = rhs(y_new);
        const State err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

        const double err_norm = scaled_norm(err, y, y_new);
        const double factor = (err_norm > 0.0)
                                  ? std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0)
                                  : 5.0;
        if (err_norm <= 1.0) {
            t = clipped ? t1 : t + h;
            y = y_new;
            k1 = k7;  // FSAL
            if (!clipped || factor < 1.0) {
                h_ctrl = std::min(h * factor, opt.max_step);
            }
        } else {
            h_ctrl = std::min(h * factor, opt.max_step);
        }
    }

    if (cache != nullptr) {
        cache->k1 = k1;
        cache->h_ctrl = h_ctrl;
        cache->fresh = true;
    }
}

}  // namespace cavsim
