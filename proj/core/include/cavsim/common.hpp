#pragma once

#include <cmath>
#include <complex>
#include <numbers>

namespace cavsim {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Reduce an angle into [0, 2*pi).
inline double wrap_two_pi(double angle) {
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

/// Reduce an angle into (-pi, pi].
inline double principal_angle(double angle) {
    const double r = std::remainder(angle, two_pi);
    return (r <= -pi) ? pi : r;
}

/// Distance on the circle between two angles, in [0, pi].
inline double circular_distance(double a, double b) {
    return std::abs(principal_angle(a - b));
}

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace cavsim
