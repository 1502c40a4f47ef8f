#pragma once

#include <cmath>
#include <complex>

#include "fht/geometry.hpp"

namespace fht {

using cplx = std::complex<double>;

/// Shore selector for boundary values of functions cut along the real axis.
enum class Shore { upper, lower };

/// (z - c)^p with the cut on (-infty, c]; plain principal branch.
inline cplx pow_cut(cplx z, double c, double p) {
    return std::pow(z - c, p);
}

/// e^{i p pi}, exact on quarter turns so shore values land exactly on the
/// coordinate axes instead of carrying rounding noise into sign decisions.
inline cplx half_turn_phase(double p) {
    double m = p - 2.0 * std::floor(0.5 * p); // p mod 2 in [0, 2)
    if (m == 0.0) return {1.0, 0.0};
    if (m == 0.5) return {0.0, 1.0};
    if (m == 1.0) return {-1.0, 0.0};
    if (m == 1.5) return {0.0, -1.0};
    return {std::cos(p * M_PI), std::sin(p * M_PI)};
}

/// Boundary value of (x - c)^p on the requested shore of the cut (-infty, c].
/// Exact: no epsilon offsets. x == c is a branch point.
inline cplx pow_cut(double x, double c, double p, Shore shore) {
    if (x == c) throw branch_point_error("branch point in pow_cut");
    if (x > c) return std::pow(x - c, p);
    const double mod = std::pow(c - x, p);
    return mod * half_turn_phase(shore == Shore::upper ? p : -p);
}

} // namespace fht
