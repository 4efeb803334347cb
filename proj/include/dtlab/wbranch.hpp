#pragma once

#include <cmath>
#include <complex>

#include "dtlab/error.hpp"

// Principal-branch Lambert W on the cut plane and the branch functions
//
//   rho(z)      = -W0(-z),  z not in [1/e, inf)
//   rho_pm(t)   = theta*cot(theta) +/- i*theta  with (theta/sin theta)e^{-theta cot theta} = t
//
// rho inverts w -> w e^{-w} on Omega = { x+iy : -pi < y < pi, x < y cot y },
// with the convention 0*cot(0) = 1.

namespace dtlab::wbranch {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kE = 2.718281828459045235360287471352662498;
inline constexpr double kInvE = 0.367879441171442321595523770161460867;

namespace detail {

// Halley iteration on f(w) = w e^w - z. Caller supplies an in-basin start.
inline Complex halley_solve(Complex w, Complex z, int cap = 50) {
    const double scale = std::max(1.0, std::abs(z));
    const double target = 4e-15 * scale;
    for (int it = 0; it < cap; ++it) {
        const Complex ew = std::exp(w);
        const Complex f = w * ew - z;
        if (std::abs(f) <= target) return w;
        Complex w1 = w + 1.0;
        if (std::abs(w1) < 1e-12) w1 = Complex(1e-12, 0.0); // keep the step finite at the double root
        w -= f / (w1 * ew - (w + 2.0) * f / (2.0 * w1));
    }
    if (std::abs(w * std::exp(w) - z) <= 1e-13 * scale) return w;
    throw ConvergenceError("lambert_w0: Halley iteration did not reach tolerance");
}

// Taylor series at 0: sum_{n>=1} (-n)^{n-1}/n! z^n, used for |z| <= 0.2.
inline Complex small_z_series(Complex z) {
    Complex term = z;
    Complex sum = z;
    for (int n = 1; n < 140; ++n) {
        term *= -z * std::pow(1.0 + 1.0 / n, n - 1);
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

// Expansion about the branch point z = -1/e in p = sqrt(2(e z + 1)).
inline Complex branch_point_series(Complex z) {
    const Complex p = std::sqrt(2.0 * (kE * z + 1.0));
    const double q2 = -1.0 / 3.0;
    const double q3 = 11.0 / 72.0;
    const double q4 = -43.0 / 540.0;
    const double q5 = 769.0 / 17280.0;
    const double q6 = -221.0 / 8505.0;
    return -1.0 + p * (1.0 + p * (q2 + p * (q3 + p * (q4 + p * (q5 + p * q6)))));
}

inline Complex asymptotic_init(Complex z) {
    const Complex l1 = std::log(z);
    const Complex l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
}

} // namespace detail

// Principal branch W0. Accepts the closure point -1/e (-> -1); rejects the
// open ray (-inf, -1/e).
inline Complex w0(Complex z) {
    if (!(std::isfinite(z.real()) && std::isfinite(z.imag())))
        throw DomainError("w0: non-finite argument");
    if (z.imag() == 0.0 && z.real() < -kInvE) {
        if (z.real() < -kInvE - 1e-16)
            throw DomainError("w0: argument on the excluded ray (-inf, -1/e)");
        z = Complex(-kInvE, 0.0);
    }

    const double az = std::abs(z);
    if (az == 0.0) return z;
    if (az <= 0.2) return detail::halley_solve(detail::small_z_series(z), z);
    if (std::abs(kE * z + 1.0) <= 0.4) {
        const Complex w = detail::branch_point_series(z);
        // f'(w) vanishes at w = -1; the series alone is already past full
        // double accuracy this close in.
        if (std::abs(w + 1.0) < 1e-6) return w;
        return detail::halley_solve(w, z);
    }
    if (az >= 3.0) return detail::halley_solve(detail::asymptotic_init(z), z);

    // Moderate annulus: continue along the ray of constant argument from a
    // small-|z| anchor so the iterate never leaves the principal branch.
    const Complex phase = z / az;
    Complex w = detail::small_z_series(0.15 * phase);
    double m = 0.15;
    while (m < az) {
        m = std::min(az, 1.6 * m);
        const Complex zz = m * phase;
        if (std::abs(kE * zz + 1.0) <= 0.4) {
            w = detail::branch_point_series(zz);
            if (std::abs(w + 1.0) < 1e-6) continue;
        }
        w = detail::halley_solve(w, zz);
    }
    return w;
}

// rho(z) = -W0(-z) on the plane cut along [1/e, inf). Points within 1e-9 of
// the cut are rejected; a side must be chosen explicitly via rho_boundary.
inline Complex rho(Complex z) {
    if (std::abs(z.imag()) <= 1e-9 && z.real() >= kInvE - 1e-9)
        throw DomainError("rho: argument within 1e-9 of the cut [1/e, inf)");
    return -w0(-z);
}

namespace detail {

// log of t(theta) = (theta/sin theta) e^{-theta cot theta}; strictly
// increasing from -1 at theta=0 to +inf at theta=pi, and overflow-free.
inline double log_boundary_t(double theta) {
    if (theta == 0.0) return -1.0;
    const double s = std::sin(theta);
    return std::log(theta / s) - theta * (std::cos(theta) / s);
}

} // namespace detail

// Solves (theta/sin theta) e^{-theta cot theta} = t for theta in [0, pi).
inline double boundary_theta(double t) {
    if (!(t >= kInvE * (1.0 - 1e-12)))
        throw DomainError("rho_boundary: t < 1/e");
    const double logt = std::log(t);
    if (logt <= -1.0) return 0.0;

    double hi = 0.5 * kPi;
    while (detail::log_boundary_t(hi) < logt && kPi - hi > 1e-12)
        hi = kPi - 0.5 * (kPi - hi);
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (detail::log_boundary_t(mid) < logt ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

enum class Side { Plus, Minus };

// Boundary values rho_+/-(t) = theta cot(theta) +/- i theta, t >= 1/e.
inline Complex rho_boundary(double t, Side side) {
    const double theta = boundary_theta(t);
    const double re = theta == 0.0 ? 1.0 : theta * (std::cos(theta) / std::sin(theta));
    const double im = side == Side::Plus ? theta : -theta;
    return Complex(re, im);
}

// One point of the boundary parametrization, carrying its parameter.
struct BoundaryPoint {
    double theta = 0.0; // in [0, pi)
    double t = kInvE;   // (theta/sin theta) e^{-theta cot theta}
    Complex value;      // theta cot theta + i theta (upper sign)
};

inline BoundaryPoint boundary_point(double t) {
    BoundaryPoint p;
    p.theta = boundary_theta(t);
    p.t = t;
    p.value = rho_boundary(t, Side::Plus);
    return p;
}

// Open region Omega = { x+iy : -pi < y < pi, x < y cot y }, 0*cot(0) = 1.
// Points within rounding distance of the boundary curve count as outside,
// matching the openness of the region.
inline bool in_omega(Complex w) {
    const double x = w.real();
    const double y = w.imag();
    if (!(y > -kPi && y < kPi)) return false;
    const double ycoty = y == 0.0 ? 1.0 : y / std::tan(y);
    return x < ycoty - 1e-15 * (1.0 + std::fabs(x) + std::fabs(ycoty));
}

} // namespace dtlab::wbranch
