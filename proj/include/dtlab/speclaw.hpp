#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dtlab/error.hpp"
#include "dtlab/quadrature.hpp"

// Spectral law of T*T on [0, e], given parametrically on v in (0, pi):
//
//   sigma(v) = (sin v / v) e^{v cot v}          (decreasing bijection onto (0,e))
//   phi(sigma(v)) = (1/pi) sin v e^{-v cot v}   (density)
//   F(sigma(v)) = 1 - v/pi + sin^2 v/(pi v)     (CDF)
//
// All integrals against the law are pulled back to v; the pullback weight
// below is -d/dv F(sigma(v)).

namespace dtlab::speclaw {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kE = 2.718281828459045235360287471352662498;

namespace detail {

inline double v_cot_v(double v) { return v == 0.0 ? 1.0 : v * (std::cos(v) / std::sin(v)); }

} // namespace detail

inline double sigma(double v) {
    if (!(v >= 0.0 && v < kPi)) throw DomainError("sigma: v outside [0, pi)");
    if (v == 0.0) return kE;
    return (std::sin(v) / v) * std::exp(detail::v_cot_v(v));
}

inline double phi_from_v(double v) {
    if (!(v > 0.0 && v < kPi)) throw DomainError("phi: v outside (0, pi)");
    return std::sin(v) / kPi * std::exp(-detail::v_cot_v(v));
}

inline double cdf_from_v(double v) {
    if (!(v >= 0.0 && v <= kPi)) throw DomainError("cdf: v outside [0, pi]");
    if (v == 0.0) return 1.0;
    if (v == kPi) return 0.0;
    const double s = std::sin(v);
    return 1.0 - v / kPi + s * s / (kPi * v);
}

// -d/dv F(sigma(v)) = (1/pi)(1 - sin(2v)/v + (sin v / v)^2); nonnegative,
// vanishing like v^2/pi at v=0 and tending to 1/pi at v=pi. The direct form
// cancels near 0, so switch to the expansion there.
inline double pullback_weight(double v) {
    if (!(v >= 0.0 && v <= kPi)) throw DomainError("pullback_weight: v outside [0, pi]");
    if (v < 1e-3) return v * v * (1.0 - 2.0 / 9.0 * v * v) / kPi;
    const double sv = std::sin(v) / v;
    return (1.0 - std::sin(2.0 * v) / v + sv * sv) / kPi;
}

inline double sigma_inv(double y) {
    if (!(y > 0.0 && y <= kE)) throw DomainError("sigma_inv: y outside (0, e]");
    if (y == kE) return 0.0;
    double lo = 0.0, hi = kPi; // sigma(lo) >= y > sigma(hi-)
    for (int it = 0; it < 120 && hi - lo > 1e-18; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sigma(mid) >= y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double phi(double y) {
    if (!(y > 0.0 && y < kE)) throw DomainError("phi: y outside (0, e)");
    return phi_from_v(sigma_inv(y));
}

inline double cdf_F(double y) {
    if (!(y >= 0.0 && y <= kE)) throw DomainError("cdf_F: y outside [0, e]");
    if (y == 0.0) return 0.0;
    if (y == kE) return 1.0;
    return cdf_from_v(sigma_inv(y));
}

inline double cdf_F_inv(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("cdf_F_inv: p outside [0, 1]");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return kE;
    double lo = 0.0, hi = kPi; // cdf_from_v decreasing
    for (int it = 0; it < 120 && hi - lo > 1e-18; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cdf_from_v(mid) >= p ? lo : hi) = mid;
    }
    return sigma(0.5 * (lo + hi));
}

// One parametric sample of the law.
struct SpectralPoint {
    double v = 0.0;
    double y = 0.0;   // sigma(v)
    double phi = 0.0; // density at y
    double F = 0.0;   // CDF at y
};

inline SpectralPoint spectral_point(double v) {
    return {v, sigma(v), phi_from_v(v), cdf_from_v(v)};
}

// Integral of g against the law: int_0^e g(y) phi(y) dy via the v pullback.
template <class G>
quad::Result integrate_law(G&& g, double tol = 1e-11) {
    return quad::integrate(
        [&g](double v) { return g(sigma(v)) * pullback_weight(v); }, 0.0, kPi, tol);
}

// a_1 = F(e t), a_{n+1} = a_n F(e t / a_n); decreasing from F(et) toward t.
struct RecursionTrace {
    double t = 0.0;
    std::vector<double> terms;
};

inline RecursionTrace an_recursion(double t, int n_max) {
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("an_recursion: t outside [0, 1]");
    if (n_max < 1) throw DomainError("an_recursion: n_max < 1");
    RecursionTrace tr;
    tr.t = t;
    tr.terms.reserve(static_cast<std::size_t>(n_max));
    double a = cdf_F(std::min(kE * t, kE));
    tr.terms.push_back(a);
    for (int n = 1; n < n_max; ++n) {
        a = a == 0.0 ? 0.0 : a * cdf_F(std::clamp(kE * t / a, 0.0, kE));
        tr.terms.push_back(a);
    }
    return tr;
}

} // namespace dtlab::speclaw
