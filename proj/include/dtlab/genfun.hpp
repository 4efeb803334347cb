#pragma once

#include <complex>

#include "dtlab/error.hpp"
#include "dtlab/jointlaw.hpp"
#include "dtlab/snpoly.hpp"

// Residuals of the generating-function identities tying the exact
// polynomials to the branch functions, for |z| comfortably inside the disk
// of radius 1/e (truncation error of the partial sum stays controlled):
//
//   sum_{n>=0} (kz)^{nk} P_{k,n}(x)  =  sum_{j=1..k} gamma_j(z) e^{k alpha_j(z) x}
//   sum_{n>=0} s_{k,n} (kz)^{nk}     =  -(1/k) sum_{j=1..k} 1/rho(z e^{i 2 pi j / k})
//                                       [ + 1/z when k = 1 ]
//
// The k = 1 correction term is the rotation sum sum_j (z e^{i 2 pi j / k})^{-1},
// which vanishes identically for k >= 2 and equals 1/z for k = 1; without it
// the right-hand side has a pole the partial sum does not.

namespace dtlab::snpoly {

using Complex = std::complex<double>;

inline void check_genfun_domain(Complex z, double margin) {
    if (!(margin >= 0.0)) throw DomainError("genfun: margin must be >= 0");
    if (!(std::abs(z) < wbranch::kInvE - margin))
        throw DomainError("genfun: |z| must be < 1/e - margin");
}

// |LHS partial sum (n <= n_max) - RHS| for the polynomial generating function.
inline double genfun_residual(int k, double x, Complex z, int n_max, double margin = 0.05) {
    if (k < 1) throw DomainError("genfun: k must be >= 1");
    check_genfun_domain(z, margin);

    const auto polys = sniady_sequence(k, n_max, std::max(kDefaultDegreeCap, n_max * k));
    const Complex step = std::pow(static_cast<double>(k) * z, static_cast<double>(k));
    Complex lhs = 0.0;
    Complex zkn = 1.0;
    for (int n = 0; n <= n_max; ++n) {
        lhs += zkn * polys[static_cast<std::size_t>(n)].evaluate(x);
        zkn *= step;
    }

    const jointlaw::GammaNodes g = jointlaw::alpha_gamma(k, z);
    Complex rhs = 0.0;
    for (int j = 0; j < k; ++j)
        rhs += g.gamma[static_cast<std::size_t>(j)] *
               std::exp(static_cast<double>(k) * g.alpha[static_cast<std::size_t>(j)] * x);

    return std::abs(lhs - rhs);
}

// |sum s_{k,n}(kz)^{nk} - analytic side| for the trace moments s_{k,n}.
inline double moment_genfun_residual(int k, Complex z, int n_max, double margin = 0.05) {
    if (k < 1) throw DomainError("genfun: k must be >= 1");
    if (z == Complex(0.0)) throw DomainError("moment_genfun: z must be nonzero");
    check_genfun_domain(z, margin);

    const Complex step = std::pow(static_cast<double>(k) * z, static_cast<double>(k));
    Complex lhs = 0.0;
    Complex zkn = 1.0;
    {
        const auto polys = sniady_sequence(k, n_max, std::max(kDefaultDegreeCap, n_max * k));
        for (int n = 0; n <= n_max; ++n) {
            lhs += zkn * static_cast<double>(polys[static_cast<std::size_t>(n)].integral_01());
            zkn *= step;
        }
    }

    Complex rhs = 0.0;
    for (int j = 1; j <= k; ++j)
        rhs += 1.0 / wbranch::rho(z * std::polar(1.0, 2.0 * wbranch::kPi * j / k));
    rhs /= -static_cast<double>(k);
    if (k == 1) rhs += 1.0 / z;

    return std::abs(lhs - rhs);
}

// Smallest truncation honoring the contract floor of 12 terms while keeping
// the geometric tail bound (e|z|)^{k(n+1)} / (1 - e|z|) below `tail_tol`.
inline int genfun_terms(int k, Complex z, double tail_tol = 1e-9, int floor_terms = 12) {
    const double r = wbranch::kE * std::abs(z);
    int n = floor_terms;
    if (r > 0.0 && r < 1.0) {
        double tail = std::pow(r, static_cast<double>(k) * (n + 1)) / (1.0 - r);
        while (tail > tail_tol && n < 200) {
            ++n;
            tail *= std::pow(r, static_cast<double>(k));
        }
    }
    return n;
}

} // namespace dtlab::snpoly
