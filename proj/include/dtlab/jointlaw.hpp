#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "dtlab/error.hpp"
#include "dtlab/quadrature.hpp"
#include "dtlab/report.hpp"
#include "dtlab/speclaw.hpp"
#include "dtlab/wbranch.hpp"

// The joint law of (D_0, S_k): roots a_j(t), partial-fraction weights
// b_j/c_j/gamma_j, the kernel H(x,t), its mean/variance m_k, v_k, densities,
// Cauchy transforms, the summation identities behind them, and the
// Hilbert-Schmidt distance ||F(S_k) - D_0||_2.

namespace dtlab::jointlaw {

using Complex = std::complex<double>;
using wbranch::kE;
using wbranch::kInvE;
using wbranch::kPi;

namespace detail {

// b_j = prod_{l != j} a_l / (a_l - a_j) (Lagrange weights at the nodes).
inline std::vector<Complex> partial_fraction_weights(const std::vector<Complex>& a) {
    const std::size_t n = a.size();
    std::vector<Complex> b(n, Complex(1.0, 0.0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) {
            if (l == j) continue;
            b[j] *= a[l] / (a[l] - a[j]);
        }
    return b;
}

inline double min_pairwise_gap(const std::vector<Complex>& a) {
    double g = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) g = std::min(g, std::abs(a[i] - a[j]));
    return g;
}

inline double max_abs(const std::vector<Complex>& a) {
    double m = 0.0;
    for (const auto& x : a) m = std::max(m, std::abs(x));
    return m;
}

} // namespace detail

// alpha_j(z) = rho(z e^{i 2 pi j / k}), j = 1..k, and the weights
// gamma_j = prod_{l != j} alpha_l / (alpha_l - alpha_j); gamma_j(0) = 1/k.
struct GammaNodes {
    int k = 0;
    Complex z;
    std::vector<Complex> alpha;
    std::vector<Complex> gamma;
};

namespace detail {

// Interior version valid on Omega_k = { z : z^k not in [e^{-k}, inf) }.
inline GammaNodes alpha_gamma_omega(int k, Complex z) {
    if (k < 1) throw DomainError("alpha_gamma: k must be >= 1");
    GammaNodes g;
    g.k = k;
    g.z = z;
    if (z == Complex(0.0)) {
        g.alpha.assign(static_cast<std::size_t>(k), Complex(0.0));
        g.gamma.assign(static_cast<std::size_t>(k), Complex(1.0 / k, 0.0));
        return g;
    }
    g.alpha.reserve(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        const double ang = 2.0 * kPi * j / k;
        g.alpha.push_back(wbranch::rho(z * std::polar(1.0, ang)));
    }
    if (min_pairwise_gap(g.alpha) < 1e-10)
        throw DegenerateNodes("alpha_gamma: two alpha_j within 1e-10");
    g.gamma = partial_fraction_weights(g.alpha);
    return g;
}

} // namespace detail

inline GammaNodes alpha_gamma(int k, Complex z) {
    if (!(std::abs(z) < kInvE)) throw DomainError("alpha_gamma: |z| must be < 1/e");
    return detail::alpha_gamma_omega(k, z);
}

// Roots a_0 = rho^+(t), a_j = rho(t e^{i 2 pi j / k}) (1 <= j <= k-1),
// a_k = rho^-(t); conjugate-symmetric: a_{k-j} = conj(a_j).
inline std::vector<Complex> node_roots(int k, double t, double guard = 1e-6) {
    if (k < 1) throw DomainError("nodes: k must be >= 1");
    if (!(t > kInvE + guard))
        throw DomainError("nodes: t too close to 1/e (a_0 and a_k collide there)");
    std::vector<Complex> a(static_cast<std::size_t>(k) + 1);
    a[0] = wbranch::rho_boundary(t, wbranch::Side::Plus);
    a[static_cast<std::size_t>(k)] = std::conj(a[0]);
    for (int j = 1; 2 * j <= k; ++j) {
        if (2 * j == k) {
            a[static_cast<std::size_t>(j)] = wbranch::rho(Complex(-t, 0.0));
        } else {
            const Complex aj = wbranch::rho(t * std::polar(1.0, 2.0 * kPi * j / k));
            a[static_cast<std::size_t>(j)] = aj;
            a[static_cast<std::size_t>(k - j)] = std::conj(aj);
        }
    }
    return a;
}

// Kernel data at (k, t): roots a_j, Lagrange weights b_j and kernel weights
// c_j = -k a_j b_j.
struct NodeData {
    int k = 0;
    double t = 0.0;
    std::vector<Complex> a;
    std::vector<Complex> b;
    std::vector<Complex> c;
};

inline NodeData nodes(int k, double t, double guard = 1e-6) {
    NodeData nd;
    nd.k = k;
    nd.t = t;
    nd.a = node_roots(k, t, guard);
    if (detail::min_pairwise_gap(nd.a) < 1e-10 * std::max(1.0, detail::max_abs(nd.a)))
        throw DegenerateNodes("nodes: root collision");
    nd.b = detail::partial_fraction_weights(nd.a);
    nd.c.resize(nd.a.size());
    for (std::size_t j = 0; j < nd.a.size(); ++j) nd.c[j] = -static_cast<double>(k) * nd.a[j] * nd.b[j];
    for (const auto& c : nd.c)
        if (!(std::isfinite(c.real()) && std::isfinite(c.imag())))
            throw DegenerateNodes("nodes: non-finite weight");
    return nd;
}

// Residuals of the summation identities satisfied by the Lagrange weights of
// distinct nonzero nodes a_0..a_k:
//   sum b_j a_j^p = 0 (p = 1..k),  sum b_j = 1,
//   sum b_j / a_j = sum 1/a_j,     sum b_j / a_j^2 = sum_{i <= j} 1/(a_i a_j).
// Cancellation sums are reported relative to their magnitude sums.
inline VerificationReport identity_suite(const std::vector<Complex>& a) {
    if (a.size() < 2) throw DomainError("identity_suite: need at least two nodes");
    for (const auto& x : a)
        if (x == Complex(0.0)) throw DomainError("identity_suite: zero node");
    const double scale = detail::max_abs(a);
    if (!(detail::min_pairwise_gap(a) > 1e-3 * scale))
        throw DegenerateNodes("identity_suite: node gap below 1e-3 * max|a|");

    const int k = static_cast<int>(a.size()) - 1;
    const auto b = detail::partial_fraction_weights(a);
    VerificationReport rep;

    std::vector<Complex> power(a.size(), Complex(1.0, 0.0));
    for (int p = 1; p <= k; ++p) {
        Complex s = 0.0;
        double mag = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            power[j] *= a[j];
            s += b[j] * power[j];
            mag += std::abs(b[j] * power[j]);
        }
        rep.add("eq5.1_p" + std::to_string(p), std::abs(s) / std::max(mag, 1e-300), 1e-10);
    }

    Complex s0 = 0.0;
    for (const auto& bj : b) s0 += bj;
    rep.add("eq5.2_sum_b", std::abs(s0 - 1.0), 1e-10);

    Complex lhs3 = 0.0, rhs3 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        lhs3 += b[j] / a[j];
        rhs3 += 1.0 / a[j];
    }
    rep.add("eq5.3_harmonic", std::abs(lhs3 - rhs3) / std::max(1.0, std::abs(rhs3)), 1e-10);

    Complex lhs4 = 0.0, rhs4 = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) lhs4 += b[j] / (a[j] * a[j]);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i; j < a.size(); ++j) rhs4 += 1.0 / (a[i] * a[j]);
    rep.add("eq5.4_second_order", std::abs(lhs4 - rhs4) / std::max(1.0, std::abs(rhs4)), 1e-10);

    return rep;
}

// H(x,t) = sum_j c_j(t) e^{k a_j(t) x}; real by conjugate symmetry, so the
// sum walks conjugate pairs and takes real parts.
inline double kernel_H(const NodeData& nd, double x) {
    double s = 0.0;
    const double k = static_cast<double>(nd.k);
    for (int j = 0; 2 * j <= nd.k; ++j) {
        const Complex term = nd.c[static_cast<std::size_t>(j)] *
                             std::exp(k * nd.a[static_cast<std::size_t>(j)] * x);
        s += (2 * j == nd.k) ? term.real() : 2.0 * term.real();
    }
    return s;
}

inline double kernel_H(int k, double x, double t) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("kernel_H: x outside [0, 1]");
    return kernel_H(nodes(k, t), x);
}

// m(t) = -(1/k) sum_j 1/a_j,  v(t) = (1/k^2) sum_j 1/a_j^2.
struct MeanVar {
    double m = 0.0;
    double v = 0.0;
};

inline MeanVar mean_var_from_roots(int k, const std::vector<Complex>& a) {
    double s1 = 0.0, s2 = 0.0;
    for (int j = 0; 2 * j <= k; ++j) {
        const Complex inv = 1.0 / a[static_cast<std::size_t>(j)];
        const double w = (2 * j == k) ? 1.0 : 2.0;
        s1 += w * inv.real();
        s2 += w * (inv * inv).real();
    }
    return {-s1 / k, s2 / (static_cast<double>(k) * k)};
}

inline MeanVar mk_vk(int k, double t) {
    return mean_var_from_roots(k, node_roots(k, t));
}

// Density of mu_{D_0, S_k}: phi(y) H(x, 1/y) on (0,1) x (0,e).
inline double joint_density(int k, double x, double y) {
    if (!(x > 0.0 && x < 1.0)) throw DomainError("joint_density: x outside (0, 1)");
    if (!(y > 0.0 && y < kE)) throw DomainError("joint_density: y outside (0, e)");
    return speclaw::phi(y) * kernel_H(k, x, 1.0 / y);
}

// Density of nu_x on (0, e^k): u^{1/k-1} phi(u^{1/k}) H(x, u^{-1/k}) / k.
inline double nu_density(int k, double x, double u) {
    if (k < 1) throw DomainError("nu_density: k must be >= 1");
    if (!(x > 0.0 && x <= 1.0)) throw DomainError("nu_density: x outside (0, 1]");
    const double top = std::pow(kE, static_cast<double>(k));
    if (!(u > 0.0 && u < top)) throw DomainError("nu_density: u outside (0, e^k)");
    const double y = std::pow(u, 1.0 / k);
    return y / (u * k) * speclaw::phi(y) * kernel_H(k, x, 1.0 / y);
}

// Cauchy transform of nu_x off [0, e^k]:
//   G_x(lambda) = (1/lambda) sum_{j=1..k} gamma_j(w) e^{k alpha_j(w) x},
// with w = lambda^{-1/k} (principal value).
inline Complex cauchy_transform(int k, double x, Complex lambda) {
    if (k < 1) throw DomainError("cauchy_transform: k must be >= 1");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("cauchy_transform: x outside [0, 1]");
    const double top = std::pow(kE, static_cast<double>(k));
    if (lambda.imag() == 0.0 && lambda.real() >= 0.0 && lambda.real() <= top)
        throw DomainError("cauchy_transform: lambda on [0, e^k]");
    if (x == 0.0) return 1.0 / lambda; // nu_0 = delta_0
    const Complex w = std::exp(-std::log(lambda) / static_cast<double>(k));
    const GammaNodes g = detail::alpha_gamma_omega(k, w);
    Complex s = 0.0;
    for (int j = 0; j < k; ++j)
        s += g.gamma[static_cast<std::size_t>(j)] *
             std::exp(static_cast<double>(k) * g.alpha[static_cast<std::size_t>(j)] * x);
    return s / lambda;
}

// ||D_0 - F(S_k)||_2^2 = int_0^e ((m_k(1/y) - F(y))^2 + v_k(1/y)) phi(y) dy,
// valid for k >= 3. Pulled back to the v parameter; endpoint slivers where the
// nodes degenerate (v -> 0) or t = 1/sigma(v) overflows (v -> pi) are excluded,
// costing O(1e-8) of integrand mass.
inline double hs_distance(int k) {
    if (k < 3) throw DomainError("hs_distance: requires k >= 3");
    const double v_lo = 5e-3;
    const double v_hi = kPi - 1e-2;
    const auto f = [k](double v) {
        const double t = 1.0 / speclaw::sigma(v);
        const MeanVar mv = mk_vk(k, t);
        const double d = mv.m - speclaw::cdf_from_v(v);
        return (d * d + mv.v) * speclaw::pullback_weight(v);
    };
    return std::max(quad::integral(f, v_lo, v_hi, 1e-10), 0.0);
}

// Midpoint-offset trapezoid estimate of -(1/2 pi i) \oint_{|z|=t} dz/(z rho(z)),
// which equals F(1/t). Nodes sit between the multiples of 2 pi / n_theta so
// none lands on the cut at angle 0.
inline double contour_mean(double t, int n_theta) {
    if (!(t > kInvE)) throw DomainError("contour_mean: t must be > 1/e");
    if (n_theta < 8) throw DomainError("contour_mean: n_theta too small");
    double s = 0.0;
    for (int m = 0; m < n_theta; ++m) {
        const double theta = 2.0 * kPi * (m + 0.5) / n_theta;
        s += (1.0 / wbranch::rho(t * std::polar(1.0, theta))).real();
    }
    return -s / n_theta;
}

// Dense evaluation of the joint density on a product grid. The y grid is the
// image of uniform v midpoints, so row spacing follows the law's own
// parametrization; rows whose t = 1/y violates the node guard are skipped.
struct JointDensityGrid {
    int k = 0;
    std::vector<double> x;      // midpoints of (0,1)
    std::vector<double> y;      // sigma(v) at v midpoints, descending
    std::vector<double> values; // row-major: values[iy * x.size() + ix]
};

inline JointDensityGrid joint_grid(int k, int grid_size) {
    if (grid_size < 8) throw DomainError("joint_grid: grid_size must be >= 8");
    JointDensityGrid g;
    g.k = k;
    for (int i = 0; i < grid_size; ++i) g.x.push_back((i + 0.5) / grid_size);
    for (int j = 0; j < grid_size; ++j) {
        const double v = kPi * (j + 0.5) / grid_size;
        const double y = speclaw::sigma(v);
        if (!(y > 0.0) || std::isinf(1.0 / y)) continue;  // sigma underflow at y ~ 0
        if (!(1.0 / y > kInvE + 2e-6)) continue;          // node guard band at y ~ e
        g.y.push_back(y);
        const NodeData nd = nodes(k, 1.0 / y);
        const double ph = speclaw::phi_from_v(v);
        for (double x : g.x) g.values.push_back(ph * kernel_H(nd, x));
    }
    return g;
}

} // namespace dtlab::jointlaw
