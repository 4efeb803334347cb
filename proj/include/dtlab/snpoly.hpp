#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "dtlab/error.hpp"

// Exact rational arithmetic for the triangular moment polynomials P_{k,n}:
//
//   P_{k,0} = 1,   d^k/dx^k P_{k,n}(x) = P_{k,n-1}(x+1),
//   P_{k,n}(0) = P'_{k,n}(0) = ... = P^{(k-1)}_{k,n}(0) = 0   (n >= 1),
//
// their moments int_0^1 P_{k,n} = n^{nk}/(nk+1)!, and the power series of
// rho and 1/rho around 0. Everything here is exact; no rounding.

namespace dtlab::snpoly {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr int kDefaultDegreeCap = 60;

// Dense polynomial, index = degree, trailing coefficient nonzero.
class ExactPolynomial {
public:
    ExactPolynomial() = default;
    explicit ExactPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static ExactPolynomial constant(Rational v) {
        return ExactPolynomial(std::vector<Rational>{std::move(v)});
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; } // -1 for zero poly

    Rational coefficient(int deg) const {
        if (deg < 0 || deg >= static_cast<int>(c_.size())) return Rational(0);
        return c_[static_cast<std::size_t>(deg)];
    }

    const std::vector<Rational>& coefficients() const { return c_; }

    ExactPolynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<Rational> d(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<int>(i);
        return ExactPolynomial(std::move(d));
    }

    // Antiderivative vanishing at 0.
    ExactPolynomial antiderivative() const {
        std::vector<Rational> a(c_.size() + 1);
        a[0] = 0;
        for (std::size_t i = 0; i < c_.size(); ++i) a[i + 1] = c_[i] / static_cast<int>(i + 1);
        return ExactPolynomial(std::move(a));
    }

    // p(x+1) by exact binomial expansion.
    ExactPolynomial shift_by_one() const {
        if (c_.empty()) return {};
        const int n = degree();
        std::vector<Rational> out(c_.size());
        // binom holds C(d, i) for the current d, built row by row
        std::vector<BigInt> binom(c_.size(), BigInt(0));
        binom[0] = 1;
        for (int d = 0; d <= n; ++d) {
            if (d > 0)
                for (int i = d; i >= 1; --i) binom[static_cast<std::size_t>(i)] += binom[static_cast<std::size_t>(i - 1)];
            const Rational& cd = c_[static_cast<std::size_t>(d)];
            if (cd == 0) continue;
            for (int i = 0; i <= d; ++i) out[static_cast<std::size_t>(i)] += cd * Rational(binom[static_cast<std::size_t>(i)]);
        }
        return ExactPolynomial(std::move(out));
    }

    Rational evaluate(const Rational& x) const {
        Rational r(0);
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    double evaluate(double x) const {
        double r = 0.0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + static_cast<double>(c_[i]);
        return r;
    }

    // int_0^1 p(x) dx, exact.
    Rational integral_01() const {
        Rational r(0);
        for (std::size_t i = 0; i < c_.size(); ++i) r += c_[i] / static_cast<int>(i + 1);
        return r;
    }

    bool operator==(const ExactPolynomial& o) const { return c_ == o.c_; }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rational> c_;
};

// "p/q" with an explicit denominator, as used in CSV/JSON output.
inline std::string fraction_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

// P_{k,0}..P_{k,n_max}; builds the whole prefix so the recursion is walked once.
inline std::vector<ExactPolynomial> sniady_sequence(int k, int n_max, int degree_cap = kDefaultDegreeCap) {
    if (k < 1) throw DomainError("sniady: k must be >= 1");
    if (n_max < 0) throw DomainError("sniady: n must be >= 0");
    if (static_cast<std::int64_t>(n_max) * k > degree_cap)
        throw CapExceeded("sniady: n*k exceeds the configured degree cap");
    std::vector<ExactPolynomial> seq;
    seq.reserve(static_cast<std::size_t>(n_max) + 1);
    seq.push_back(ExactPolynomial::constant(Rational(1)));
    for (int n = 1; n <= n_max; ++n) {
        ExactPolynomial p = seq.back().shift_by_one();
        for (int j = 0; j < k; ++j) p = p.antiderivative();
        seq.push_back(std::move(p));
    }
    return seq;
}

inline ExactPolynomial sniady_polynomial(int k, int n, int degree_cap = kDefaultDegreeCap) {
    return sniady_sequence(k, n, degree_cap).back();
}

// Closed form for k=1: P_{1,n}(x) = x (x+n)^{n-1} / n!, expanded.
inline ExactPolynomial closed_form_k1(int n) {
    if (n < 1) throw DomainError("closed_form_k1: n must be >= 1");
    BigInt fact(1);
    for (int i = 2; i <= n; ++i) fact *= i;
    std::vector<Rational> c(static_cast<std::size_t>(n) + 1);
    // coefficient of x^{j+1}: C(n-1, j) n^{n-1-j} / n!
    BigInt binom(1);
    BigInt npow = n > 1 ? pow(BigInt(n), static_cast<unsigned>(n - 1)) : BigInt(1);
    for (int j = 0; j <= n - 1; ++j) {
        c[static_cast<std::size_t>(j) + 1] = Rational(binom * npow, fact);
        binom = binom * (n - 1 - j) / (j + 1);
        if (n > 0 && j < n - 1) npow /= n;
    }
    return ExactPolynomial(std::move(c));
}

// tr(((T^k)^* T^k)^n) as the exact antiderivative route int_0^1 P_{k,n}.
inline Rational moment(int k, int n, int degree_cap = kDefaultDegreeCap) {
    return sniady_polynomial(k, n, degree_cap).integral_01();
}

// The same trace by the closed formula n^{nk}/(nk+1)!, 0^0 = 1.
inline Rational moment_formula(int k, int n) {
    if (k < 1 || n < 0) throw DomainError("moment_formula: bad (k, n)");
    const std::int64_t nk = static_cast<std::int64_t>(n) * k;
    BigInt num = n == 0 ? BigInt(1) : pow(BigInt(n), static_cast<unsigned>(nk));
    BigInt den(1);
    for (std::int64_t i = 2; i <= nk + 1; ++i) den *= i;
    return Rational(num, den);
}

// Power series around 0, exact coefficients.
struct RationalSeries {
    enum class Kind { Rho, RhoReciprocal };
    Kind kind = Kind::Rho;
    // Rho: value = sum coefficients[n] z^n.
    // RhoReciprocal: value = 1/z + sum coefficients[n] z^n (regular part only).
    std::vector<Rational> coefficients;
};

// rho(z) = sum_{n>=1} n^{n-2}/(n-1)! z^n.
inline RationalSeries rho_series(int n_max) {
    if (n_max < 0) throw DomainError("rho_series: n_max < 0");
    RationalSeries s;
    s.kind = RationalSeries::Kind::Rho;
    s.coefficients.assign(static_cast<std::size_t>(n_max) + 1, Rational(0));
    BigInt fact(1); // (n-1)!
    for (int n = 1; n <= n_max; ++n) {
        if (n >= 2) fact *= n - 1;
        const BigInt num = n == 1 ? BigInt(1) : pow(BigInt(n), static_cast<unsigned>(n - 2));
        s.coefficients[static_cast<std::size_t>(n)] = Rational(num, fact);
    }
    return s;
}

// 1/rho(z) = 1/z - sum_{n>=0} n^n/(n+1)! z^n, 0^0 = 1.
inline RationalSeries rho_recip_series(int n_max) {
    if (n_max < 0) throw DomainError("rho_recip_series: n_max < 0");
    RationalSeries s;
    s.kind = RationalSeries::Kind::RhoReciprocal;
    s.coefficients.assign(static_cast<std::size_t>(n_max) + 1, Rational(0));
    BigInt fact(1); // (n+1)!
    for (int n = 0; n <= n_max; ++n) {
        fact *= n + 1;
        const BigInt num = n == 0 ? BigInt(1) : pow(BigInt(n), static_cast<unsigned>(n));
        s.coefficients[static_cast<std::size_t>(n)] = -Rational(num, fact);
    }
    return s;
}

inline std::complex<double> evaluate(const RationalSeries& s, std::complex<double> z) {
    std::complex<double> sum = 0.0;
    std::complex<double> zn = 1.0;
    for (const auto& c : s.coefficients) {
        sum += static_cast<double>(c) * zn;
        zn *= z;
    }
    if (s.kind == RationalSeries::Kind::RhoReciprocal) {
        if (z == std::complex<double>(0.0)) throw DomainError("rho_recip_series: z = 0");
        sum += 1.0 / z;
    }
    return sum;
}

} // namespace dtlab::snpoly
