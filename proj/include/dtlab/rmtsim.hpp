#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "dtlab/error.hpp"
#include "dtlab/quadrature.hpp"
#include "dtlab/report.hpp"
#include "dtlab/speclaw.hpp"

// Monte Carlo model of the quasinilpotent operator T: strictly upper
// triangular N x N matrices with i.i.d. complex Gaussian entries of variance
// 1/N above the diagonal. This normalization pins (1/N) tr(T*T) -> 1/2 and
// ||T|| -> sqrt(e). Sampling is deterministic per (seed, sample index):
// substream s uses a splitmix64 counter stream keyed by mixing the seed with
// the sample index, entries are filled row-major with Box-Muller pairs.

namespace dtlab::rmtsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

struct EnsembleConfig {
    int n = 0;
    int samples = 1;
    std::uint64_t seed = 0;
    int k_max = 1;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t sample_index) {
    std::uint64_t s = seed;
    (void)detail::splitmix64(s);
    s ^= 0xd1b54a32d192ed03ULL * (sample_index + 1);
    (void)detail::splitmix64(s);
    return s;
}

// Standard normal stream: splitmix64 -> uniforms in (0,1] -> Box-Muller.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : state_(seed) {}

    double uniform() { // (0, 1]
        return ((detail::splitmix64(state_) >> 11) + 1) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * speclaw::kPi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    Complex complex_normal(double stddev_per_component) {
        const double re = normal();
        const double im = normal();
        return Complex(re * stddev_per_component, im * stddev_per_component);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Strictly upper triangular; E|T_ij|^2 = 1/N above the diagonal.
inline Matrix sample_T(int n, std::uint64_t substream) {
    if (n < 2) throw DomainError("sample_T: N must be >= 2");
    GaussianStream g(substream);
    const double s = 1.0 / std::sqrt(2.0 * n);
    Matrix t = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) t(i, j) = g.complex_normal(s);
    return t;
}

namespace detail {

inline int worker_count(int jobs) {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("DTLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return std::min(cap, jobs);
}

// Runs fn(sample_index) for every sample; each index owns its output slot,
// so the reduction order downstream is index order, never schedule order.
template <class Fn>
void for_each_sample(int samples, Fn&& fn) {
    const int workers = worker_count(samples);
    if (workers <= 1) {
        for (int i = 0; i < samples; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < samples; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

inline std::vector<double> hermitian_eigs(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw LinearAlgebraError("hermitian eigensolver failed to converge");
    std::vector<double> out(m.rows() >= 0 ? static_cast<std::size_t>(m.rows()) : 0);
    for (Eigen::Index i = 0; i < m.rows(); ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    return out; // ascending
}

} // namespace detail

// sup_y |F_n(y) - F(y)| for a sorted sample against a reference CDF.
inline double ks_statistic(const std::vector<double>& sorted, const std::function<double(double)>& cdf) {
    if (sorted.empty()) throw DomainError("ks_statistic: empty sample");
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        d = std::max(d, std::max(std::abs(f - (i + 1) / n), std::abs(f - i / n)));
    }
    return d;
}

inline double spectral_cdf_clamped(double y) {
    return speclaw::cdf_F(std::clamp(y, 0.0, speclaw::kE));
}

struct SampleSpectrum {
    std::vector<double> tstart_eigs;          // eigenvalues of T*T, ascending
    std::vector<std::vector<double>> sk_eigs; // [k-1] -> eigenvalues of S_k, ascending
    std::vector<double> opnorms;              // [k-1] -> ||T^k||
};

inline void validate(const EnsembleConfig& cfg) {
    if (cfg.n < 2) throw DomainError("EnsembleConfig: N must be >= 2");
    if (cfg.samples < 1) throw DomainError("EnsembleConfig: samples must be >= 1");
    if (cfg.k_max < 1) throw DomainError("EnsembleConfig: k_max must be >= 1");
    // keep T^k away from numerical triviality (T is nilpotent of order N)
    if (cfg.k_max * std::log2(static_cast<double>(cfg.n)) > static_cast<double>(cfg.n))
        throw DomainError("EnsembleConfig: k_max too large for N");
}

// Eigen-data of T*T and of S_k = k ((T^k)* T^k)^{1/k} for k = 1..k_max.
inline std::vector<SampleSpectrum> spectrum_suite(const EnsembleConfig& cfg) {
    validate(cfg);
    std::vector<SampleSpectrum> out(static_cast<std::size_t>(cfg.samples));
    detail::for_each_sample(cfg.samples, [&](int s) {
        const Matrix t = sample_T(cfg.n, substream_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        SampleSpectrum spec;
        Matrix power = t;
        for (int k = 1; k <= cfg.k_max; ++k) {
            if (k > 1) power = power * t;
            const Matrix gram = power.adjoint() * power;
            std::vector<double> eigs = detail::hermitian_eigs(gram);
            for (double& e : eigs) e = std::max(e, 0.0);
            spec.opnorms.push_back(std::sqrt(eigs.back()));
            if (k == 1) spec.tstart_eigs = eigs;
            std::vector<double> sk(eigs.size());
            for (std::size_t i = 0; i < eigs.size(); ++i)
                sk[i] = k * std::pow(eigs[i], 1.0 / k); // 0^{1/k} = 0
            spec.sk_eigs.push_back(std::move(sk));
        }
        out[static_cast<std::size_t>(s)] = std::move(spec);
    });
    return out;
}

// Sample-averaged (1/sqrt(N)) ||F(S_k) - D_N||_HS with F applied spectrally
// and D_N = diag((i - 1/2)/N).
inline double fsk_vs_diag(const EnsembleConfig& cfg, int k) {
    validate(cfg);
    if (k < 1 || k > cfg.k_max) throw DomainError("fsk_vs_diag: k outside 1..k_max");
    const int n = cfg.n;
    std::vector<double> dist(static_cast<std::size_t>(cfg.samples));
    detail::for_each_sample(cfg.samples, [&](int s) {
        const Matrix t = sample_T(n, substream_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        Matrix power = t;
        for (int j = 1; j < k; ++j) power = power * t;
        const Matrix gram = power.adjoint() * power;
        Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
        if (es.info() != Eigen::Success)
            throw LinearAlgebraError("fsk_vs_diag: eigensolver failed");
        // F(S_k) = U diag(F(k lambda^{1/k})) U*; HS distance to D via diag(F(S_k))
        Eigen::VectorXd f(n);
        for (int i = 0; i < n; ++i)
            f[i] = spectral_cdf_clamped(k * std::pow(std::max(es.eigenvalues()[i], 0.0), 1.0 / k));
        double hs2 = 0.0;
        for (int i = 0; i < n; ++i) hs2 += f[i] * f[i];
        for (int i = 0; i < n; ++i) {
            const double d_i = (i + 0.5) / n;
            double diag_fs = 0.0;
            for (int j = 0; j < n; ++j) diag_fs += f[j] * std::norm(es.eigenvectors()(i, j));
            hs2 += d_i * d_i - 2.0 * d_i * diag_fs;
        }
        dist[static_cast<std::size_t>(s)] = std::sqrt(std::max(hs2, 0.0) / n);
    });
    double mean = 0.0;
    for (double d : dist) mean += d;
    return mean / cfg.samples;
}

// Monte Carlo check of the conditional covariance structure: the diagonals of
// E[T f(D) T*], E[T* f(D) T], E[T f(D) T], E[T] against g(x) = int_x^1 f,
// h(x) = int_0^x f, 0 and 0, at the midpoint grid x_i = (i - 1/2)/N.
inline VerificationReport covariance_check(const std::function<double(double)>& f,
                                           const EnsembleConfig& cfg, double rms_tol = 0.02) {
    validate(cfg);
    const int n = cfg.n;
    std::vector<double> fx(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) fx[static_cast<std::size_t>(i)] = f((i + 0.5) / n);

    struct Diagonals {
        std::vector<double> tft, tsft; // (T f T*)_ii, (T* f T)_ii
        std::vector<Complex> tftt, et; // (T f T)_ii, T_ii (structurally zero)
    };
    std::vector<Diagonals> per(static_cast<std::size_t>(cfg.samples));
    detail::for_each_sample(cfg.samples, [&](int s) {
        const Matrix t = sample_T(n, substream_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        Diagonals d;
        d.tft.assign(static_cast<std::size_t>(n), 0.0);
        d.tsft.assign(static_cast<std::size_t>(n), 0.0);
        d.tftt.assign(static_cast<std::size_t>(n), Complex(0.0));
        d.et.assign(static_cast<std::size_t>(n), Complex(0.0));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double w = std::norm(t(i, j));
                d.tft[static_cast<std::size_t>(i)] += w * fx[static_cast<std::size_t>(j)];
                d.tsft[static_cast<std::size_t>(j)] += w * fx[static_cast<std::size_t>(i)];
            }
            Complex tftt = 0.0;
            for (int j = 0; j < n; ++j) tftt += t(i, j) * fx[static_cast<std::size_t>(j)] * t(j, i);
            d.tftt[static_cast<std::size_t>(i)] = tftt;
            d.et[static_cast<std::size_t>(i)] = t(i, i);
        }
        per[static_cast<std::size_t>(s)] = std::move(d);
    });

    const auto rms = [n](const std::vector<double>& resid) {
        double s = 0.0;
        for (double r : resid) s += r * r;
        return std::sqrt(s / n);
    };

    std::vector<double> rg(static_cast<std::size_t>(n)), rh(static_cast<std::size_t>(n)),
        rt(static_cast<std::size_t>(n)), re(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) / n;
        const double gi = quad::integral(f, x, 1.0, 1e-10);
        const double hi = quad::integral(f, 0.0, x, 1e-10);
        double ma = 0.0, mb = 0.0;
        Complex mc = 0.0, me = 0.0;
        for (int s = 0; s < cfg.samples; ++s) {
            const auto& d = per[static_cast<std::size_t>(s)];
            ma += d.tft[static_cast<std::size_t>(i)];
            mb += d.tsft[static_cast<std::size_t>(i)];
            mc += d.tftt[static_cast<std::size_t>(i)];
            me += d.et[static_cast<std::size_t>(i)];
        }
        rg[static_cast<std::size_t>(i)] = ma / cfg.samples - gi;
        rh[static_cast<std::size_t>(i)] = mb / cfg.samples - hi;
        rt[static_cast<std::size_t>(i)] = std::abs(mc) / cfg.samples;
        re[static_cast<std::size_t>(i)] = std::abs(me) / cfg.samples;
    }

    VerificationReport rep;
    rep.add("cov_TfT*_vs_g_rms", rms(rg), rms_tol);
    rep.add("cov_T*fT_vs_h_rms", rms(rh), rms_tol);
    rep.add("cov_TfT_rms", rms(rt), rms_tol);
    rep.add("cov_ET_rms", rms(re), rms_tol);
    return rep;
}

// (k/e) ||T^k xi||^{2/k} for k = 1..k_probe, xi the normalized indicator of
// the first ceil(tN) coordinates, sample-averaged. Exploratory probe; only
// the ordering in t is contractual.
inline std::vector<double> decay_profile(double t, const EnsembleConfig& cfg, int k_probe) {
    validate(cfg);
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("decay_profile: t outside (0, 1]");
    if (k_probe < 1 || k_probe > cfg.n / 4)
        throw DomainError("decay_profile: k_probe outside 1..N/4");
    const int n = cfg.n;
    const int m = static_cast<int>(std::ceil(t * n));
    std::vector<std::vector<double>> per(static_cast<std::size_t>(cfg.samples));
    detail::for_each_sample(cfg.samples, [&](int s) {
        const Matrix mt = sample_T(n, substream_seed(cfg.seed, static_cast<std::uint64_t>(s)));
        Eigen::VectorXcd xi = Eigen::VectorXcd::Zero(n);
        for (int i = 0; i < m; ++i) xi[i] = 1.0 / std::sqrt(static_cast<double>(m));
        std::vector<double> vals(static_cast<std::size_t>(k_probe));
        for (int k = 1; k <= k_probe; ++k) {
            xi = mt * xi;
            vals[static_cast<std::size_t>(k - 1)] =
                k / speclaw::kE * std::pow(xi.squaredNorm(), 1.0 / k);
        }
        per[static_cast<std::size_t>(s)] = std::move(vals);
    });
    std::vector<double> mean(static_cast<std::size_t>(k_probe), 0.0);
    for (const auto& vals : per)
        for (std::size_t k = 0; k < vals.size(); ++k) mean[k] += vals[k];
    for (double& v : mean) v /= cfg.samples;
    return mean;
}

} // namespace dtlab::rmtsim
