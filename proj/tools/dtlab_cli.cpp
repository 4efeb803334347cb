// dtlab command line: verification suites, density/moment/distance tables as
// CSV, and seeded Monte Carlo runs with JSON reports.
//
// Exit codes: 0 success / all checks pass, 1 verification failure,
// 2 usage or domain error.

#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dtlab/genfun.hpp"
#include "dtlab/jointlaw.hpp"
#include "dtlab/quadrature.hpp"
#include "dtlab/report.hpp"
#include "dtlab/rmtsim.hpp"
#include "dtlab/snpoly.hpp"
#include "dtlab/speclaw.hpp"
#include "dtlab/wbranch.hpp"

namespace {

using namespace dtlab;
using Complex = std::complex<double>;

// 17 significant digits, '.' decimal separator, locale independent.
std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct Output {
    std::ofstream file;
    std::ostream* os = &std::cout;

    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file.open(path);
            if (!file) throw Error("cannot open output file: " + path);
            os = &file;
        }
    }
    std::ostream& stream() { return *os; }
};

// ---------------------------------------------------------------- density

int run_density(int k, int grid, const std::string& out_path) {
    Output out(out_path);
    if (k == 0) {
        // marginal law: y ascending (v descending midpoints)
        out.stream() << "y,phi,F\n";
        for (int j = grid - 1; j >= 0; --j) {
            const double v = speclaw::kPi * (j + 0.5) / grid;
            const double y = speclaw::sigma(v);
            if (!(y > 0.0)) continue;
            const auto sp = speclaw::spectral_point(v);
            out.stream() << fmt17(sp.y) << ',' << fmt17(sp.phi) << ',' << fmt17(sp.F) << '\n';
        }
        return 0;
    }
    const auto g = jointlaw::joint_grid(k, grid);
    out.stream() << "x,y,density\n";
    for (std::size_t j = 0; j < g.y.size(); ++j)
        for (std::size_t i = 0; i < g.x.size(); ++i)
            out.stream() << fmt17(g.x[i]) << ',' << fmt17(g.y[j]) << ','
                         << fmt17(g.values[j * g.x.size() + i]) << '\n';
    return 0;
}

// ---------------------------------------------------------------- moments

int run_moments(int k, int n_max, const std::string& out_path) {
    Output out(out_path);
    out.stream() << "n,integral,formula,equal\n";
    bool all_equal = true;
    const auto seq = snpoly::sniady_sequence(k, n_max, std::max(snpoly::kDefaultDegreeCap, n_max * k));
    for (int n = 1; n <= n_max; ++n) {
        const auto integral = seq[static_cast<std::size_t>(n)].integral_01();
        const auto formula = snpoly::moment_formula(k, n);
        const bool equal = integral == formula;
        all_equal = all_equal && equal;
        out.stream() << n << ',' << snpoly::fraction_string(integral) << ','
                     << snpoly::fraction_string(formula) << ',' << (equal ? "true" : "false")
                     << '\n';
    }
    return all_equal ? 0 : 1;
}

// ---------------------------------------------------------------- verify

VerificationReport verify_lambert() {
    VerificationReport rep;
    // functional equation on quasi-random points of the cut disk |z| < 3
    double worst_eq = 0.0, worst_conj = 0.0, worst_omega = 0.0;
    double a = 0.0, b = 0.0;
    int count = 0;
    while (count < 1000) {
        a += 0.7548776662466927;
        b += 0.5698402909980532;
        a -= std::floor(a);
        b -= std::floor(b);
        const Complex z(6.0 * a - 3.0, 6.0 * b - 3.0);
        if (std::abs(z) >= 3.0) continue;
        if (std::abs(z.imag()) <= 1e-3 && z.real() >= wbranch::kInvE - 1e-3) continue;
        ++count;
        const Complex r = wbranch::rho(z);
        worst_eq = std::max(worst_eq,
                            std::abs(r * std::exp(-r) - z) / std::max(1.0, std::abs(z)));
        worst_conj = std::max(worst_conj, std::abs(wbranch::rho(std::conj(z)) - std::conj(r)));
        const Complex inward = r - Complex(1e-9 * std::max(1.0, std::abs(r)), 0.0);
        if (!wbranch::in_omega(inward)) worst_omega = 1.0;
    }
    rep.add("rho_functional_equation", worst_eq, 1e-12);
    rep.add("rho_conjugate_symmetry", worst_conj, 1e-13);
    rep.add_flag("rho_in_omega_closure", worst_omega == 0.0);

    // boundary agreement with the one-sided limits
    double worst_branch = 0.0;
    for (double t : {0.4, 0.6, 1.0, 2.0, 3.5, 5.0}) {
        for (double sgn : {1.0, -1.0}) {
            const Complex r1 = wbranch::rho(Complex(t, sgn * 1e-6));
            const Complex r2 = wbranch::rho(Complex(t, sgn * 1e-8));
            const Complex lim = r2 + (r2 - r1) * (1e-8 / (1e-6 - 1e-8));
            const auto side = sgn > 0 ? wbranch::Side::Plus : wbranch::Side::Minus;
            worst_branch = std::max(worst_branch, std::abs(lim - wbranch::rho_boundary(t, side)));
        }
    }
    rep.add("rho_boundary_agreement", worst_branch, 1e-6);

    rep.add("rho_plus_at_1_over_e",
            std::abs(wbranch::rho_boundary(wbranch::kInvE, wbranch::Side::Plus) - 1.0), 1e-10);

    // power series agreement on |z| = 0.2 (degree 45: its tail is < 1e-13)
    double worst_series = 0.0;
    for (int i = 0; i < 16; ++i) {
        const Complex z = 0.2 * std::polar(1.0, 2.0 * wbranch::kPi * (i + 0.5) / 16.0);
        Complex s = 0.0;
        double fact = 1.0;
        for (int n = 1; n <= 45; ++n) {
            if (n >= 2) fact *= n - 1;
            s += std::pow(double(n), n - 2) / fact * std::pow(z, n);
        }
        worst_series = std::max(worst_series, std::abs(wbranch::rho(z) - s));
    }
    rep.add("rho_series_consistency", worst_series, 1e-12);
    return rep;
}

VerificationReport verify_spectral() {
    VerificationReport rep;
    rep.add("phi_normalization",
            std::abs(speclaw::integrate_law([](double) { return 1.0; }).value - 1.0), 1e-10);
    rep.add("mean_is_half",
            std::abs(speclaw::integrate_law([](double y) { return y; }).value - 0.5), 1e-10);

    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 1000; ++i) {
        const double p = speclaw::phi(speclaw::kE * i / 1001.0);
        monotone = monotone && p < prev;
        prev = p;
    }
    rep.add_flag("phi_strictly_decreasing", monotone);

    bool fex = true;
    for (int i = 1; i <= 200; ++i) {
        const double x = i / 201.0;
        fex = fex && speclaw::cdf_F(speclaw::kE * x) > x;
    }
    rep.add_flag("F_of_ex_exceeds_x", fex);

    double worst_cdf = 0.0;
    for (double v : {0.5, 1.5, 2.5}) {
        const double by_quad =
            quad::integral([](double u) { return speclaw::pullback_weight(u); }, v, speclaw::kPi,
                           1e-12);
        worst_cdf = std::max(worst_cdf, std::abs(by_quad - speclaw::cdf_from_v(v)));
    }
    rep.add("cdf_vs_quadrature", worst_cdf, 1e-9);

    double worst_inv = 0.0;
    for (double y : {0.1, 0.5, 1.0, 2.0, 2.6}) {
        const double v = speclaw::sigma_inv(y);
        worst_inv = std::max(worst_inv, std::abs(speclaw::sigma(v) - y));
    }
    rep.add("sigma_roundtrip", worst_inv, 1e-13);

    const auto tr = speclaw::an_recursion(0.5, 200);
    bool dec = true;
    for (std::size_t i = 1; i < tr.terms.size(); ++i)
        dec = dec && tr.terms[i] < tr.terms[i - 1] && tr.terms[i] > 0.5 && tr.terms[i] < 1.0;
    rep.add_flag("an_recursion_decreasing", dec);
    rep.add("an_recursion_gap_200", std::abs(tr.terms.back() - 0.5), 1e-3);
    return rep;
}

VerificationReport verify_poly() {
    VerificationReport rep;
    bool fidelity = true, vanish = true, moments = true;
    for (int k = 1; k <= 40; ++k) {
        const int n_max = 40 / k;
        const auto seq = snpoly::sniady_sequence(k, n_max, 40);
        for (int n = 1; n <= n_max; ++n) {
            auto d = seq[static_cast<std::size_t>(n)];
            for (int j = 0; j < k; ++j) d = d.derivative();
            fidelity = fidelity && d == seq[static_cast<std::size_t>(n - 1)].shift_by_one();
            auto p = seq[static_cast<std::size_t>(n)];
            for (int j = 0; j < k; ++j) {
                vanish = vanish && p.evaluate(snpoly::Rational(0)) == 0;
                p = p.derivative();
            }
            moments = moments &&
                      seq[static_cast<std::size_t>(n)].integral_01() == snpoly::moment_formula(k, n);
        }
    }
    rep.add_flag("recursion_fidelity_nk40", fidelity);
    rep.add_flag("vanishing_conditions", vanish);
    rep.add_flag("moment_theorem_nk40", moments);

    bool closed = true;
    for (int n = 1; n <= 12; ++n)
        closed = closed && snpoly::closed_form_k1(n) == snpoly::sniady_polynomial(1, n);
    rep.add_flag("closed_form_k1", closed);

    double worst_series = 0.0;
    const auto rs = snpoly::rho_series(30);
    for (double ph : {0.3, 2.0, 4.0}) {
        const Complex z = 0.1 * std::polar(1.0, ph);
        worst_series = std::max(worst_series, std::abs(snpoly::evaluate(rs, z) - wbranch::rho(z)));
    }
    rep.add("rho_series_vs_rho", worst_series, 1e-10);

    double worst_gen = 0.0, worst_mgen = 0.0;
    for (int k : {1, 2, 3}) {
        for (double x : {0.0, 0.5, 1.0}) {
            for (double r : {0.1, 0.2}) {
                const Complex z = r * std::polar(1.0, 0.9);
                worst_gen = std::max(
                    worst_gen, snpoly::genfun_residual(k, x, z, snpoly::genfun_terms(k, z)));
            }
        }
        const Complex z(0.12, 0.05);
        worst_mgen = std::max(
            worst_mgen, snpoly::moment_genfun_residual(k, z, snpoly::genfun_terms(k, z, 1e-11, 15)));
    }
    rep.add("generating_function", worst_gen, 1e-8);
    rep.add("moment_generating_function", worst_mgen, 1e-8);
    return rep;
}

VerificationReport verify_joint() {
    VerificationReport rep;

    double worst_gamma = 0.0;
    for (int k : {2, 3, 4}) {
        for (double r : {0.05, 0.1, 0.2}) {
            const auto g = jointlaw::alpha_gamma(k, r * std::polar(1.0, 0.7));
            Complex s0 = 0.0;
            for (const auto& gj : g.gamma) s0 += gj;
            worst_gamma = std::max(worst_gamma, std::abs(s0 - 1.0));
            std::vector<Complex> pw(g.alpha.begin(), g.alpha.end());
            for (int p = 1; p <= k - 1; ++p) {
                Complex s = 0.0;
                double mag = 0.0;
                for (int j = 0; j < k; ++j) {
                    s += g.gamma[static_cast<std::size_t>(j)] * pw[static_cast<std::size_t>(j)];
                    mag += std::abs(g.gamma[static_cast<std::size_t>(j)] *
                                    pw[static_cast<std::size_t>(j)]);
                    pw[static_cast<std::size_t>(j)] *= g.alpha[static_cast<std::size_t>(j)];
                }
                worst_gamma = std::max(worst_gamma, std::abs(s) / std::max(1.0, mag));
            }
        }
    }
    rep.add("lemma3.1_identities", worst_gamma, 1e-10);

    double worst_nodes = 0.0;
    double worst_mass = 0.0, worst_m1 = 0.0, worst_m2 = 0.0, worst_neg = 0.0, worst_h0 = 0.0;
    for (int k : {1, 2, 3, 4}) {
        for (double t : {0.6, 1.0, 2.0, 5.0}) {
            const auto nd = jointlaw::nodes(k, t);
            for (const auto& e : jointlaw::identity_suite(nd.a).entries)
                worst_nodes = std::max(worst_nodes, e.residual);
            const double mass = quad::integral(
                [&](double x) { return jointlaw::kernel_H(nd, x); }, 0.0, 1.0, 1e-12);
            worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
            worst_h0 = std::max(worst_h0, std::abs(jointlaw::kernel_H(nd, 0.0)));
            const auto mv = jointlaw::mk_vk(k, t);
            if (k >= 2) {
                const double m1 = quad::integral(
                    [&](double x) { return x * jointlaw::kernel_H(nd, x); }, 0.0, 1.0, 1e-12);
                worst_m1 = std::max(worst_m1, std::abs(m1 - mv.m));
            }
            if (k >= 3) {
                const double m2 = quad::integral(
                    [&](double x) { return x * x * jointlaw::kernel_H(nd, x); }, 0.0, 1.0, 1e-12);
                worst_m2 = std::max(worst_m2, std::abs(m2 - (mv.m * mv.m + mv.v)));
            }
            for (int i = 0; i <= 200; ++i)
                worst_neg = std::max(worst_neg, -jointlaw::kernel_H(nd, i / 200.0));
        }
    }
    rep.add("lemma5.1_identities", worst_nodes, 1e-10);
    rep.add("eq5.8_normalization", worst_mass, 1e-9);
    rep.add("eq5.9_first_moment", worst_m1, 1e-9);
    rep.add("eq5.10_second_moment", worst_m2, 1e-9);
    rep.add("kernel_boundary_value", worst_h0, 1e-9);
    rep.add("kernel_nonnegativity", std::max(worst_neg, 0.0), 1e-9);

    double worst_k1 = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double y = speclaw::kE * (i + 0.5) / 50.0;
        const Complex rp = wbranch::rho_boundary(1.0 / y, wbranch::Side::Plus);
        for (int j = 0; j < 50; ++j) {
            const double x = (j + 0.5) / 50.0;
            const double ref =
                std::exp(rp.real() * x) * std::sin(rp.imag() * x) / (speclaw::kPi * y);
            worst_k1 = std::max(worst_k1, std::abs(jointlaw::joint_density(1, x, y) - ref));
        }
    }
    rep.add("k1_density_reduction", worst_k1, 1e-10);

    double worst_nu = 0.0;
    for (int k : {1, 2}) {
        for (double x : {0.25, 0.5, 1.0}) {
            for (int n = 1; n * k <= 4; ++n) {
                const double got = quad::integral(
                    [&](double v) {
                        const double y = speclaw::sigma(v);
                        const auto nd = jointlaw::nodes(k, 1.0 / y, 1e-8);
                        return std::pow(y, n * k) * jointlaw::kernel_H(nd, x) *
                               speclaw::pullback_weight(v);
                    },
                    5e-4, speclaw::kPi - 1e-2, 1e-10);
                const double expect = std::pow(static_cast<double>(k), n * k) *
                                      snpoly::sniady_polynomial(k, n).evaluate(x);
                worst_nu = std::max(worst_nu, std::abs(got - expect) / std::max(1.0, expect));
            }
        }
    }
    rep.add("nu_moments_vs_polynomials", worst_nu, 1e-7);

    double worst_contour = 0.0;
    for (double t : {1.0, 2.0})
        worst_contour = std::max(
            worst_contour, std::abs(jointlaw::contour_mean(t, 2048) - speclaw::cdf_F(1.0 / t)));
    rep.add("contour_mean_vs_cdf", worst_contour, 1e-6);
    return rep;
}

int run_verify(const std::string& suite, const std::string& out_path) {
    VerificationReport rep;
    nlohmann::ordered_json suites = nlohmann::ordered_json::object();
    const auto want = [&](const char* name) { return suite == name || suite == "all"; };
    if (want("lambert")) {
        auto r = verify_lambert();
        suites["lambert"] = r.to_json();
        rep.merge(r);
    }
    if (want("spectral")) {
        auto r = verify_spectral();
        suites["spectral"] = r.to_json();
        rep.merge(r);
    }
    if (want("poly")) {
        auto r = verify_poly();
        suites["poly"] = r.to_json();
        rep.merge(r);
    }
    if (want("joint")) {
        auto r = verify_joint();
        suites["joint"] = r.to_json();
        rep.merge(r);
    }
    nlohmann::ordered_json j;
    j["suite"] = suite;
    j["suites"] = std::move(suites);
    j["overall"] = rep.overall();
    Output out(out_path);
    out.stream() << j.dump(2) << '\n';
    return rep.overall() ? 0 : 1;
}

// ---------------------------------------------------------------- distance

int run_distance(const std::vector<int>& ks, const std::string& out_path) {
    for (int k : ks)
        if (k < 3) throw DomainError("distance: every k must be >= 3");
    Output out(out_path);
    out.stream() << "k,hs_distance\n";
    for (int k : ks) out.stream() << k << ',' << fmt17(jointlaw::hs_distance(k)) << '\n';
    return 0;
}

// ---------------------------------------------------------------- simulate

int run_simulate(int n, int samples, std::uint64_t seed, int k_max,
                 const std::vector<std::string>& checks, const std::string& out_path) {
    const std::set<std::string> want(checks.begin(), checks.end());
    const auto has = [&](const char* c) { return want.count(c) > 0 || want.count("all") > 0; };

    rmtsim::EnsembleConfig cfg{n, samples, seed, k_max};
    rmtsim::validate(cfg);

    nlohmann::ordered_json j;
    j["config"] = {{"n", n}, {"samples", samples}, {"seed", seed}, {"k_max", k_max}};

    if (has("ks") || has("norm")) {
        const auto specs = rmtsim::spectrum_suite(cfg);
        if (has("ks")) {
            double ks1 = 0.0;
            std::vector<double> ksk(static_cast<std::size_t>(k_max), 0.0);
            for (const auto& sp : specs) {
                ks1 += rmtsim::ks_statistic(sp.tstart_eigs, rmtsim::spectral_cdf_clamped);
                for (int k = 1; k <= k_max; ++k)
                    ksk[static_cast<std::size_t>(k - 1)] += rmtsim::ks_statistic(
                        sp.sk_eigs[static_cast<std::size_t>(k - 1)], rmtsim::spectral_cdf_clamped);
            }
            nlohmann::ordered_json sk = nlohmann::ordered_json::object();
            for (int k = 1; k <= k_max; ++k)
                sk[std::to_string(k)] = ksk[static_cast<std::size_t>(k - 1)] / samples;
            j["ks"] = {{"t_star_t", ks1 / samples}, {"s_k", sk}};
        }
        if (has("norm")) {
            nlohmann::ordered_json nr = nlohmann::ordered_json::object();
            for (int k = 1; k <= k_max; ++k) {
                double mean = 0.0;
                for (const auto& sp : specs) mean += sp.opnorms[static_cast<std::size_t>(k - 1)];
                mean /= samples;
                nr[std::to_string(k)] = mean / std::pow(speclaw::kE / k, k / 2.0);
            }
            j["norm_ratio"] = nr;
        }
    }
    if (has("cov")) {
        const auto rep = rmtsim::covariance_check([](double x) { return x; }, cfg);
        nlohmann::ordered_json cov = nlohmann::ordered_json::object();
        for (const auto& e : rep.entries) cov[e.name] = e.residual;
        cov["pass"] = rep.overall();
        j["covariance"] = cov;
    }
    if (has("fsk")) {
        nlohmann::ordered_json fsk = nlohmann::ordered_json::object();
        for (int k = 1; k <= k_max; ++k)
            fsk[std::to_string(k)] = rmtsim::fsk_vs_diag(cfg, k);
        j["fsk"] = fsk;
    }

    Output out(out_path);
    out.stream() << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- recursion

int run_recursion(double t, int iters, const std::string& out_path) {
    const auto tr = speclaw::an_recursion(t, iters);
    Output out(out_path);
    out.stream() << "n,a_n\n";
    for (std::size_t i = 0; i < tr.terms.size(); ++i)
        out.stream() << (i + 1) << ',' << fmt17(tr.terms[i]) << '\n';
    out.stream() << "gap," << fmt17(std::abs(tr.terms.back() - t)) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dtlab: spectral-law, exact-moment and random-matrix numerics "
                 "for the quasinilpotent DT-operator"};
    app.require_subcommand(1);

    int k = 0, grid = 64, n_max = 8, n = 200, samples = 1, k_max = 2, iters = 200;
    std::uint64_t seed = 0;
    double t = 0.5;
    std::string out, suite;
    std::vector<int> k_list{3, 6, 12, 24, 48};
    std::vector<std::string> checks{"all"};

    auto* density = app.add_subcommand("density", "emit marginal (y,phi,F) or joint (x,y,density) CSV");
    density->add_option("--k", k, "joint law index k (omit for the marginal law)")
        ->check(CLI::PositiveNumber);
    density->add_option("--grid", grid, "grid size per axis")->check(CLI::Range(8, 1 << 16));
    density->add_option("--out", out, "output path (default stdout)");

    auto* moments = app.add_subcommand("moments", "exact trace moments: antiderivative vs formula");
    int mk = 1;
    moments->add_option("--k", mk, "power k")->check(CLI::PositiveNumber);
    moments->add_option("--nmax", n_max, "largest n")->check(CLI::PositiveNumber);
    moments->add_option("--out", out, "output path (default stdout)");

    auto* verify = app.add_subcommand("verify", "run a verification suite, print JSON report");
    verify->add_option("--suite", suite, "lambert | spectral | poly | joint | all")
        ->required()
        ->check(CLI::IsMember({"lambert", "spectral", "poly", "joint", "all"}));
    verify->add_option("--out", out, "output path (default stdout)");

    auto* distance = app.add_subcommand("distance", "CSV of k, ||F(S_k) - D_0||_2");
    distance->add_option("--k", k_list, "k values (each >= 3)");
    distance->add_option("--out", out, "output path (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo run, JSON report");
    simulate->add_option("--n", n, "matrix size N")->check(CLI::Range(2, 1 << 20));
    simulate->add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "RNG seed");
    simulate->add_option("--k", k_max, "largest power k")->check(CLI::PositiveNumber);
    simulate->add_option("--checks", checks, "subset of: ks norm cov fsk all")
        ->check(CLI::IsMember({"ks", "norm", "cov", "fsk", "all"}));
    simulate->add_option("--out", out, "output path (default stdout)");

    auto* recursion = app.add_subcommand("recursion", "CSV of the a_n fixed-point recursion");
    recursion->add_option("--t", t, "target t in [0, 1]")->required();
    recursion->add_option("--iters", iters, "iteration count")->check(CLI::PositiveNumber);
    recursion->add_option("--out", out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (density->parsed()) return run_density(k, grid, out);
        if (moments->parsed()) return run_moments(mk, n_max, out);
        if (verify->parsed()) return run_verify(suite, out);
        if (distance->parsed()) return run_distance(k_list, out);
        if (simulate->parsed()) return run_simulate(n, samples, seed, k_max, checks, out);
        if (recursion->parsed()) return run_recursion(t, iters, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
