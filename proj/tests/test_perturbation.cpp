#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "solstab/kdv_spectral.hpp"
#include "solstab/nls_spectral.hpp"
#include "solstab/perturbation.hpp"
#include "solstab/processes.hpp"
#include "solstab/stats.hpp"

using namespace solstab;
using doctest::Approx;

namespace {

constexpr double pi = 3.14159265358979323846;

BrownianPath zero_path(double R, int n) {
    return make_brownian(PathGrid(R, n), std::vector<double>(n, 0.0));
}

double fd_eta_derivative_nls(const BoxPotential& pot, double eta0, double h = 1e-6) {
    const auto at = [&](double eta) {
        return nls_jost_box(pot, Complex(0.0, eta), pot.R).psi1.real();
    };
    return (at(eta0 + h) - at(eta0 - h)) / (2.0 * h);
}

Complex fd_xi_derivative_nls(const BoxPotential& pot, double eta0, double h = 1e-6) {
    const auto at = [&](double xi) { return nls_jost_box(pot, Complex(xi, eta0), pot.R).psi1; };
    return (at(h) - at(-h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("NLS Jacobian: closed form, identity, finite differences") {
    SUBCASE("quiescent case: d_xi F = -i sin(qR)/q, det J = 1/q^2") {
        const BoxPotential pot{1.0, pi / 2.0};
        const JacobianNls jac = nls_jacobian(pot, 0.0);
        CHECK(jac.d_xi_F.real() == Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(std::abs(jac.d_xi_F.imag()) == Approx(1.0 / pot.q).epsilon(1e-13));
        CHECK(jac.det_j == Approx(1.0 / (pot.q * pot.q)).epsilon(1e-12));
    }
    SUBCASE("identity i d_xi F = d_eta F holds to 1e-12 at eigenvalues") {
        for (const BoxPotential pot : {BoxPotential{1.0, 3.0}, BoxPotential{2.0, 5.0}}) {
            for (double eta0 : nls_find_eigenvalues(pot, 1e-10).eigenvalues) {
                const JacobianNls jac = nls_jacobian(pot, eta0);
                const Complex lhs = Complex(0.0, 1.0) * jac.d_xi_F;
                CHECK(std::abs(lhs - jac.d_eta_F) <= 1e-12 * std::abs(jac.d_eta_F));
                CHECK(jac.det_j > 0.0);
            }
        }
    }
    SUBCASE("central finite differences agree to 1e-5 relative") {
        const BoxPotential pot{1.0, 3.0};
        const double eta0 = nls_find_eigenvalues(pot, 1e-10).eigenvalues.at(0);
        const JacobianNls jac = nls_jacobian(pot, eta0);
        CHECK(fd_eta_derivative_nls(pot, eta0) ==
              Approx(jac.d_eta_F.real()).epsilon(1e-5));
        const Complex fd_xi = fd_xi_derivative_nls(pot, eta0);
        CHECK(std::abs(fd_xi - jac.d_xi_F) <= 1e-5 * std::abs(jac.d_xi_F));
    }
    SUBCASE("eta0 >= q is rejected") {
        CHECK_THROWS_AS(nls_jacobian({1.0, 1.0}, 1.0), std::invalid_argument);
    }
}

TEST_CASE("NLS amplitude correction") {
    const BoxPotential pot{1.0, 3.0};
    const double eta0 = nls_find_eigenvalues(pot, 1e-10).eigenvalues.at(0);
    const PathGrid grid(pot.R, 2048);

    SUBCASE("zero path gives zero correction and positive variance") {
        const CorrectionResult corr = nls_eta_correction(pot, eta0, zero_path(pot.R, 2048));
        CHECK(corr.d_eta == 0.0);
        CHECK(corr.d_xi == 0.0);
        CHECK(corr.variance_eta > 0.0);
        CHECK(corr.denominator != 0.0);
    }
    SUBCASE("ensemble is centered with the Ito-isometry variance") {
        const int n = 10000;
        std::vector<double> vals(n);
        double analytic = 0.0;
        for (int i = 0; i < n; ++i) {
            const CorrectionResult corr =
                nls_eta_correction(pot, eta0, sample_brownian(100 + i, grid));
            vals[i] = corr.d_eta;
            analytic = corr.variance_eta;
        }
        CHECK(std::abs(stats::mean(vals)) <= 3.0 * stats::standard_error(vals));
        CHECK(stats::variance(vals) / analytic == Approx(1.0).epsilon(0.05));

        // Gaussianity at level 0.01
        std::vector<double> normalized(vals);
        for (double& v : normalized) v /= std::sqrt(analytic);
        CHECK(stats::ks_statistic_normal(normalized) < stats::ks_critical_01(n));
    }
    SUBCASE("negating the path negates the correction exactly") {
        const BrownianPath path = sample_brownian(12345, grid);
        std::vector<double> flipped(path.increments);
        for (double& v : flipped) v = -v;
        const double plus = nls_eta_correction(pot, eta0, path).d_eta;
        const double minus = nls_eta_correction(pot, eta0, make_brownian(grid, flipped)).d_eta;
        CHECK(plus == -minus);
    }
}

TEST_CASE("NLS complex-noise corrections") {
    const BoxPotential pot{1.0, 3.0};
    const double eta0 = nls_find_eigenvalues(pot, 1e-10).eigenvalues.at(0);
    const PathGrid grid(pot.R, 2048);

    SUBCASE("zero second path reduces to the real-noise law") {
        const BrownianPath p1 = sample_brownian(7, grid);
        const CorrectionResult both =
            nls_complex_corrections(pot, eta0, p1, zero_path(pot.R, 2048));
        CHECK(both.d_xi == 0.0);
        CHECK(both.d_eta == nls_eta_correction(pot, eta0, p1).d_eta);
    }
    SUBCASE("corrections share the law and decorrelate") {
        const int n = 10000;
        std::vector<double> d_xi(n), d_eta(n);
        for (int i = 0; i < n; ++i) {
            const CorrectionResult corr = nls_complex_corrections(
                pot, eta0, sample_brownian(500 + i, grid),
                sample_brownian(500 + i + (1ULL << 32), grid));
            d_xi[i] = corr.d_xi;
            d_eta[i] = corr.d_eta;
        }
        CHECK(std::abs(stats::correlation(d_xi, d_eta)) < 3.0 / std::sqrt(double(n)));
        CHECK(stats::variance(d_xi) / stats::variance(d_eta) == Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("NLS quiescent creation law") {
    const BoxPotential pot{1.0, pi / 2.0};
    const PathGrid grid(pot.R, 1024);

    SUBCASE("non-critical boxes are rejected") {
        CHECK_THROWS_AS(nls_quiescent_correction({1.0, 1.0}, zero_path(1.0, 1024)),
                        std::domain_error);
    }
    SUBCASE("d_eta = q W_R regardless of the branch sign") {
        std::vector<double> inc(1024, 0.0);
        inc[100] = 0.3;
        const CorrectionResult corr = nls_quiescent_correction(pot, make_brownian(grid, inc));
        CHECK(corr.d_eta == Approx(0.3).epsilon(1e-14));
        CHECK(corr.creates_soliton);
        inc[100] = -0.2;
        const CorrectionResult no = nls_quiescent_correction(pot, make_brownian(grid, inc));
        CHECK(no.d_eta == Approx(-0.2).epsilon(1e-14));
        CHECK(!no.creates_soliton);
    }
    SUBCASE("creation frequency is 1/2 within 3 binomial SE") {
        const int n = 10000;
        int created = 0;
        for (int i = 0; i < n; ++i)
            if (nls_quiescent_correction(pot, sample_brownian(40 + i, grid)).creates_soliton)
                ++created;
        CHECK(std::abs(created / double(n) - 0.5) <= 3.0 * 0.5 / std::sqrt(double(n)));
    }
    SUBCASE("general sampled process: q times the integral") {
        const PathGrid g(pi / 2.0, 100);
        std::vector<double> ones(100, 1.0);
        CHECK(nls_quiescent_general(pot, ones, g) == Approx(pi / 2.0).epsilon(1e-14));
        std::vector<double> minus(100, -1.0);
        CHECK(nls_quiescent_general(pot, minus, g) < 0.0);

        // Brownian increments density matches the white-noise law
        const BrownianPath path = sample_brownian(9, g);
        std::vector<double> density(path.increments);
        for (double& v : density) v /= g.dx();
        CHECK(nls_quiescent_general(pot, density, g) ==
              Approx(nls_quiescent_correction(pot, path).d_eta).epsilon(1e-12));
    }
}

TEST_CASE("KdV denominator (Lemma-form) values and finite differences") {
    SUBCASE("critical point, eta0 = 0: value +-2") {
        CHECK(kdv_eta_denominator({pi * pi, 1.0}, 0.0) == Approx(-2.0).epsilon(1e-12));
        CHECK(kdv_eta_denominator({4.0 * pi * pi, 1.0}, 0.0) == Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("special case eta0 = sqrt(q/2): only the sine term survives") {
        const double rq = pi / std::sqrt(2.0);
        const BoxPotential pot{rq * rq, 1.0};
        const double eta0 = std::sqrt(pot.q / 2.0);
        const double c0 = eta0;
        const double expected = std::sin(c0 * pot.R) *
                                ((3.0 * eta0 + 2.0 * eta0 * eta0 * pot.R) / c0 +
                                 std::pow(eta0, 3) / std::pow(c0, 3));
        CHECK(kdv_eta_denominator(pot, eta0) == Approx(expected).epsilon(1e-10));
        CHECK(std::abs(kdv_eta_denominator(pot, eta0)) > 1.0);
    }
    SUBCASE("finite-difference cross-check at an eigenvalue") {
        const BoxPotential pot{5.0, 1.0};
        const double eta0 = kdv_find_eigenvalues(pot, 1e-10).eigenvalues.at(0);
        const double h = 1e-6;
        const double fd =
            (kdv_final_condition(pot, eta0 + h) - kdv_final_condition(pot, eta0 - h)) / (2.0 * h);
        const double den = kdv_eta_denominator(pot, eta0);
        CHECK(std::abs(den) > 1e-6);
        CHECK(fd == Approx(den).epsilon(1e-5));
    }
    SUBCASE("nonzero at every eigenvalue over a (q, R) grid") {
        for (double q : {2.0, 5.0, 15.0, 50.0, 100.0}) {
            for (double eta0 : kdv_find_eigenvalues({q, 1.0}, 1e-9).eigenvalues)
                CHECK(std::abs(kdv_eta_denominator({q, 1.0}, eta0)) > 1e-6);
        }
    }
}

TEST_CASE("KdV amplitude correction") {
    const BoxPotential pot{5.0, 1.0};
    const double eta0 = kdv_find_eigenvalues(pot, 1e-10).eigenvalues.at(0);
    const PathGrid grid(pot.R, 2048);

    SUBCASE("zero path, zero correction") {
        CHECK(kdv_eta_correction(pot, eta0, zero_path(pot.R, 2048)).d_eta == 0.0);
    }
    SUBCASE("non-eigenvalue eta0 is rejected") {
        CHECK_THROWS_AS(kdv_eta_correction(pot, 0.5, zero_path(pot.R, 2048)),
                        std::invalid_argument);
    }
    SUBCASE("centered, Gaussian, isometry variance") {
        const int n = 10000;
        std::vector<double> vals(n);
        double analytic = 0.0;
        for (int i = 0; i < n; ++i) {
            const CorrectionResult corr =
                kdv_eta_correction(pot, eta0, sample_brownian(900 + i, grid));
            vals[i] = corr.d_eta;
            analytic = corr.variance_eta;
        }
        CHECK(std::abs(stats::mean(vals)) <= 3.0 * stats::standard_error(vals));
        CHECK(stats::variance(vals) / analytic == Approx(1.0).epsilon(0.05));
        std::vector<double> normalized(vals);
        for (double& v : normalized) v /= std::sqrt(analytic);
        CHECK(stats::ks_statistic_normal(normalized) < stats::ks_critical_01(n));
    }
    SUBCASE("matches the direct kernel integral int phi0(R-x) phi0(x) dW / dF") {
        const BrownianPath path = sample_brownian(321, grid);
        const double c0 = std::sqrt(pot.q - eta0 * eta0);
        double acc = 0.0;
        for (int k = 0; k < grid.n_steps; ++k) {
            const double y = k * grid.dx();
            const double a = std::cos(c0 * (pot.R - y)) + eta0 / c0 * std::sin(c0 * (pot.R - y));
            const double b = std::cos(c0 * y) + eta0 / c0 * std::sin(c0 * y);
            acc += a * b * path.increments[k];
        }
        const double expected = acc / kdv_eta_denominator(pot, eta0);
        CHECK(std::abs(kdv_eta_correction(pot, eta0, path).d_eta - expected) <
              1e-10 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("KdV critical-point creation law") {
    const BoxPotential pot{pi * pi, 1.0};
    const PathGrid grid(pot.R, 2048);

    SUBCASE("non-critical boxes are rejected") {
        CHECK_THROWS_AS(kdv_critical_correction({5.0, 1.0}, zero_path(1.0, 2048)),
                        std::domain_error);
    }
    SUBCASE("d_eta = (1/2) int cos^2(sqrt(q) x) dW") {
        const BrownianPath path = sample_brownian(77, grid);
        double acc = 0.0;
        for (int k = 0; k < grid.n_steps; ++k) {
            const double x = k * grid.dx();
            acc += std::pow(std::cos(std::sqrt(pot.q) * x), 2) * path.increments[k];
        }
        CHECK(kdv_critical_correction(pot, path).d_eta == Approx(0.5 * acc).epsilon(1e-8));
    }
    SUBCASE("variance (1/4) int cos^4 and MC agreement") {
        // int_0^1 cos^4(pi x) dx = 3/8
        const int n = 10000;
        std::vector<double> vals(n);
        double analytic = 0.0;
        for (int i = 0; i < n; ++i) {
            const CorrectionResult corr = kdv_critical_correction(pot, sample_brownian(60 + i, grid));
            vals[i] = corr.d_eta;
            analytic = corr.variance_eta;
        }
        CHECK(analytic == Approx(0.25 * 3.0 / 8.0).epsilon(1e-6));
        CHECK(stats::variance(vals) / analytic == Approx(1.0).epsilon(0.05));
        int created = 0;
        for (double v : vals)
            if (v > 0.0) ++created;
        CHECK(std::abs(created / double(n) - 0.5) <= 3.0 * 0.5 / std::sqrt(double(n)));
    }
}

TEST_CASE("KdV zero-background creation law") {
    const PathGrid grid(1.0, 1024);

    SUBCASE("d_eta = W_R / 2; creation iff positive") {
        std::vector<double> inc(1024, 0.0);
        inc[0] = -0.2;
        const CorrectionResult no = kdv_zero_q_correction(make_brownian(grid, inc));
        CHECK(no.d_eta == Approx(-0.1));
        CHECK(!no.creates_soliton);
        inc[0] = 0.6;
        const CorrectionResult yes = kdv_zero_q_correction(make_brownian(grid, inc));
        CHECK(yes.d_eta == Approx(0.3));
        CHECK(yes.creates_soliton);
        CHECK(yes.variance_eta == Approx(0.25));
    }
    SUBCASE("creation frequency 1/2") {
        const int n = 10000;
        int created = 0;
        for (int i = 0; i < n; ++i)
            if (kdv_zero_q_correction(sample_brownian(2000 + i, grid)).creates_soliton) ++created;
        CHECK(std::abs(created / double(n) - 0.5) <= 3.0 * 0.5 / std::sqrt(double(n)));
    }
    SUBCASE("general process: half the integral; created-soliton mass doubles the input mass") {
        std::vector<double> q_values(200, 0.8);
        const double d = kdv_zero_q_general(q_values, 1.0);
        CHECK(d == Approx(0.4).epsilon(1e-14));
        // soliton mass 4 eta vs perturbation mass sigma int Q = 2 sigma d
        const double sigma = 0.01;
        const double mass_ratio = kdv_soliton_mass(sigma * d) / (sigma * 0.8 * 1.0);
        CHECK(mass_ratio == Approx(2.0).epsilon(1e-12));
    }
}
