#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "solstab/nls_spectral.hpp"

using namespace solstab;
using doctest::Approx;

namespace {
constexpr double pi = 3.14159265358979323846;
}

TEST_CASE("Jost flow starts at (1, 0)") {
    const BoxPotential pot{1.3, 2.0};
    for (const Complex zeta : {Complex(0.0, 0.0), Complex(0.4, 0.7), Complex(0.0, 1.3)}) {
        const JostState st = nls_jost_box(pot, zeta, 0.0);
        CHECK(st.psi1 == Complex(1.0, 0.0));
        CHECK(st.psi2 == Complex(0.0, 0.0));
    }
}

TEST_CASE("Jost flow at zeta = iq is the degenerate limit (1+qx, iqx)") {
    SUBCASE("q = 1 reproduces (1+x, ix)") {
        const BoxPotential pot{1.0, 2.0};
        const JostState st = nls_jost_box(pot, Complex(0.0, 1.0), 0.7);
        CHECK(st.psi1.real() == Approx(1.7).epsilon(1e-12));
        CHECK(st.psi1.imag() == Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(st.psi2.imag() == Approx(0.7).epsilon(1e-12));
    }
    SUBCASE("general q") {
        const BoxPotential pot{2.5, 1.0};
        const JostState st = nls_jost_box(pot, Complex(0.0, 2.5), 0.3);
        CHECK(st.psi1.real() == Approx(1.0 + 2.5 * 0.3).epsilon(1e-10));
        CHECK(st.psi2.imag() == Approx(2.5 * 0.3).epsilon(1e-10));
    }
}

TEST_CASE("Jost flow at zeta = 0 is (cos qx, i sin qx)") {
    const BoxPotential pot{1.0, 2.0};
    const JostState st = nls_jost_box(pot, Complex(0.0, 0.0), pi / 2.0);
    CHECK(st.psi1.real() == Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(st.psi2.imag() == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("norm conservation for real zeta") {
    const BoxPotential pot{0.8, 1.5};
    const Complex zeta(0.6, 0.0);
    for (double x : {0.2, 0.7, 1.5}) {
        const JostState st = nls_jost_box(pot, zeta, x);
        CHECK(std::norm(st.psi1) + std::norm(st.psi2) == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("x outside [0, R] is rejected") {
    const BoxPotential pot{1.0, 1.0};
    CHECK_THROWS_AS(nls_jost_box(pot, Complex(0, 0), -0.1), std::invalid_argument);
    CHECK_THROWS_AS(nls_jost_box(pot, Complex(0, 0), 1.1), std::invalid_argument);
}

TEST_CASE("a(0) = cos(qR) vanishes at the quiescent threshold") {
    const BoxPotential pot{1.0, pi / 2.0};
    const Complex a = nls_jost_coefficient_a(pot, Complex(0.0, 0.0));
    CHECK(std::abs(a) < 1e-14);
}

TEST_CASE("a tends to 1 high on the imaginary axis") {
    const BoxPotential pot{1.0, 1.0};
    CHECK(std::abs(nls_jost_coefficient_a(pot, Complex(0.0, 100.0)) - 1.0) < 1e-2);
    // and the approach improves with height (the closed form stays in range
    // up to eta R ~ 700, where cosh overflows)
    CHECK(std::abs(nls_jost_coefficient_a(pot, Complex(0.0, 300.0)) - 1.0) <
          std::abs(nls_jost_coefficient_a(pot, Complex(0.0, 100.0)) - 1.0));
}

TEST_CASE("axis condition values and limits") {
    SUBCASE("quiescent threshold") {
        CHECK(nls_axis_condition({1.0, pi / 2.0}, 0.0) == Approx(0.0).scale(1.0).epsilon(1e-14));
    }
    SUBCASE("eta = q gives 1 + qR, no eigenvalue at zeta = iq") {
        CHECK(nls_axis_condition({1.0, 2.0}, 1.0) == Approx(3.0).epsilon(1e-12));
        CHECK(nls_axis_condition({0.7, 3.0}, 0.7) == Approx(1.0 + 2.1).epsilon(1e-12));
    }
    SUBCASE("domain ends at [0, q]") {
        CHECK_THROWS_AS(nls_axis_condition({1.0, 1.0}, 1.5), std::invalid_argument);
        CHECK_THROWS_AS(nls_axis_condition({1.0, 1.0}, -0.1), std::invalid_argument);
    }
    SUBCASE("qR < pi/2 leaves no zero on (0, q)") {
        const BoxPotential pot{1.0, 1.0};
        double min_abs = 1e300;
        for (int k = 0; k <= 1000; ++k) {
            const double eta = 1e-6 + (1.0 - 2e-6) * k / 1000.0;
            min_abs = std::min(min_abs, std::abs(nls_axis_condition(pot, eta)));
        }
        CHECK(min_abs > 0.05);
    }
}

TEST_CASE("soliton count formula") {
    CHECK(nls_count_formula({1.0, 2.0}) == 1);
    CHECK(nls_count_formula({1.0, 1.0}) == 0);
    CHECK(nls_count_formula({2.0, 5.0}) == 3);
    CHECK(nls_count_formula({0.1, 0.1}) == 0);
}

TEST_CASE("argument-principle count matches the formula") {
    CHECK(nls_count_argument_principle({1.0, 2.0}, 3.0, 4096) == 1);
    CHECK(nls_count_argument_principle({1.0, 1.0}, 3.0, 4096) == 0);
    CHECK(nls_count_argument_principle({2.0, 5.0}, 5.0, 8192) == 3);
}

TEST_CASE("argument principle rejects bad contours and critical boxes") {
    CHECK_THROWS_AS(nls_count_argument_principle({2.0, 5.0}, 1.0, 4096), std::invalid_argument);
    CHECK_THROWS_AS(nls_count_argument_principle({1.0, pi / 2.0}, 3.0, 4096), std::domain_error);
}

TEST_CASE("eigenvalue search: counts, residuals, reference root") {
    SUBCASE("q=1, R=2 has one eigenvalue") {
        const auto rep = nls_find_eigenvalues({1.0, 2.0}, 1e-10);
        REQUIRE(rep.eigenvalues.size() == 1);
        CHECK(rep.count_formula == 1);
        REQUIRE(rep.count_argument_principle.has_value());
        CHECK(*rep.count_argument_principle == 1);
        CHECK(rep.residuals[0] <= 1e-10);
        CHECK(!rep.quiescent);
    }
    SUBCASE("q=1, R=1 has none") {
        const auto rep = nls_find_eigenvalues({1.0, 1.0}, 1e-10);
        CHECK(rep.eigenvalues.empty());
        CHECK(rep.count_formula == 0);
    }
    SUBCASE("q=1, R=3 reference root") {
        const auto rep = nls_find_eigenvalues({1.0, 3.0}, 1e-10);
        REQUIRE(rep.eigenvalues.size() == 1);
        // bisection reference for this module, frozen at tol 1e-10
        CHECK(rep.eigenvalues[0] == Approx(0.65036613419).epsilon(1e-9));
    }
    SUBCASE("critical box reports the quiescent zero separately") {
        const auto rep = nls_find_eigenvalues({1.0, pi / 2.0}, 1e-10);
        CHECK(rep.quiescent);
        CHECK(rep.count_formula == 1);
        CHECK(rep.eigenvalues.empty());
    }
}

TEST_CASE("roots are zeros of a and flip the sign of the condition") {
    const BoxPotential pot{2.0, 5.0};
    const double tol = 1e-10;
    const auto rep = nls_find_eigenvalues(pot, tol);
    REQUIRE(rep.eigenvalues.size() == 3);
    for (double eta : rep.eigenvalues) {
        CHECK(std::abs(nls_jost_coefficient_a(pot, Complex(0.0, eta))) <= 10.0 * tol);
        const double below = nls_axis_condition(pot, eta - 1e-6);
        const double above = nls_axis_condition(pot, eta + 1e-6);
        CHECK(below * above < 0.0);  // simple roots
    }
    for (std::size_t k = 1; k < rep.eigenvalues.size(); ++k)
        CHECK(rep.eigenvalues[k] > rep.eigenvalues[k - 1]);
}

TEST_CASE("count consistency across a (q, R) grid away from critical points") {
    for (double q : {0.5, 1.0, 2.0}) {
        for (double R : {1.0, 2.0, 5.0}) {
            const double ratio = q * R / pi - 0.5;
            if (std::abs(ratio - std::round(ratio)) * pi < 0.05) continue;
            const auto rep = nls_find_eigenvalues({q, R}, 1e-10);
            CHECK(static_cast<int>(rep.eigenvalues.size()) == rep.count_formula);
            REQUIRE(rep.count_argument_principle.has_value());
            CHECK(*rep.count_argument_principle == rep.count_formula);
        }
    }
}

TEST_CASE("eigenvalue search stays consistent over a dense (q, R) sweep") {
    // includes boxes just past critical thresholds, where the newest root is tiny
    for (int iq = 1; iq <= 12; ++iq) {
        for (int ir = 1; ir <= 12; ++ir) {
            const double q = 0.25 * iq;
            const double R = 0.5 * ir;
            const double ratio = q * R / pi - 0.5;
            if (std::abs(ratio - std::round(ratio)) * pi < 1e-9) continue;
            const auto rep = nls_find_eigenvalues({q, R}, 1e-9);
            CHECK(static_cast<int>(rep.eigenvalues.size()) == rep.count_formula);
        }
    }
    // just above and below a critical threshold
    const double q_crit = pi / 2.0;  // R = 1
    CHECK(nls_find_eigenvalues({q_crit + 1e-6, 1.0}, 1e-9).eigenvalues.size() == 1);
    CHECK(nls_find_eigenvalues({q_crit - 1e-6, 1.0}, 1e-9).eigenvalues.empty());
}

TEST_CASE("eigenvalues emerge monotonically in R") {
    const double q = 1.0;
    std::vector<std::vector<double>> spectra;
    for (double R = 1.7; R < 8.0; R += 0.25) {
        const double ratio = q * R / pi - 0.5;
        if (std::abs(ratio - std::round(ratio)) * pi < 0.02) continue;
        spectra.push_back(nls_find_eigenvalues({q, R}, 1e-10).eigenvalues);
    }
    for (std::size_t k = 1; k < spectra.size(); ++k) {
        const auto& prev = spectra[k - 1];
        const auto& cur = spectra[k];
        REQUIRE(cur.size() >= prev.size());
        // match indices from the top: the oldest eigenvalue is the largest
        for (std::size_t j = 0; j < prev.size(); ++j) {
            CHECK(cur[cur.size() - 1 - j] >= prev[prev.size() - 1 - j] - 1e-12);
        }
    }
}
