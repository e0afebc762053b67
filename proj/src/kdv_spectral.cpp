#include "solstab/kdv_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace solstab {

using detail::pi;

SchrodingerState kdv_bound_solution(const BoxPotential& pot, double eta, double x) {
    if (x < 0.0 || x > pot.R * (1.0 + 1e-12))
        throw std::invalid_argument("kdv_bound_solution: x outside [0, R]");
    if (eta < 0.0 || eta * eta >= pot.q)
        throw std::invalid_argument("kdv_bound_solution: eta outside [0, sqrt(q)) (monotone regime)");
    const double c2 = pot.q - eta * eta;
    const double c = std::sqrt(c2);
    const double s = x * detail::sinc(c * x);  // sin(cx)/c
    SchrodingerState st;
    st.phi = std::cos(c * x) + eta * s;
    st.phi_x = eta * std::cos(c * x) - c2 * s;
    return st;
}

double kdv_final_condition(const BoxPotential& pot, double eta) {
    if (eta < 0.0 || eta * eta > pot.q * (1.0 + 1e-12))
        throw std::invalid_argument("kdv_final_condition: eta outside [0, sqrt(q)]");
    const double c2 = std::max(0.0, pot.q - eta * eta);
    const double c = std::sqrt(c2);
    return 2.0 * eta * std::cos(c * pot.R) +
           (2.0 * eta * eta - pot.q) * pot.R * detail::sinc(c * pot.R);
}

double kdv_small_q_expansion(double q, double R) {
    return R * q / 2.0 - R * R * R * q * q / 12.0;
}

int kdv_count_formula(const BoxPotential& pot) {
    if (!(pot.q > 0.0) || !(pot.R > 0.0))
        throw std::invalid_argument("kdv_count_formula: q and R must be positive");
    return static_cast<int>(std::floor(pot.R * std::sqrt(pot.q) / pi)) + 1;
}

double kdv_soliton_mass(double eta) {
    if (eta < 0.0) throw std::invalid_argument("kdv_soliton_mass: eta must be >= 0");
    return 4.0 * eta;
}

double kdv_soliton_energy(double eta) {
    if (eta < 0.0) throw std::invalid_argument("kdv_soliton_energy: eta must be >= 0");
    return 16.0 / 3.0 * eta * eta * eta;
}

bool kdv_is_critical(const BoxPotential& pot, double tol) {
    const double ratio = std::sqrt(pot.q) * pot.R / pi;
    return std::round(ratio) >= 1.0 && std::abs(ratio - std::round(ratio)) * pi <= tol;
}

KdvEigenvalueReport kdv_find_eigenvalues(const BoxPotential& pot, double tol) {
    if (!(pot.q > 0.0) || !(pot.R > 0.0))
        throw std::invalid_argument("kdv_find_eigenvalues: q and R must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("kdv_find_eigenvalues: tol must be positive");

    KdvEigenvalueReport report;
    report.quiescent = kdv_is_critical(pot);
    if (report.quiescent) {
        report.count_formula = static_cast<int>(std::round(std::sqrt(pot.q) * pot.R / pi)) + 1;
    } else {
        report.count_formula = kdv_count_formula(pot);
    }
    const int interior_expected = report.count_formula - (report.quiescent ? 1 : 0);

    const double eta_max = std::sqrt(pot.q);
    auto F = [&](double eta) { return kdv_final_condition(pot, eta); };

    // F(eta_max) = 2 sqrt(q) + qR > 0, so the scan may include the endpoint;
    // near criticality the origin root belongs to the quiescent report.
    const double lo = report.quiescent ? 1e-6 * eta_max : std::min(tol, 1e-9 * eta_max);

    int n_scan = 64 * (report.count_formula + 2);
    for (;; n_scan *= 2) {
        report.eigenvalues.clear();
        report.residuals.clear();
        double prev_eta = lo;
        double prev_f = F(lo);
        for (int k = 1; k <= n_scan; ++k) {
            const double eta = lo + (eta_max - lo) * k / n_scan;
            const double fk = F(eta);
            if (prev_f == 0.0) {
                report.eigenvalues.push_back(prev_eta);
                report.residuals.push_back(0.0);
            } else if (prev_f * fk < 0.0) {
                double a = prev_eta, b = eta, fa = prev_f;
                while (b - a > 4.0 * eta_max * 1e-16) {
                    const double m = 0.5 * (a + b);
                    const double fm = F(m);
                    if (fm == 0.0) {
                        a = b = m;
                        break;
                    }
                    if ((fa < 0.0) == (fm < 0.0)) {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                const double root = 0.5 * (a + b);
                report.eigenvalues.push_back(root);
                report.residuals.push_back(std::abs(F(root)));
            }
            prev_eta = eta;
            prev_f = fk;
        }
        if (static_cast<int>(report.eigenvalues.size()) == interior_expected) break;
        if (n_scan > (1 << 20))
            throw std::runtime_error(
                "kdv_find_eigenvalues: found " + std::to_string(report.eigenvalues.size()) +
                " roots but the count formula gives " + std::to_string(interior_expected) +
                " at maximum scan refinement (q=" + std::to_string(pot.q) +
                ", R=" + std::to_string(pot.R) + ")");
    }

    for (double r : report.residuals)
        if (r > tol) throw std::runtime_error("kdv_find_eigenvalues: root residual exceeds tolerance");
    return report;
}

}  // namespace solstab
