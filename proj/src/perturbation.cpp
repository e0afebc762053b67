#include "solstab/perturbation.hpp"

#include <cmath>
#include <stdexcept>

#include "solstab/kdv_spectral.hpp"
#include "solstab/nls_spectral.hpp"
#include "solstab/sde.hpp"

namespace solstab {

namespace {

constexpr double kCriticalTol = 1e-8;
constexpr double kDenominatorFloor = 1e-10;

/// Real first-order NLS kernel: d_sigma F = -int k dW.
double nls_correction_kernel(const BoxPotential& pot, double eta0, double c0, double y) {
    const double q = pot.q, R = pot.R;
    const double s1 = std::sin(c0 * R);
    return q / c0 * s1 + 2.0 * eta0 * q / (c0 * c0) * std::sin(c0 * (R - y)) * std::sin(c0 * y);
}

/// Midpoint quadrature of kernel^2, refined 4x relative to the path grid.
template <typename Kernel>
double isometry_variance(const PathGrid& grid, Kernel&& k) {
    const int n = 4 * grid.n_steps;
    const double dx = grid.x_max / n;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double y = (j + 0.5) * dx;
        const double v = k(y);
        acc += v * v;
    }
    return acc * dx;
}

}  // namespace

JacobianNls nls_jacobian(const BoxPotential& pot, double eta0) {
    if (eta0 < 0.0 || eta0 >= pot.q)
        throw std::invalid_argument("nls_jacobian: eta0 outside [0, q)");
    const double q = pot.q, R = pot.R;
    const Complex zeta(0.0, eta0);
    const Complex c = std::sqrt(Complex(q * q, 0.0) + zeta * zeta);
    const Complex i(0.0, 1.0);

    // Route 1, the displayed identity: i d_xi psi1 = [q^2/c^3 - iR zeta/c] sin(cR)
    // + R zeta^2/c^2 cos(cR).
    const Complex display =
        (q * q / (c * c * c) - i * R * zeta / c) * std::sin(c * R) +
        R * zeta * zeta / (c * c) * std::cos(c * R);

    // Route 2, term-by-term differentiation of psi1(R, zeta) in zeta:
    // d_zeta psi1 = -i sin(cR)/c - i zeta^2 [R cos(cR)/c^2 - sin(cR)/c^3] - R zeta sin(cR)/c.
    const Complex dzeta_psi1 =
        -i * std::sin(c * R) / c -
        i * zeta * zeta * (R * std::cos(c * R) / (c * c) - std::sin(c * R) / (c * c * c)) -
        R * zeta * std::sin(c * R) / c;

    JacobianNls jac;
    jac.d_xi_F = dzeta_psi1;       // d/dxi = d/dzeta along the real direction
    jac.d_eta_F = display;         // d/deta = i d/dzeta; equals the display
    jac.det_j = std::norm(jac.d_xi_F);
    return jac;
}

CorrectionResult nls_eta_correction(const BoxPotential& pot, double eta0, const BrownianPath& path) {
    if (eta0 < 0.0 || eta0 >= pot.q)
        throw std::invalid_argument("nls_eta_correction: eta0 outside [0, q)");
    const double den = nls_jacobian(pot, eta0).d_eta_F.real();
    if (std::abs(den) < kDenominatorFloor)
        throw std::domain_error(
            "nls_eta_correction: denominator vanishes (critical configuration); use "
            "nls_quiescent_correction");

    CorrectionResult out;
    out.denominator = den;
    const JostState first = integrate_nls_first_order(pot, eta0, path);
    // d_sigma F is real for real noise; v = -J^{-1}(Re, Im) gives d_eta = -Re/den.
    out.d_eta = -first.psi1.real() / den;
    out.d_xi = 0.0;
    const double c0 = std::sqrt(pot.q * pot.q - eta0 * eta0);
    out.variance_eta =
        isometry_variance(path.grid,
                          [&](double y) { return nls_correction_kernel(pot, eta0, c0, y); }) /
        (den * den);
    out.variance_xi = 0.0;
    return out;
}

CorrectionResult nls_complex_corrections(const BoxPotential& pot, double eta0,
                                         const BrownianPath& path1, const BrownianPath& path2) {
    CorrectionResult out = nls_eta_correction(pot, eta0, path1);
    const double den = out.denominator;
    const JostState second = integrate_nls_first_order(pot, eta0, path2);
    // Same kernel against the second noise, opposite sign: d_xi = -int k dW2 / den.
    out.d_xi = second.psi1.real() / den;
    out.variance_xi = out.variance_eta;
    return out;
}

CorrectionResult nls_quiescent_correction(const BoxPotential& pot, const BrownianPath& path) {
    if (!nls_is_critical(pot, kCriticalTol))
        throw std::domain_error("nls_quiescent_correction: qR is not an odd multiple of pi/2");
    CorrectionResult out;
    out.denominator = nls_jacobian(pot, 0.0).d_eta_F.real();  // = +-1/q
    out.d_eta = pot.q * path.terminal;
    out.d_xi = 0.0;
    out.variance_eta = pot.q * pot.q * path.grid.x_max;
    out.creates_soliton = out.d_eta > 0.0;
    return out;
}

double nls_quiescent_general(const BoxPotential& pot, std::span<const double> q_values,
                             const PathGrid& grid) {
    if (static_cast<int>(q_values.size()) != grid.n_steps)
        throw std::invalid_argument("nls_quiescent_general: sample count does not match grid");
    double acc = 0.0;
    for (double v : q_values) acc += v;
    return pot.q * acc * grid.dx();
}

double kdv_eta_denominator(const BoxPotential& pot, double eta0) {
    // eta0 = 0 is admitted at q = 0 (the zero-background law, where the value is 2).
    if (eta0 < 0.0 || (eta0 * eta0 >= pot.q && !(eta0 == 0.0 && pot.q == 0.0)))
        throw std::invalid_argument("kdv_eta_denominator: eta0 outside [0, sqrt(q))");
    const double R = pot.R;
    const double c0 = std::sqrt(pot.q - eta0 * eta0);
    const double z = c0 * R;
    // cos(z)[2 + eta R - eta^3 R / c^2] + sin(z)[(3 eta + 2 eta^2 R)/c + eta^3/c^3],
    // with the two c^-2 singular pieces combined through (sinc - cos)/z^2 so the
    // expression stays finite as c0 -> 0.
    return std::cos(z) * (2.0 + eta0 * R) +
           (3.0 * eta0 + 2.0 * eta0 * eta0 * R) * R * detail::sinc(z) +
           eta0 * eta0 * eta0 * R * R * R * detail::sinc_minus_cos(z);
}

CorrectionResult kdv_eta_correction(const BoxPotential& pot, double eta0, const BrownianPath& path) {
    if (eta0 < 0.0 || eta0 * eta0 >= pot.q)
        throw std::invalid_argument("kdv_eta_correction: eta0 outside [0, sqrt(q))");
    if (std::abs(kdv_final_condition(pot, eta0)) > 1e-6 * std::max(1.0, pot.q))
        throw std::invalid_argument("kdv_eta_correction: eta0 is not a deterministic eigenvalue");
    CorrectionResult out;
    out.denominator = kdv_eta_denominator(pot, eta0);
    double den = out.denominator;
    if (std::abs(den) < kDenominatorFloor) {
        den = den < 0.0 ? -kDenominatorFloor : kDenominatorFloor;
        out.near_critical_floor = true;
    }
    const SchrodingerState first = integrate_kdv_first_order(pot, eta0, path);
    const double d_sigma_f = first.phi_x + eta0 * first.phi;  // = -int phi0(R-x) phi0(x) dW
    out.d_eta = -d_sigma_f / den;
    const double c0 = std::sqrt(pot.q - eta0 * eta0);
    auto phi0 = [&](double x) { return std::cos(c0 * x) + eta0 * x * detail::sinc(c0 * x); };
    out.variance_eta = isometry_variance(
                           path.grid, [&](double y) { return phi0(pot.R - y) * phi0(y); }) /
                       (den * den);
    return out;
}

CorrectionResult kdv_critical_correction(const BoxPotential& pot, const BrownianPath& path) {
    if (!kdv_is_critical(pot, kCriticalTol))
        throw std::domain_error("kdv_critical_correction: sqrt(q) R is not a positive multiple of pi");
    const double rq = std::sqrt(pot.q);
    CorrectionResult out;
    out.denominator = 2.0 * std::cos(rq * pot.R);  // = +-2
    // Proof recipe -d_sigma F / d_eta F; at the critical point it collapses to
    // (1/2) int cos^2(sqrt(q) x) dW.
    const SchrodingerState first = integrate_kdv_first_order(pot, 0.0, path);
    out.d_eta = -first.phi_x / out.denominator;
    out.variance_eta =
        isometry_variance(path.grid,
                          [&](double y) { return std::cos(rq * (pot.R - y)) * std::cos(rq * y); }) /
        (out.denominator * out.denominator);
    out.creates_soliton = out.d_eta > 0.0;
    return out;
}

CorrectionResult kdv_zero_q_correction(const BrownianPath& path) {
    CorrectionResult out;
    out.denominator = 2.0;
    out.d_eta = path.terminal / 2.0;
    out.variance_eta = path.grid.x_max / 4.0;
    out.creates_soliton = out.d_eta > 0.0;
    return out;
}

double kdv_zero_q_general(std::span<const double> q_values, double R) {
    if (q_values.empty()) throw std::invalid_argument("kdv_zero_q_general: empty sample");
    double acc = 0.0;
    for (double v : q_values) acc += v;
    return 0.5 * acc * (R / static_cast<double>(q_values.size()));
}

}  // namespace solstab
