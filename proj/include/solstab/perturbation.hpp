#pragma once

#include <cstdint>
#include <span>

#include "solstab/core.hpp"
#include "solstab/processes.hpp"

namespace solstab {

/// Derivatives of F(xi, eta, sigma) = psi1(R) at the base point (0, eta0, 0).
struct JacobianNls {
    Complex d_xi_F;   ///< purely imaginary at eigenvalues
    Complex d_eta_F;  ///< real at eigenvalues; the correction denominator
    double det_j = 0.0;
};

/// First-order corrections to soliton parameters for one noise realization.
struct CorrectionResult {
    double d_xi = 0.0;
    double d_eta = 0.0;
    double variance_xi = 0.0;   ///< analytic (Ito isometry) variance of d_xi
    double variance_eta = 0.0;  ///< analytic variance of d_eta
    double denominator = 0.0;   ///< d_eta F at the base point
    std::uint64_t path_id = 0;
    bool creates_soliton = false;    ///< meaningful for the critical-point laws
    bool near_critical_floor = false;  ///< denominator was floored (warning flag)
};

/// Closed-form Jacobian of Lemma-style identities:
/// i d_xi F = d_eta F = [q^2/c^3 - i R zeta/c] sin(cR) + R zeta^2/c^2 cos(cR)
/// at zeta = i eta0; det J = (Re d_xi F)^2 + (Im d_xi F)^2 > 0.
JacobianNls nls_jacobian(const BoxPotential& pot, double eta0);

/// Amplitude correction under real white noise at an interior eigenvalue:
/// d_eta = -Re(d_sigma F)/d_eta F with d_sigma F from the first-order
/// stochastic convolution; velocity is unperturbed (d_xi = 0 exactly).
CorrectionResult nls_eta_correction(const BoxPotential& pot, double eta0, const BrownianPath& path);

/// Complex-noise corrections: the same kernel integrated against two
/// independent noises drives (d_eta, d_xi); equal laws, independent.
CorrectionResult nls_complex_corrections(const BoxPotential& pot, double eta0,
                                         const BrownianPath& path1, const BrownianPath& path2);

/// Quiescent-soliton law at critical qR = (2n+1) pi/2: d_eta = q W_R, a true
/// soliton appears iff W_R > 0.
CorrectionResult nls_quiescent_correction(const BoxPotential& pot, const BrownianPath& path);

/// General perturbing process at a critical point: d_eta = q int_0^R Q_x dx.
double nls_quiescent_general(const BoxPotential& pot, std::span<const double> q_values,
                             const PathGrid& grid);

/// d_eta F of the KdV problem (Lemma-style closed form), continuous on
/// [0, sqrt(q)) including eta0 = sqrt(q/2); equals 2 cos(sqrt(q) R) at eta0 = 0.
double kdv_eta_denominator(const BoxPotential& pot, double eta0);

/// Amplitude/velocity parameter correction at an interior KdV eigenvalue:
/// d_eta = [int phi0(R-x) phi0(x) dW] / d_eta F.
CorrectionResult kdv_eta_correction(const BoxPotential& pot, double eta0, const BrownianPath& path);

/// Critical-point law at sqrt(q) R = n pi (n >= 1):
/// d_eta = (1/2) int_0^R cos^2(sqrt(q) x) dW; soliton created iff positive.
CorrectionResult kdv_critical_correction(const BoxPotential& pot, const BrownianPath& path);

/// Zero-background law (q = 0): d_eta = W_R / 2; soliton created iff positive.
/// (The first-order denominator at q = 0 is d_eta F = 2: the x < 0 decay
/// condition makes phi_x(0) = eta, so d_eta F = d_eta phi_x + phi = 2.)
CorrectionResult kdv_zero_q_correction(const BrownianPath& path);

/// General process at q = 0: d_eta = (1/2) int_0^R Q_x dx.
double kdv_zero_q_general(std::span<const double> q_values, double R);

}  // namespace solstab
