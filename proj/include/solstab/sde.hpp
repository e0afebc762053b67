#pragma once

#include <vector>

#include "solstab/core.hpp"
#include "solstab/processes.hpp"

namespace solstab {

enum class LimitEquation { nls_real, nls_complex, kdv };

/// One limit (or eps-scaled) flow problem: which equation, over which box,
/// at which spectral point, under which noise.
struct LimitSystemSpec {
    LimitEquation equation = LimitEquation::nls_real;
    BoxPotential pot;
    SpectralPoint zeta;
    NoiseSpec noise;
};

struct NlsFlowResult {
    JostState terminal;
    std::vector<JostState> trajectory;  ///< filled only on request; last entry == terminal
    PathGrid grid;
};

struct KdvFlowResult {
    SchrodingerState terminal;
    std::vector<SchrodingerState> trajectory;
    PathGrid grid;
};

/// Stratonovich-Heun integration of the NLS limit system
///   dPsi = i (-zeta, q; q, zeta) Psi dx + i sqrt(2 alpha) sigma (0 1; 1 0) Psi o dW
/// from Psi(0) = (1, 0). Equivalent in law to the Ito form with the
/// -alpha sigma^2 Psi drift correction.
NlsFlowResult integrate_nls_limit(const LimitSystemSpec& spec, const BrownianPath& path,
                                  bool keep_trajectory = false);

/// Two-noise variant for a complex white-noise perturbation; path2 drives the
/// antisymmetric coupling sqrt(2 alpha) sigma (0 -1; 1 0) Psi o dW2.
NlsFlowResult integrate_nls_complex_limit(const LimitSystemSpec& spec, const BrownianPath& path1,
                                          const BrownianPath& path2, bool keep_trajectory = false);

/// Heun integration of the KdV limit system at zeta = i eta:
///   d phi = phi_x dx,  d phi_x = (eta^2 - q) phi dx - sqrt(2 alpha) sigma phi dW
/// from (phi, phi_x)(0) = (1, eta). The noise multiplies phi only, so the Ito
/// and Stratonovich integrals coincide. The minus sign is the one produced by
/// U0 = q + sigma dW/dx inside phi_xx + (U0 + zeta^2) phi = 0.
KdvFlowResult integrate_kdv_limit(const LimitSystemSpec& spec, const BrownianPath& path,
                                  bool keep_trajectory = false);

/// Terminal psi1(R) of the axis-restricted NLS flow (zeta = i eta, real noise),
/// where psi1 stays real and psi2 imaginary. This is the root function of the
/// per-path eigenvalue re-solve.
double nls_axis_flow_terminal(const BoxPotential& pot, double eta, double sigma, double alpha,
                              const BrownianPath& path);

/// Pathwise final condition F(eta, sigma) = phi_x(R) + eta phi(R) of the KdV
/// flow along the given increments.
double kdv_flow_final_condition(const BoxPotential& pot, double eta, double sigma, double alpha,
                                const BrownianPath& path);

/// First-order Taylor term Psi^(1)(R) of the NLS flow in sigma at zeta = i eta0:
/// the stochastic convolution i int_0^R exp(M(R-y)) (0 1; 1 0) Psi^(0)(y) dW_y
/// with M = (eta0, iq; iq, -eta0), evaluated by left-point quadrature.
JostState integrate_nls_first_order(const BoxPotential& pot, double eta0, const BrownianPath& path);

/// First-order term of the KdV flow: (d_sigma phi, d_sigma phi_x)(R)
///   = -int_0^R (sin(c(R-y))/c, cos(c(R-y))) phi_0(y) dW_y.
SchrodingerState integrate_kdv_first_order(const BoxPotential& pot, double eta0,
                                           const BrownianPath& path);

/// RK4 integration of the eps-scaled NLS system with coefficient
/// q + (sigma/eps) nu(x/eps^2), the telegraph value frozen per fine cell
/// (one RK4 step per cell). The telegraph path must cover [0, R/eps^2].
NlsFlowResult integrate_nls_eps_system(const BoxPotential& pot, SpectralPoint zeta,
                                       const NoiseSpec& noise, const TelegraphPath& tpath);

/// Same for the KdV system phi_xx + (U0_eps + zeta^2) phi = 0 at zeta = i eta.
KdvFlowResult integrate_kdv_eps_system(const BoxPotential& pot, SpectralPoint zeta,
                                       const NoiseSpec& noise, const TelegraphPath& tpath);

}  // namespace solstab
