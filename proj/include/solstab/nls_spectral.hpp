#pragma once

#include <optional>
#include <vector>

#include "solstab/core.hpp"

namespace solstab {

/// Discrete spectrum of the Zakharov-Shabat problem with a box potential.
struct NlsEigenvalueReport {
    std::vector<double> eigenvalues;   ///< strictly increasing, each in (0, q)
    std::vector<double> residuals;     ///< |axis condition| at each root
    int count_formula = 0;
    std::optional<int> count_argument_principle;  ///< absent near critical qR
    bool quiescent = false;            ///< exact zero at eta = 0 (critical qR)
};

/// Closed-form Jost flow of the box problem from Psi(0) = (1, 0):
///   psi1 = cos(cx) - i zeta x sinc(cx),  psi2 = i q x sinc(cx),
/// with c = sqrt(q^2 + zeta^2); the c -> 0 limit (1 + qx, iqx) is built in.
JostState nls_jost_box(const BoxPotential& pot, Complex zeta, double x);

/// First Jost coefficient a(zeta) = psi1(R, zeta) e^{i zeta R}; entire in zeta.
Complex nls_jost_coefficient_a(const BoxPotential& pot, Complex zeta);

/// psi1(R, i eta) restricted to the imaginary axis: real, pole-free on [0, q],
/// value 1 + qR at eta = q. Its zeros on (0, q) are the discrete eigenvalues.
double nls_axis_condition(const BoxPotential& pot, double eta);

/// floor(1/2 + qR/pi); at critical qR = (2n+1)pi/2 the quiescent soliton is
/// included.
int nls_count_formula(const BoxPotential& pot);

/// Winding number of a(zeta) along [-r, r] plus the upper semicircle of
/// radius r > q. Refines the discretization internally on suspect phase jumps.
int nls_count_argument_principle(const BoxPotential& pot, double contour_radius, int n_contour);

/// Sign-change scan plus bisection on the axis condition.
NlsEigenvalueReport nls_find_eigenvalues(const BoxPotential& pot, double tol);

/// True when qR sits within tol of an odd multiple of pi/2 (a zero of a at the
/// spectral origin). Used to gate the argument-principle contour and the
/// quiescent perturbation laws.
bool nls_is_critical(const BoxPotential& pot, double tol = 1e-8);

}  // namespace solstab
