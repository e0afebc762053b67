#pragma once

#include <vector>

#include "solstab/core.hpp"

namespace solstab {

/// Discrete spectrum of the Schrodinger problem with a box potential.
struct KdvEigenvalueReport {
    std::vector<double> eigenvalues;  ///< strictly increasing, each in (0, sqrt(q))
    std::vector<double> residuals;    ///< |F| at each root
    int count_formula = 0;
    bool quiescent = false;           ///< newest root at eta = 0 (critical sqrt(q) R = n pi)
};

/// Bound-state candidate of the box problem from (phi, phi_x)(0) = (1, eta):
///   phi = cos(cx) + (eta/c) sin(cx), c = sqrt(q - eta^2).
SchrodingerState kdv_bound_solution(const BoxPotential& pot, double eta, double x);

/// Decay condition at x = R: F(eta) = phi_x(R) + eta phi(R)
///   = 2 eta cos(cR) + ((2 eta^2 - q)/c) sin(cR),
/// continuous through eta = sqrt(q/2) and up to eta = sqrt(q). Zeros on
/// (0, sqrt(q)) are the discrete eigenvalues.
double kdv_final_condition(const BoxPotential& pot, double eta);

/// Leading terms of the small-q root: Rq/2 - R^3 q^2/12.
double kdv_small_q_expansion(double q, double R);

/// floor(R sqrt(q)/pi) + 1.
int kdv_count_formula(const BoxPotential& pot);

/// Soliton mass 4 eta and energy (16/3) eta^3.
double kdv_soliton_mass(double eta);
double kdv_soliton_energy(double eta);

/// Sign-change scan plus bisection on F over (0, sqrt(q)).
KdvEigenvalueReport kdv_find_eigenvalues(const BoxPotential& pot, double tol);

/// True when sqrt(q) R sits within tol of n pi, n >= 1.
bool kdv_is_critical(const BoxPotential& pot, double tol = 1e-8);

}  // namespace solstab
