#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace solstab {

using Complex = std::complex<double>;

/// Uniform discretization of [0, x_max] into n_steps cells.
struct PathGrid {
    double x_max = 1.0;
    int n_steps = 2;

    PathGrid() = default;
    PathGrid(double x_max_, int n_steps_) : x_max(x_max_), n_steps(n_steps_) {
        if (n_steps < 2) throw std::invalid_argument("PathGrid: n_steps must be >= 2");
        if (!(x_max > 0.0)) throw std::invalid_argument("PathGrid: x_max must be positive");
    }

    double dx() const { return x_max / n_steps; }

    bool same_extent(double length, double rel = 1e-12) const {
        return std::abs(x_max - length) <= rel * std::max(1.0, std::abs(length));
    }
};

/// Box initial condition q * 1_[0,R].
struct BoxPotential {
    double q = 1.0;
    double R = 1.0;
};

/// Spectral parameter zeta = xi + i eta in the closed upper half-plane.
struct SpectralPoint {
    double xi = 0.0;
    double eta = 0.0;

    Complex zeta() const { return {xi, eta}; }
};

/// Two-component scattering state of the Zakharov-Shabat flow.
struct JostState {
    Complex psi1{1.0, 0.0};
    Complex psi2{0.0, 0.0};
};

/// Schrodinger scattering state (phi, phi_x). Real-valued for zeta = i eta
/// with real driving noise, which covers every flow this library integrates.
struct SchrodingerState {
    double phi = 1.0;
    double phi_x = 0.0;
};

enum class NoiseKind { real_white, complex_white, telegraph, custom_mean };

/// Perturbation parameters. alpha is the integrated covariance of the driving
/// process; paper-matching runs use alpha = 1/2. epsilon = 1 selects the limit
/// system.
struct NoiseSpec {
    double sigma = 0.0;
    double alpha = 0.5;
    double epsilon = 1.0;
    NoiseKind kind = NoiseKind::real_white;
};

namespace detail {

/// sin(z)/z, series near the origin.
inline double sinc(double z) {
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

inline Complex sinc(Complex z) {
    if (std::abs(z) < 1e-4) {
        const Complex z2 = z * z;
        return 1.0 - z2 / 6.0 + z2 * z2 / 120.0;
    }
    return std::sin(z) / z;
}

/// (sinc(z) - cos(z)) / z^2, series near the origin; equals 1/3 at z = 0.
inline double sinc_minus_cos(double z) {
    if (std::abs(z) < 1e-3) {
        const double z2 = z * z;
        return 1.0 / 3.0 - z2 / 30.0 + z2 * z2 / 840.0;
    }
    return (sinc(z) - std::cos(z)) / (z * z);
}

constexpr double pi = 3.14159265358979323846;

}  // namespace detail

}  // namespace solstab
