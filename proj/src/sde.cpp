#include "solstab/sde.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace solstab {

namespace {

void require_grid_match(const PathGrid& grid, double R, const char* who) {
    if (!grid.same_extent(R)) throw std::invalid_argument(std::string(who) + ": path grid does not span [0, R]");
}

}  // namespace

NlsFlowResult integrate_nls_limit(const LimitSystemSpec& spec, const BrownianPath& path,
                                  bool keep_trajectory) {
    require_grid_match(path.grid, spec.pot.R, "integrate_nls_limit");
    const double h = path.grid.dx();
    const double s = std::sqrt(2.0 * spec.noise.alpha) * spec.noise.sigma;
    const Complex zeta = spec.zeta.zeta();
    const double q = spec.pot.q;
    const Complex i(0.0, 1.0);

    auto drift = [&](Complex p1, Complex p2, Complex& d1, Complex& d2) {
        d1 = i * (-zeta * p1 + q * p2);
        d2 = i * (q * p1 + zeta * p2);
    };

    NlsFlowResult out{JostState{}, {}, path.grid};
    if (keep_trajectory) {
        out.trajectory.reserve(path.grid.n_steps + 1);
        out.trajectory.push_back(out.terminal);
    }
    Complex p1(1.0, 0.0), p2(0.0, 0.0);
    for (int k = 0; k < path.grid.n_steps; ++k) {
        const double dw = path.increments[k];
        Complex a1, a2;
        drift(p1, p2, a1, a2);
        const Complex b1 = i * s * p2, b2 = i * s * p1;
        const Complex e1 = p1 + a1 * h + b1 * dw;
        const Complex e2 = p2 + a2 * h + b2 * dw;
        Complex a1p, a2p;
        drift(e1, e2, a1p, a2p);
        const Complex b1p = i * s * e2, b2p = i * s * e1;
        p1 += 0.5 * (a1 + a1p) * h + 0.5 * (b1 + b1p) * dw;
        p2 += 0.5 * (a2 + a2p) * h + 0.5 * (b2 + b2p) * dw;
        if (keep_trajectory) out.trajectory.push_back(JostState{p1, p2});
    }
    out.terminal = JostState{p1, p2};
    if (keep_trajectory) out.trajectory.back() = out.terminal;
    return out;
}

NlsFlowResult integrate_nls_complex_limit(const LimitSystemSpec& spec, const BrownianPath& path1,
                                          const BrownianPath& path2, bool keep_trajectory) {
    require_grid_match(path1.grid, spec.pot.R, "integrate_nls_complex_limit");
    if (path1.grid.n_steps != path2.grid.n_steps ||
        !path1.grid.same_extent(path2.grid.x_max))
        throw std::invalid_argument("integrate_nls_complex_limit: the two paths use different grids");
    const double h = path1.grid.dx();
    const double s = std::sqrt(2.0 * spec.noise.alpha) * spec.noise.sigma;
    const Complex zeta = spec.zeta.zeta();
    const double q = spec.pot.q;
    const Complex i(0.0, 1.0);

    auto drift = [&](Complex p1, Complex p2, Complex& d1, Complex& d2) {
        d1 = i * (-zeta * p1 + q * p2);
        d2 = i * (q * p1 + zeta * p2);
    };
    // Noise 1: i s (0 1; 1 0) Psi; noise 2: s (0 -1; 1 0) Psi (the conjugate
    // coupling of the complex-noise ZSSP).
    auto diffusion = [&](Complex p1, Complex p2, double w1, double w2, Complex& d1, Complex& d2) {
        d1 = i * s * p2 * w1 - s * p2 * w2;
        d2 = i * s * p1 * w1 + s * p1 * w2;
    };

    NlsFlowResult out{JostState{}, {}, path1.grid};
    if (keep_trajectory) out.trajectory.push_back(out.terminal);
    Complex p1(1.0, 0.0), p2(0.0, 0.0);
    for (int k = 0; k < path1.grid.n_steps; ++k) {
        const double w1 = path1.increments[k], w2 = path2.increments[k];
        Complex a1, a2, b1, b2;
        drift(p1, p2, a1, a2);
        diffusion(p1, p2, w1, w2, b1, b2);
        const Complex e1 = p1 + a1 * h + b1;
        const Complex e2 = p2 + a2 * h + b2;
        Complex a1p, a2p, b1p, b2p;
        drift(e1, e2, a1p, a2p);
        diffusion(e1, e2, w1, w2, b1p, b2p);
        p1 += 0.5 * (a1 + a1p) * h + 0.5 * (b1 + b1p);
        p2 += 0.5 * (a2 + a2p) * h + 0.5 * (b2 + b2p);
        if (keep_trajectory) out.trajectory.push_back(JostState{p1, p2});
    }
    out.terminal = JostState{p1, p2};
    if (keep_trajectory) out.trajectory.back() = out.terminal;
    return out;
}

KdvFlowResult integrate_kdv_limit(const LimitSystemSpec& spec, const BrownianPath& path,
                                  bool keep_trajectory) {
    require_grid_match(path.grid, spec.pot.R, "integrate_kdv_limit");
    const double h = path.grid.dx();
    const double s = std::sqrt(2.0 * spec.noise.alpha) * spec.noise.sigma;
    const double eta = spec.zeta.eta;
    const double drift_coef = eta * eta - spec.pot.q;

    KdvFlowResult out{SchrodingerState{1.0, eta}, {}, path.grid};
    if (keep_trajectory) out.trajectory.push_back(out.terminal);
    double p = 1.0, px = eta;
    for (int k = 0; k < path.grid.n_steps; ++k) {
        const double dw = path.increments[k];
        const double dp1 = px * h;
        const double dx1 = drift_coef * p * h - s * p * dw;
        const double ep = p + dp1, ex = px + dx1;
        const double dp2 = ex * h;
        const double dx2 = drift_coef * ep * h - s * ep * dw;
        p += 0.5 * (dp1 + dp2);
        px += 0.5 * (dx1 + dx2);
        if (keep_trajectory) out.trajectory.push_back(SchrodingerState{p, px});
    }
    out.terminal = SchrodingerState{p, px};
    if (keep_trajectory) out.trajectory.back() = out.terminal;
    return out;
}

double nls_axis_flow_terminal(const BoxPotential& pot, double eta, double sigma, double alpha,
                              const BrownianPath& path) {
    require_grid_match(path.grid, pot.R, "nls_axis_flow_terminal");
    // At zeta = i eta with real noise, psi1 = u stays real and psi2 = i v:
    //   du = (eta u - q v) dx - s v dW,   dv = (q u - eta v) dx + s u dW.
    const double h = path.grid.dx();
    const double s = std::sqrt(2.0 * alpha) * sigma;
    const double q = pot.q;
    double u = 1.0, v = 0.0;
    for (int k = 0; k < path.grid.n_steps; ++k) {
        const double dw = path.increments[k];
        const double du1 = (eta * u - q * v) * h - s * v * dw;
        const double dv1 = (q * u - eta * v) * h + s * u * dw;
        const double eu = u + du1, ev = v + dv1;
        const double du2 = (eta * eu - q * ev) * h - s * ev * dw;
        const double dv2 = (q * eu - eta * ev) * h + s * eu * dw;
        u += 0.5 * (du1 + du2);
        v += 0.5 * (dv1 + dv2);
    }
    return u;
}

double kdv_flow_final_condition(const BoxPotential& pot, double eta, double sigma, double alpha,
                                const BrownianPath& path) {
    require_grid_match(path.grid, pot.R, "kdv_flow_final_condition");
    const double h = path.grid.dx();
    const double s = std::sqrt(2.0 * alpha) * sigma;
    const double drift_coef = eta * eta - pot.q;
    double p = 1.0, px = eta;
    for (int k = 0; k < path.grid.n_steps; ++k) {
        const double dw = path.increments[k];
        const double dp1 = px * h;
        const double dx1 = drift_coef * p * h - s * p * dw;
        const double ep = p + dp1, ex = px + dx1;
        const double dp2 = ex * h;
        const double dx2 = drift_coef * ep * h - s * ep * dw;
        p += 0.5 * (dp1 + dp2);
        px += 0.5 * (dx1 + dx2);
    }
    return px + eta * p;
}

JostState integrate_nls_first_order(const BoxPotential& pot, double eta0, const BrownianPath& path) {
    require_grid_match(path.grid, pot.R, "integrate_nls_first_order");
    if (eta0 < 0.0 || eta0 >= pot.q)
        throw std::invalid_argument("integrate_nls_first_order: eta0 outside [0, q)");
    const double q = pot.q, R = pot.R;
    const double c0 = std::sqrt(q * q - eta0 * eta0);
    const double h = path.grid.dx();

    // exp(M tau) = cos(c0 tau) I + (sin(c0 tau)/c0) M with M = (eta0, iq; iq, -eta0).
    // Applied to (0 1; 1 0) Psi0(y) = (i w0, u0) with u0 = (eta0/c0) sin(c0 y) + cos(c0 y)
    // and w0 = (q/c0) sin(c0 y), the components stay (i * real, real):
    //   comp1 = i [ (cos + eta0 sn) w0 + q sn u0 ],   comp2 = (cos - eta0 sn) u0 - q sn w0,
    // with sn = sin(c0 tau)/c0, tau = R - y. Psi1(R) = i sum(comp) dW.
    double acc1 = 0.0;  // sum of real kernel K1 against dW
    double acc2 = 0.0;  // sum of real kernel K2 against dW
    for (int k = 0; k < path.grid.n_steps; ++k) {
        const double y = k * h;  // left-point (Ito) evaluation
        const double tau = R - y;
        const double u0 = eta0 * y * detail::sinc(c0 * y) + std::cos(c0 * y);
        const double w0 = q * y * detail::sinc(c0 * y);
        const double sn = tau * detail::sinc(c0 * tau);
        const double cs = std::cos(c0 * tau);
        const double k1 = (cs + eta0 * sn) * w0 + q * sn * u0;
        const double k2 = (cs - eta0 * sn) * u0 - q * sn * w0;
        acc1 += k1 * path.increments[k];
        acc2 += k2 * path.increments[k];
    }
    // i * (i acc1, acc2) = (-acc1, i acc2)
    return JostState{Complex(-acc1, 0.0), Complex(0.0, acc2)};
}

SchrodingerState integrate_kdv_first_order(const BoxPotential& pot, double eta0,
                                           const BrownianPath& path) {
    require_grid_match(path.grid, pot.R, "integrate_kdv_first_order");
    if (eta0 < 0.0 || eta0 * eta0 >= pot.q)
        throw std::invalid_argument("integrate_kdv_first_order: eta0 outside [0, sqrt(q))");
    const double R = pot.R;
    const double c0 = std::sqrt(pot.q - eta0 * eta0);
    const double h = path.grid.dx();
    double acc_phi = 0.0, acc_phix = 0.0;
    for (int k = 0; k < path.grid.n_steps; ++k) {
        const double y = k * h;
        const double tau = R - y;
        const double phi0 = std::cos(c0 * y) + eta0 * y * detail::sinc(c0 * y);
        acc_phi += tau * detail::sinc(c0 * tau) * phi0 * path.increments[k];
        acc_phix += std::cos(c0 * tau) * phi0 * path.increments[k];
    }
    return SchrodingerState{-acc_phi, -acc_phix};
}

namespace {

void require_eps_setup(const NoiseSpec& noise, const BoxPotential& pot, const TelegraphPath& tpath,
                       const char* who) {
    if (!(noise.epsilon > 0.0) || noise.epsilon > 1.0)
        throw std::invalid_argument(std::string(who) + ": epsilon must lie in (0, 1]");
    const double internal_span = pot.R / (noise.epsilon * noise.epsilon);
    if (!tpath.grid.same_extent(internal_span, 1e-9))
        throw std::invalid_argument(std::string(who) + ": telegraph path must cover [0, R/eps^2]");
    // One RK4 step per frozen telegraph cell; x-step = eps^2 * cell length.
    if (tpath.grid.dx() > 1.0 / (10.0 * tpath.rate) * (1.0 + 1e-9))
        throw std::invalid_argument(std::string(who) + ": telegraph grid under-resolves the switching");
}

}  // namespace

NlsFlowResult integrate_nls_eps_system(const BoxPotential& pot, SpectralPoint zeta,
                                       const NoiseSpec& noise, const TelegraphPath& tpath) {
    require_eps_setup(noise, pot, tpath, "integrate_nls_eps_system");
    const double h = noise.epsilon * noise.epsilon * tpath.grid.dx();
    const Complex zc = zeta.zeta();
    const Complex i(0.0, 1.0);
    Complex p1(1.0, 0.0), p2(0.0, 0.0);
    for (double nu : tpath.values) {
        const double U = pot.q + noise.sigma / noise.epsilon * nu;
        auto f = [&](Complex a, Complex b, Complex& da, Complex& db) {
            da = i * (-zc * a + U * b);
            db = i * (U * a + zc * b);
        };
        Complex k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        f(p1, p2, k1a, k1b);
        f(p1 + 0.5 * h * k1a, p2 + 0.5 * h * k1b, k2a, k2b);
        f(p1 + 0.5 * h * k2a, p2 + 0.5 * h * k2b, k3a, k3b);
        f(p1 + h * k3a, p2 + h * k3b, k4a, k4b);
        p1 += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        p2 += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    return NlsFlowResult{JostState{p1, p2}, {}, PathGrid(pot.R, tpath.grid.n_steps)};
}

KdvFlowResult integrate_kdv_eps_system(const BoxPotential& pot, SpectralPoint zeta,
                                       const NoiseSpec& noise, const TelegraphPath& tpath) {
    require_eps_setup(noise, pot, tpath, "integrate_kdv_eps_system");
    const double h = noise.epsilon * noise.epsilon * tpath.grid.dx();
    const double eta = zeta.eta;
    double p = 1.0, px = eta;
    for (double nu : tpath.values) {
        const double U = pot.q + noise.sigma / noise.epsilon * nu;
        const double coef = eta * eta - U;  // phi'' = (eta^2 - U) phi
        auto f = [&](double a, double b, double& da, double& db) {
            da = b;
            db = coef * a;
        };
        double k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
        f(p, px, k1a, k1b);
        f(p + 0.5 * h * k1a, px + 0.5 * h * k1b, k2a, k2b);
        f(p + 0.5 * h * k2a, px + 0.5 * h * k2b, k3a, k3b);
        f(p + h * k3a, px + h * k3b, k4a, k4b);
        p += h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
        px += h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
    }
    return KdvFlowResult{SchrodingerState{p, px}, {}, PathGrid(pot.R, tpath.grid.n_steps)};
}

}  // namespace solstab
