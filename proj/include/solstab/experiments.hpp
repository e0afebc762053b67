#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solstab/core.hpp"
#include "solstab/processes.hpp"

namespace solstab {

enum class EquationKind { nls, kdv };

/// One Monte Carlo campaign. Path i of stream s is seeded with
/// base_seed + i + s * Rng::kStreamStride; stream 0 carries the primary
/// Brownian noise, stream 1 the second complex-noise component, streams
/// 2, 3, ... the telegraph paths of successive epsilon rungs.
struct ExperimentConfig {
    EquationKind equation = EquationKind::nls;
    BoxPotential pot;
    SpectralPoint zeta;  ///< probe point for convergence runs
    NoiseSpec noise;
    int n_paths = 1000;
    PathGrid grid{1.0, 2048};
    std::uint64_t base_seed = 1;
    std::vector<double> sigma_ladder;    ///< strictly decreasing; may be empty
    std::vector<double> epsilon_ladder;  ///< strictly decreasing; may be empty
};

/// Per-path record of a validation or creation run.
struct PathRecord {
    std::uint64_t path_id = 0;
    double formula_d_eta = 0.0;
    double formula_d_xi = 0.0;
    double direct_d_eta = 0.0;  ///< (eta_direct - eta0)/sigma, NaN if unresolved
    double eta_direct = 0.0;
    bool resolved = false;
    bool created = false;
};

/// Remainder and velocity scaling data for one sigma rung.
struct SigmaScalingRow {
    double sigma = 0.0;
    double mean_abs_remainder = 0.0;  ///< mean |eta_direct - eta0 - sigma d_eta|
    double remainder_over_sigma2 = 0.0;
    double mean_abs_dxi = 0.0;  ///< from the unconstrained complex re-solve (NLS)
};

struct FirstOrderReport {
    std::vector<PathRecord> records;
    double eta0 = 0.0;
    double correlation = 0.0;
    double mean_formula = 0.0;
    double se_formula = 0.0;
    double variance_mc = 0.0;
    double variance_analytic = 0.0;
    double variance_ratio = 0.0;
    double ks_statistic = 0.0;
    double ks_critical = 0.0;
    // complex-noise runs only: cross statistics of (d_xi, d_eta)
    double xi_eta_correlation = 0.0;
    double xi_eta_variance_ratio = 0.0;
    std::vector<SigmaScalingRow> sigma_scaling;
    double dxi_slope = 0.0;        ///< log-log slope of mean |dxi| vs sigma
    bool dxi_below_floor = false;  ///< every rung at the solver floor: stronger than any slope
    bool pass = false;
    std::vector<std::string> notes;
};

struct CreationReport {
    std::vector<PathRecord> records;
    double created_fraction = 0.0;
    double binomial_se = 0.0;
    double ratio_mean = 0.0;  ///< eta_direct/(sigma d_eta) over well-separated created paths
    double ratio_se = 0.0;
    int n_created = 0;
    int n_ratio = 0;
    int n_sign_disagreements = 0;  ///< direct created XOR formula-positive
    bool pass = false;
    std::vector<std::string> notes;
};

struct ConvergenceRow {
    double epsilon = 0.0;
    double mean_eps_re = 0.0, mean_eps_im = 0.0;
    double se_eps = 0.0;
    double first_moment_gap = 0.0;  ///< |E[terminal_eps] - E[terminal_limit]|
    double se_first = 0.0;          ///< combined SE of the gap
    double second_moment_gap = 0.0;
    double se_second = 0.0;
};

struct ConvergenceReport {
    double mean_limit_re = 0.0, mean_limit_im = 0.0;
    double se_limit = 0.0;
    std::vector<ConvergenceRow> rows;
    bool trend_nonincreasing = false;  ///< up to 3 combined SE
    bool final_within_3se = false;
    bool pass = false;
    std::vector<std::string> notes;
};

/// Per-realization eigenvalue: root of the perturbed final condition along the
/// given path, bracketed around eta_hint (bracket width 10 sigma sqrt(R) B with
/// B = max|kernel| / |d_eta F|), bisected to 1e-10. One bracket widening is
/// attempted; nullopt means no root (soliton destroyed or not created).
/// sigma = 0 falls back to the closed-form condition.
std::optional<double> direct_eigenvalue_resolve(EquationKind equation, const BoxPotential& pot,
                                                const NoiseSpec& noise, const BrownianPath& path,
                                                double eta_hint);

/// Root search on (0, top] for the creation experiments at critical points.
std::optional<double> direct_creation_resolve(EquationKind equation, const BoxPotential& pot,
                                              const NoiseSpec& noise, const BrownianPath& path);

/// First-order formula vs direct re-solve along common paths; with
/// noise.kind == complex_white the run instead gathers the (d_xi, d_eta)
/// ensemble statistics of the two-noise law.
FirstOrderReport run_first_order_validation(const ExperimentConfig& cfg);

/// Soliton-creation statistics at a critical configuration (NLS quiescent,
/// KdV critical, or KdV q = 0).
CreationReport run_creation_probability(const ExperimentConfig& cfg);

/// Moments of the eps-scaled telegraph-driven flow against the limit SDE
/// across cfg.epsilon_ladder.
ConvergenceReport run_diffusion_convergence(const ExperimentConfig& cfg);

}  // namespace solstab
