#pragma once

// JSON bindings for the experiment reports (CLI serialization and the
// round-trip regression tests). Header-only on top of the vendored
// nlohmann/json single header.

#include <json.hpp>

#include "solstab/experiments.hpp"

namespace solstab {

inline void to_json(nlohmann::json& j, const PathRecord& r) {
    j = nlohmann::json{{"path_id", r.path_id},
                       {"formula_d_eta", r.formula_d_eta},
                       {"formula_d_xi", r.formula_d_xi},
                       {"direct_d_eta", r.direct_d_eta},
                       {"eta_direct", r.eta_direct},
                       {"resolved", r.resolved},
                       {"created", r.created}};
}

inline void from_json(const nlohmann::json& j, PathRecord& r) {
    j.at("path_id").get_to(r.path_id);
    j.at("formula_d_eta").get_to(r.formula_d_eta);
    j.at("formula_d_xi").get_to(r.formula_d_xi);
    j.at("direct_d_eta").get_to(r.direct_d_eta);
    j.at("eta_direct").get_to(r.eta_direct);
    j.at("resolved").get_to(r.resolved);
    j.at("created").get_to(r.created);
}

inline void to_json(nlohmann::json& j, const SigmaScalingRow& r) {
    j = nlohmann::json{{"sigma", r.sigma},
                       {"mean_abs_remainder", r.mean_abs_remainder},
                       {"remainder_over_sigma2", r.remainder_over_sigma2},
                       {"mean_abs_dxi", r.mean_abs_dxi}};
}

inline void from_json(const nlohmann::json& j, SigmaScalingRow& r) {
    j.at("sigma").get_to(r.sigma);
    j.at("mean_abs_remainder").get_to(r.mean_abs_remainder);
    j.at("remainder_over_sigma2").get_to(r.remainder_over_sigma2);
    j.at("mean_abs_dxi").get_to(r.mean_abs_dxi);
}

inline void to_json(nlohmann::json& j, const FirstOrderReport& r) {
    j = nlohmann::json{{"eta0", r.eta0},
                       {"correlation", r.correlation},
                       {"mean_formula", r.mean_formula},
                       {"se_formula", r.se_formula},
                       {"variance_mc", r.variance_mc},
                       {"variance_analytic", r.variance_analytic},
                       {"variance_ratio", r.variance_ratio},
                       {"ks_statistic", r.ks_statistic},
                       {"ks_critical", r.ks_critical},
                       {"xi_eta_correlation", r.xi_eta_correlation},
                       {"xi_eta_variance_ratio", r.xi_eta_variance_ratio},
                       {"sigma_scaling", r.sigma_scaling},
                       {"dxi_slope", r.dxi_slope},
                       {"dxi_below_floor", r.dxi_below_floor},
                       {"pass", r.pass},
                       {"notes", r.notes}};
}

inline void from_json(const nlohmann::json& j, FirstOrderReport& r) {
    j.at("eta0").get_to(r.eta0);
    j.at("correlation").get_to(r.correlation);
    j.at("mean_formula").get_to(r.mean_formula);
    j.at("se_formula").get_to(r.se_formula);
    j.at("variance_mc").get_to(r.variance_mc);
    j.at("variance_analytic").get_to(r.variance_analytic);
    j.at("variance_ratio").get_to(r.variance_ratio);
    j.at("ks_statistic").get_to(r.ks_statistic);
    j.at("ks_critical").get_to(r.ks_critical);
    j.at("xi_eta_correlation").get_to(r.xi_eta_correlation);
    j.at("xi_eta_variance_ratio").get_to(r.xi_eta_variance_ratio);
    j.at("sigma_scaling").get_to(r.sigma_scaling);
    j.at("dxi_slope").get_to(r.dxi_slope);
    j.at("dxi_below_floor").get_to(r.dxi_below_floor);
    j.at("pass").get_to(r.pass);
    j.at("notes").get_to(r.notes);
}

inline void to_json(nlohmann::json& j, const CreationReport& r) {
    j = nlohmann::json{{"created_fraction", r.created_fraction},
                       {"binomial_se", r.binomial_se},
                       {"ratio_mean", r.ratio_mean},
                       {"ratio_se", r.ratio_se},
                       {"n_created", r.n_created},
                       {"n_ratio", r.n_ratio},
                       {"n_sign_disagreements", r.n_sign_disagreements},
                       {"pass", r.pass},
                       {"notes", r.notes}};
}

inline void from_json(const nlohmann::json& j, CreationReport& r) {
    j.at("created_fraction").get_to(r.created_fraction);
    j.at("binomial_se").get_to(r.binomial_se);
    j.at("ratio_mean").get_to(r.ratio_mean);
    j.at("ratio_se").get_to(r.ratio_se);
    j.at("n_created").get_to(r.n_created);
    j.at("n_ratio").get_to(r.n_ratio);
    j.at("n_sign_disagreements").get_to(r.n_sign_disagreements);
    j.at("pass").get_to(r.pass);
    j.at("notes").get_to(r.notes);
}

inline void to_json(nlohmann::json& j, const ConvergenceRow& r) {
    j = nlohmann::json{{"epsilon", r.epsilon},
                       {"mean_eps_re", r.mean_eps_re},
                       {"mean_eps_im", r.mean_eps_im},
                       {"se_eps", r.se_eps},
                       {"first_moment_gap", r.first_moment_gap},
                       {"se_first", r.se_first},
                       {"second_moment_gap", r.second_moment_gap},
                       {"se_second", r.se_second}};
}

inline void from_json(const nlohmann::json& j, ConvergenceRow& r) {
    j.at("epsilon").get_to(r.epsilon);
    j.at("mean_eps_re").get_to(r.mean_eps_re);
    j.at("mean_eps_im").get_to(r.mean_eps_im);
    j.at("se_eps").get_to(r.se_eps);
    j.at("first_moment_gap").get_to(r.first_moment_gap);
    j.at("se_first").get_to(r.se_first);
    j.at("second_moment_gap").get_to(r.second_moment_gap);
    j.at("se_second").get_to(r.se_second);
}

inline void to_json(nlohmann::json& j, const ConvergenceReport& r) {
    j = nlohmann::json{{"mean_limit_re", r.mean_limit_re},
                       {"mean_limit_im", r.mean_limit_im},
                       {"se_limit", r.se_limit},
                       {"rows", r.rows},
                       {"trend_nonincreasing", r.trend_nonincreasing},
                       {"final_within_3se", r.final_within_3se},
                       {"pass", r.pass},
                       {"notes", r.notes}};
}

inline void from_json(const nlohmann::json& j, ConvergenceReport& r) {
    j.at("mean_limit_re").get_to(r.mean_limit_re);
    j.at("mean_limit_im").get_to(r.mean_limit_im);
    j.at("se_limit").get_to(r.se_limit);
    j.at("rows").get_to(r.rows);
    j.at("trend_nonincreasing").get_to(r.trend_nonincreasing);
    j.at("final_within_3se").get_to(r.final_within_3se);
    j.at("pass").get_to(r.pass);
    j.at("notes").get_to(r.notes);
}

}  // namespace solstab
