// solstab: soliton stability under random perturbations of box initial data.
//
// Subcommands:
//   spectrum  discrete eigenvalues and soliton counts for the deterministic box
//   perturb   first-order correction validation / creation-probability runs
//   converge  telegraph-driven flows against the limit SDE across an eps ladder
//
// Exit codes: 0 success, 2 scientific-check failure, 64 usage error,
// 65 infeasible configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "solstab/experiments.hpp"
#include "solstab/kdv_spectral.hpp"
#include "solstab/nls_spectral.hpp"
#include "solstab/report_json.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kOk = 0;
constexpr int kSciFail = 2;
constexpr int kUsage = 64;
constexpr int kInfeasible = 65;

using nlohmann::json;
using namespace solstab;

struct Options {
    std::string eq = "nls";
    double q = 1.0;
    double R = 1.0;
    double sigma = 0.01;
    double alpha = 0.5;
    double tol = 1e-10;
    double eta = 0.5;
    double xi = 0.0;
    std::vector<double> epsilon;
    std::vector<double> sigma_ladder;
    int paths = 1000;
    int steps = 4096;
    std::uint64_t seed = 1;
    std::string mode = "validate";
    std::string noise = "real";
    std::string out = "out";
    std::string config;
    std::string label;
    double contour_radius = 0.0;  // 0 = auto
    int contour_n = 4096;
};

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string run_stamp(const Options& opt) {
    if (!opt.label.empty()) return opt.label;
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", std::gmtime(&t));
    return buf;
}

json resolved_config(const std::string& command, const Options& opt, const std::string& stamp) {
    json cfg{{"eq", opt.eq},         {"q", opt.q},
             {"R", opt.R},           {"sigma", opt.sigma},
             {"alpha", opt.alpha},   {"tol", opt.tol},
             {"eta", opt.eta},       {"xi", opt.xi},
             {"epsilon", opt.epsilon},
             {"sigma-ladder", opt.sigma_ladder},
             {"paths", opt.paths},   {"steps", opt.steps},
             {"seed", opt.seed},     {"mode", opt.mode},
             {"noise", opt.noise},   {"label", stamp},
             {"contour-radius", opt.contour_radius},
             {"contour-n", opt.contour_n}};
    cfg["command"] = command;
    return cfg;
}

/// flags > config file > defaults: any option absent from the command line is
/// overridden by a matching key in the JSON config. Returns the parsed config.
json apply_config_file(const CLI::App& cmd, Options& opt) {
    if (opt.config.empty()) return json::object();
    std::ifstream in(opt.config);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + opt.config);
    json cfg = json::parse(in);

    auto absent = [&](const std::string& flag) {
        const CLI::Option* o = cmd.get_option_no_throw(flag);
        return o == nullptr || o->count() == 0;
    };
    if (cfg.contains("eq") && absent("--eq")) opt.eq = cfg["eq"];
    if (cfg.contains("q") && absent("--q")) opt.q = cfg["q"];
    if (cfg.contains("R") && absent("--R")) opt.R = cfg["R"];
    if (cfg.contains("sigma") && absent("--sigma")) opt.sigma = cfg["sigma"];
    if (cfg.contains("alpha") && absent("--alpha")) opt.alpha = cfg["alpha"];
    if (cfg.contains("tol") && absent("--tol")) opt.tol = cfg["tol"];
    if (cfg.contains("eta") && absent("--eta")) opt.eta = cfg["eta"];
    if (cfg.contains("xi") && absent("--xi")) opt.xi = cfg["xi"];
    if (cfg.contains("epsilon") && absent("--epsilon"))
        opt.epsilon = cfg["epsilon"].get<std::vector<double>>();
    if (cfg.contains("sigma-ladder") && absent("--sigma-ladder"))
        opt.sigma_ladder = cfg["sigma-ladder"].get<std::vector<double>>();
    if (cfg.contains("paths") && absent("--paths")) opt.paths = cfg["paths"];
    if (cfg.contains("steps") && absent("--steps")) opt.steps = cfg["steps"];
    if (cfg.contains("seed") && absent("--seed")) opt.seed = cfg["seed"];
    if (cfg.contains("mode") && absent("--mode")) opt.mode = cfg["mode"];
    if (cfg.contains("noise") && absent("--noise")) opt.noise = cfg["noise"];
    if (cfg.contains("label") && absent("--label")) opt.label = cfg["label"];
    if (cfg.contains("contour-radius") && absent("--contour-radius"))
        opt.contour_radius = cfg["contour-radius"];
    if (cfg.contains("contour-n") && absent("--contour-n")) opt.contour_n = cfg["contour-n"];
    return cfg;
}

struct RunFiles {
    std::filesystem::path csv;
    std::filesystem::path summary;
    std::filesystem::path manifest;
};

RunFiles output_paths(const std::string& command, const Options& opt, const std::string& stamp) {
    const std::filesystem::path dir(opt.out);
    std::filesystem::create_directories(dir);
    return RunFiles{dir / (command + "-" + stamp + ".csv"),
                    dir / (command + "-" + stamp + ".json"), dir / "manifest.json"};
}

void write_outputs(const std::string& command, const Options& opt, const std::string& stamp,
                   const RunFiles& files, const std::string& csv_body, const json& summary,
                   double duration_seconds) {
    json manifest{{"command", command},
                  {"version", kVersion},
                  {"seed", opt.seed},
                  {"config", resolved_config(command, opt, stamp)},
                  {"outputs", json::array({files.csv.filename().string(),
                                           files.summary.filename().string()})},
                  {"duration_seconds", duration_seconds},
                  {"created_utc", utc_now()}};
    {
        std::ofstream csv(files.csv, std::ios::binary);
        csv << csv_body;
    }
    {
        json doc{{"summary", summary}, {"manifest", manifest}};
        std::ofstream js(files.summary, std::ios::binary);
        js << doc.dump(2) << '\n';
    }
    {
        std::ofstream mf(files.manifest, std::ios::binary);
        mf << manifest.dump(2) << '\n';
    }
}

EquationKind parse_equation(const std::string& eq) {
    if (eq == "nls") return EquationKind::nls;
    if (eq == "kdv") return EquationKind::kdv;
    throw CLI::ValidationError("--eq", "must be nls or kdv");
}

ExperimentConfig experiment_config(const Options& opt) {
    ExperimentConfig cfg;
    cfg.equation = parse_equation(opt.eq);
    cfg.pot = BoxPotential{opt.q, opt.R};
    cfg.zeta = SpectralPoint{opt.xi, opt.eta};
    cfg.noise =
        NoiseSpec{opt.sigma, opt.alpha, 1.0,
                  opt.noise == "complex" ? NoiseKind::complex_white : NoiseKind::real_white};
    cfg.n_paths = opt.paths;
    cfg.grid = PathGrid(opt.R, opt.steps);
    cfg.base_seed = opt.seed;
    cfg.sigma_ladder = opt.sigma_ladder;
    cfg.epsilon_ladder = opt.epsilon;
    return cfg;
}

int cmd_spectrum(const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string stamp = run_stamp(opt);
    const RunFiles files = output_paths("spectrum", opt, stamp);
    const BoxPotential pot{opt.q, opt.R};

    std::string csv = "index,eta,residual\n";
    json summary{{"eq", opt.eq}, {"q", opt.q}, {"R", opt.R}, {"tol", opt.tol}};
    bool agreement = true;

    if (opt.eq == "nls") {
        const auto rep = nls_find_eigenvalues(pot, opt.tol);
        for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
            csv += std::to_string(i) + "," + full_precision(rep.eigenvalues[i]) + "," +
                   full_precision(rep.residuals[i]) + "\n";
        summary["eigenvalues"] = rep.eigenvalues;
        summary["residuals"] = rep.residuals;
        summary["count_bisection"] = rep.eigenvalues.size();
        summary["count_formula"] = rep.count_formula;
        summary["quiescent"] = rep.quiescent;
        const int interior_formula = rep.count_formula - (rep.quiescent ? 1 : 0);
        agreement = static_cast<int>(rep.eigenvalues.size()) == interior_formula;
        std::optional<int> winding = rep.count_argument_principle;
        if (opt.contour_radius > 0.0)
            winding = nls_count_argument_principle(pot, opt.contour_radius, opt.contour_n);
        if (winding) {
            summary["count_argument_principle"] = *winding;
            agreement = agreement && *winding == rep.count_formula;
        } else {
            summary["count_argument_principle"] = nullptr;
        }
    } else {
        const auto rep = kdv_find_eigenvalues(pot, opt.tol);
        for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
            csv += std::to_string(i) + "," + full_precision(rep.eigenvalues[i]) + "," +
                   full_precision(rep.residuals[i]) + "\n";
        summary["eigenvalues"] = rep.eigenvalues;
        summary["residuals"] = rep.residuals;
        summary["count_bisection"] = rep.eigenvalues.size();
        summary["count_formula"] = rep.count_formula;
        summary["quiescent"] = rep.quiescent;
        const int interior_formula = rep.count_formula - (rep.quiescent ? 1 : 0);
        agreement = static_cast<int>(rep.eigenvalues.size()) == interior_formula;
    }
    summary["count_agreement"] = agreement;

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs("spectrum", opt, stamp, files, csv, summary, secs);
    std::cout << (agreement ? "spectrum: counts agree\n" : "spectrum: COUNT MISMATCH\n");
    return agreement ? kOk : kSciFail;
}

int cmd_perturb(const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string stamp = run_stamp(opt);
    const RunFiles files = output_paths("perturb", opt, stamp);
    const ExperimentConfig cfg = experiment_config(opt);

    std::string csv;
    json summary;
    bool pass = false;

    if (opt.mode == "validate") {
        const FirstOrderReport rep = run_first_order_validation(cfg);
        csv = "path_id,formula_d_eta,formula_d_xi,direct_d_eta,eta_direct,resolved\n";
        for (const auto& r : rep.records)
            csv += std::to_string(r.path_id) + "," + full_precision(r.formula_d_eta) + "," +
                   full_precision(r.formula_d_xi) + "," + full_precision(r.direct_d_eta) + "," +
                   full_precision(r.eta_direct) + "," + (r.resolved ? "1" : "0") + "\n";
        summary = rep;
        pass = rep.pass;
    } else if (opt.mode == "creation") {
        const CreationReport rep = run_creation_probability(cfg);
        csv = "path_id,formula_d_eta,created,eta_direct\n";
        for (const auto& r : rep.records)
            csv += std::to_string(r.path_id) + "," + full_precision(r.formula_d_eta) + "," +
                   (r.created ? "1" : "0") + "," + full_precision(r.eta_direct) + "\n";
        summary = rep;
        pass = rep.pass;
    } else {
        throw CLI::ValidationError("--mode", "must be validate or creation");
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs("perturb", opt, stamp, files, csv, summary, secs);
    std::cout << "perturb(" << opt.mode << "): " << (pass ? "pass" : "FAIL") << "\n";
    return pass ? kOk : kSciFail;
}

int cmd_converge(const Options& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string stamp = run_stamp(opt);
    const RunFiles files = output_paths("converge", opt, stamp);
    ExperimentConfig cfg = experiment_config(opt);
    cfg.noise.kind = NoiseKind::telegraph;

    if (opt.steps < 50.0 * opt.R)
        throw std::domain_error("converge: the limit grid under-resolves [0, R]; raise --steps");

    const ConvergenceReport rep = run_diffusion_convergence(cfg);
    std::string csv =
        "epsilon,mean_eps_re,mean_eps_im,se_eps,first_moment_gap,se_first,second_moment_gap,"
        "se_second\n";
    for (const auto& row : rep.rows)
        csv += full_precision(row.epsilon) + "," + full_precision(row.mean_eps_re) + "," +
               full_precision(row.mean_eps_im) + "," + full_precision(row.se_eps) + "," +
               full_precision(row.first_moment_gap) + "," + full_precision(row.se_first) + "," +
               full_precision(row.second_moment_gap) + "," + full_precision(row.se_second) + "\n";

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_outputs("converge", opt, stamp, files, csv, json(rep), secs);
    std::cout << "converge: " << (rep.pass ? "pass" : "FAIL") << "\n";
    return rep.pass ? kOk : kSciFail;
}

void add_common_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--eq", opt.eq, "equation: nls or kdv");
    cmd->add_option("--q", opt.q, "box height");
    cmd->add_option("--R", opt.R, "box width");
    cmd->add_option("--sigma", opt.sigma, "perturbation amplitude");
    cmd->add_option("--alpha", opt.alpha, "integrated covariance of the driving noise");
    cmd->add_option("--epsilon", opt.epsilon, "epsilon ladder (comma separated)")->delimiter(',');
    cmd->add_option("--paths", opt.paths, "Monte Carlo paths");
    cmd->add_option("--steps", opt.steps, "path grid steps over [0, R]");
    cmd->add_option("--seed", opt.seed, "base seed; path i uses base_seed + i");
    cmd->add_option("--tol", opt.tol, "root tolerance");
    cmd->add_option("--out", opt.out, "output directory");
    cmd->add_option("--config", opt.config, "JSON config file (flags take precedence)");
    cmd->add_option("--label", opt.label, "output stamp override (default: UTC timestamp)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"soliton stability toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    Options opt;
    CLI::App* spectrum = app.add_subcommand("spectrum", "deterministic eigenvalues and counts");
    add_common_options(spectrum, opt);
    spectrum->add_option("--contour-radius", opt.contour_radius,
                         "argument-principle contour radius (0 = auto)");
    spectrum->add_option("--contour-n", opt.contour_n, "argument-principle contour points");

    CLI::App* perturb = app.add_subcommand("perturb", "first-order corrections vs direct re-solve");
    add_common_options(perturb, opt);
    perturb->add_option("--mode", opt.mode, "validate or creation");
    perturb->add_option("--noise", opt.noise, "real or complex (validate mode)");
    perturb
        ->add_option("--sigma-ladder", opt.sigma_ladder,
                     "extra sigmas for remainder/velocity scaling")
        ->delimiter(',');

    CLI::App* converge = app.add_subcommand("converge", "diffusion-approximation convergence");
    add_common_options(converge, opt);
    converge->add_option("--eta", opt.eta, "Im zeta of the probe point");
    converge->add_option("--xi", opt.xi, "Re zeta of the probe point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        CLI::App* active = spectrum->parsed() ? spectrum : perturb->parsed() ? perturb : converge;
        const json cfg_file = apply_config_file(*active, opt);
        if (opt.eq != "nls" && opt.eq != "kdv")
            throw CLI::ValidationError("--eq", "must be nls or kdv");
        // converge's paper-matching default noise amplitude is 0.3
        if (converge->parsed() && active->get_option("--sigma")->count() == 0 &&
            !cfg_file.contains("sigma"))
            opt.sigma = 0.3;

        if (spectrum->parsed()) return cmd_spectrum(opt);
        if (perturb->parsed()) return cmd_perturb(opt);
        return cmd_converge(opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "infeasible configuration: " << e.what() << "\n";
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kSciFail;
    }
}
