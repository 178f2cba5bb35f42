#include "fracident/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

namespace {

using fracident::ExperimentConfig;

void add_config_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path,
                      std::string& eta_str, std::string& xi_str) {
    cmd->add_option("--config", config_path, "key=value config file ('#' comments)");
    cmd->add_option("--problem", cfg.problem, "test problem: I or II");
    cmd->add_option("--n-elem", cfg.n_elem, "number of mesh elements");
    cmd->add_option("--domain-a", cfg.domain_a, "left endpoint");
    cmd->add_option("--domain-b", cfg.domain_b, "right endpoint");
    cmd->add_option("--s-min", cfg.s_min, "interpolation range lower bound");
    cmd->add_option("--s-max", cfg.s_max, "interpolation range upper bound");
    cmd->add_option("--eta", eta_str, "interpolation tolerance or 'auto'");
    cmd->add_option("--xi", xi_str, "interval parameter in (0.1,0.5) or 'auto'");
    cmd->add_option("--q0-s", cfg.q0_s, "initial fractional order");
    cmd->add_option("--q0-delta", cfg.q0_delta, "initial horizon");
    cmd->add_option("--s-star", cfg.s_star, "generating fractional order");
    cmd->add_option("--delta-star", cfg.delta_star, "generating horizon");
    cmd->add_option("--alpha", cfg.alpha, "order barrier weight");
    cmd->add_option("--beta", cfg.beta, "horizon barrier weight");
    cmd->add_option("--sigma", cfg.sigma, "data noise standard deviation");
    cmd->add_option("--seed", cfg.seed, "noise RNG seed");
    cmd->add_option("--solver", cfg.solver, "linear solver: direct or cg");
    cmd->add_option("--solver-tol", cfg.solver_tol, "linear solver tolerance");
    cmd->add_option("--grad-tol", cfg.grad_tol, "optimizer gradient tolerance");
    cmd->add_option("--max-iter", cfg.max_iter, "optimizer iteration cap");
    cmd->add_option("--out", cfg.out, "output CSV path");
}

ExperimentConfig finalize_config(const CLI::App* cmd, ExperimentConfig cfg,
                                 const std::string& config_path, const std::string& eta_str,
                                 const std::string& xi_str) {
    if (!config_path.empty()) {
        ExperimentConfig from_file = ExperimentConfig::from_file(config_path);
        // CLI flags override file entries: re-apply only flags the user set
        ExperimentConfig merged = from_file;
        auto overridden = [&](const std::string& name) { return cmd->count(name) > 0; };
        if (overridden("--problem")) merged.problem = cfg.problem;
        if (overridden("--n-elem")) merged.n_elem = cfg.n_elem;
        if (overridden("--domain-a")) merged.domain_a = cfg.domain_a;
        if (overridden("--domain-b")) merged.domain_b = cfg.domain_b;
        if (overridden("--s-min")) merged.s_min = cfg.s_min;
        if (overridden("--s-max")) merged.s_max = cfg.s_max;
        if (overridden("--q0-s")) merged.q0_s = cfg.q0_s;
        if (overridden("--q0-delta")) merged.q0_delta = cfg.q0_delta;
        if (overridden("--s-star")) merged.s_star = cfg.s_star;
        if (overridden("--delta-star")) merged.delta_star = cfg.delta_star;
        if (overridden("--alpha")) merged.alpha = cfg.alpha;
        if (overridden("--beta")) merged.beta = cfg.beta;
        if (overridden("--sigma")) merged.sigma = cfg.sigma;
        if (overridden("--seed")) merged.seed = cfg.seed;
        if (overridden("--solver")) merged.solver = cfg.solver;
        if (overridden("--solver-tol")) merged.solver_tol = cfg.solver_tol;
        if (overridden("--grad-tol")) merged.grad_tol = cfg.grad_tol;
        if (overridden("--max-iter")) merged.max_iter = cfg.max_iter;
        if (overridden("--out")) merged.out = cfg.out;
        cfg = merged;
        if (!cmd->count("--eta")) cfg.eta = from_file.eta;
        if (!cmd->count("--xi")) cfg.xi = from_file.xi;
    }
    if (cmd->count("--eta"))
        cfg.eta = (eta_str == "auto") ? std::nullopt : std::optional<double>(std::stod(eta_str));
    if (cmd->count("--xi"))
        cfg.xi = (xi_str == "auto") ? std::nullopt : std::optional<double>(std::stod(xi_str));
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Identification of the fractional order and interaction horizon of a "
                 "truncated fractional Laplacian from observed data"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string config_path, eta_str = "auto", xi_str = "auto";
    std::vector<int> h_powers = {4, 5, 6, 7, 8, 9};
    std::vector<int> orders = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    int gradcheck_points = 10;

    CLI::App* identify = app.add_subcommand("identify", "BFGS parameter identification run");
    add_config_flags(identify, cfg, config_path, eta_str, xi_str);

    CLI::App* convergence = app.add_subcommand("convergence", "mesh refinement study");
    add_config_flags(convergence, cfg, config_path, eta_str, xi_str);
    convergence->add_option("--h-powers", h_powers, "mesh sizes h = 2^-j (list of j)");

    CLI::App* interp = app.add_subcommand("interp-study", "interpolation order study");
    add_config_flags(interp, cfg, config_path, eta_str, xi_str);
    interp->add_option("--orders", orders, "interpolation orders M to test");

    CLI::App* bench = app.add_subcommand("bench", "assembly timing study");
    add_config_flags(bench, cfg, config_path, eta_str, xi_str);
    bench->add_option("--h-powers", h_powers, "mesh sizes h = 2^-j (list of j)");

    CLI::App* gradcheck = app.add_subcommand("gradcheck", "adjoint gradient vs finite differences");
    add_config_flags(gradcheck, cfg, config_path, eta_str, xi_str);
    gradcheck->add_option("--points", gradcheck_points, "number of random parameter points");

    CLI11_PARSE(app, argc, argv);

    try {
        if (identify->parsed())
            return fracident::cmd_identify(
                finalize_config(identify, cfg, config_path, eta_str, xi_str));
        if (convergence->parsed())
            return fracident::cmd_convergence(
                finalize_config(convergence, cfg, config_path, eta_str, xi_str), h_powers);
        if (interp->parsed())
            return fracident::cmd_interp_study(
                finalize_config(interp, cfg, config_path, eta_str, xi_str), orders);
        if (bench->parsed())
            return fracident::cmd_bench(
                finalize_config(bench, cfg, config_path, eta_str, xi_str), h_powers);
        if (gradcheck->parsed())
            return fracident::cmd_gradcheck(
                finalize_config(gradcheck, cfg, config_path, eta_str, xi_str), gradcheck_points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
