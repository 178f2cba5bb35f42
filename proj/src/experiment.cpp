#include "fracident/experiment.hpp"

#include "fracident/csv.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fracident {

namespace {

constexpr const char* kVersion = "0.1.0";

double parse_double(const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str()) throw std::invalid_argument("config: bad number '" + v + "'");
    return x;
}

std::string opt_to_string(const std::optional<double>& v) {
    return v ? csv_number(*v) : std::string("auto");
}

std::optional<double> opt_from_string(const std::string& v) {
    if (v == "auto") return std::nullopt;
    return parse_double(v);
}

} // namespace

void ExperimentConfig::validate() const {
    if (problem != "I" && problem != "II")
        throw std::invalid_argument("config: problem must be I or II");
    if (!(domain_a < domain_b)) throw std::invalid_argument("config: empty domain");
    if (n_elem < 2) throw std::invalid_argument("config: n_elem must be >= 2");
    if (!(0.0 < s_min && s_min < s_max && s_max < 1.0))
        throw std::invalid_argument("config: bad s range");
    if (eta && !(*eta > 0.0)) throw std::invalid_argument("config: eta must be positive");
    if (xi && !(*xi > 0.1 && *xi < 0.5)) throw std::invalid_argument("config: xi outside (0.1,0.5)");
    if (solver != "direct" && solver != "cg")
        throw std::invalid_argument("config: solver must be direct or cg");
    if (sigma < 0.0) throw std::invalid_argument("config: sigma must be nonnegative");
    if (problem == "II" && !std::isfinite(delta_star))
        throw std::invalid_argument("config: problem II needs a finite delta_star");
}

SolveMethod ExperimentConfig::solve_method() const {
    return solver == "cg" ? SolveMethod::cg : SolveMethod::direct;
}

std::map<std::string, std::string> ExperimentConfig::to_key_values() const {
    std::map<std::string, std::string> kv;
    kv["problem"] = problem;
    kv["n_elem"] = std::to_string(n_elem);
    kv["domain_a"] = csv_number(domain_a);
    kv["domain_b"] = csv_number(domain_b);
    kv["s_min"] = csv_number(s_min);
    kv["s_max"] = csv_number(s_max);
    kv["eta"] = opt_to_string(eta);
    kv["xi"] = opt_to_string(xi);
    kv["q0_s"] = csv_number(q0_s);
    kv["q0_delta"] = csv_number(q0_delta);
    kv["s_star"] = csv_number(s_star);
    kv["delta_star"] = csv_number(delta_star);
    kv["alpha"] = csv_number(alpha);
    kv["beta"] = csv_number(beta);
    kv["sigma"] = csv_number(sigma);
    kv["seed"] = std::to_string(seed);
    kv["solver"] = solver;
    kv["solver_tol"] = csv_number(solver_tol);
    kv["grad_tol"] = csv_number(grad_tol);
    kv["max_iter"] = std::to_string(max_iter);
    kv["out"] = out;
    return kv;
}

ExperimentConfig ExperimentConfig::from_key_values(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    auto get = [&](const char* key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto v = get("problem")) cfg.problem = *v;
    if (auto v = get("n_elem")) cfg.n_elem = std::stoi(*v);
    if (auto v = get("domain_a")) cfg.domain_a = parse_double(*v);
    if (auto v = get("domain_b")) cfg.domain_b = parse_double(*v);
    if (auto v = get("s_min")) cfg.s_min = parse_double(*v);
    if (auto v = get("s_max")) cfg.s_max = parse_double(*v);
    if (auto v = get("eta")) cfg.eta = opt_from_string(*v);
    if (auto v = get("xi")) cfg.xi = opt_from_string(*v);
    if (auto v = get("q0_s")) cfg.q0_s = parse_double(*v);
    if (auto v = get("q0_delta")) cfg.q0_delta = parse_double(*v);
    if (auto v = get("s_star")) cfg.s_star = parse_double(*v);
    if (auto v = get("delta_star")) cfg.delta_star = parse_double(*v);
    if (auto v = get("alpha")) cfg.alpha = parse_double(*v);
    if (auto v = get("beta")) cfg.beta = parse_double(*v);
    if (auto v = get("sigma")) cfg.sigma = parse_double(*v);
    if (auto v = get("seed")) cfg.seed = std::stoull(*v);
    if (auto v = get("solver")) cfg.solver = *v;
    if (auto v = get("solver_tol")) cfg.solver_tol = parse_double(*v);
    if (auto v = get("grad_tol")) cfg.grad_tol = parse_double(*v);
    if (auto v = get("max_iter")) cfg.max_iter = std::stoi(*v);
    if (auto v = get("out")) cfg.out = *v;
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_key_values(parse_key_values(ss.str()));
}

namespace {

struct ResolvedSchedule {
    double eta = 0.0;
    double xi = 0.0;
};

ResolvedSchedule resolve_schedule(const ExperimentConfig& cfg, const Mesh1D& mesh) {
    ResolvedSchedule r;
    r.eta = cfg.eta ? *cfg.eta : default_eta(mesh, cfg.s_min);
    r.xi = cfg.xi ? *cfg.xi
                  : optimize_xi(cfg.s_min, cfg.s_max, mesh.diameter(), r.eta, 64,
                                mesh.diameter());
    return r;
}

std::shared_ptr<OperatorFamily> make_family(const ExperimentConfig& cfg, const Mesh1D& mesh,
                                            const ResolvedSchedule& rs, bool scaled) {
    ChebSchedule sched = build_schedule(cfg.s_min, cfg.s_max, mesh.diameter(), rs.eta, rs.xi,
                                        mesh.diameter());
    return std::make_shared<OperatorFamily>(mesh, std::move(sched), QuadratureConfig{}, scaled);
}

Eigen::VectorXd unit_load(const Mesh1D& mesh) {
    return load_vector(mesh, [](double) { return 1.0; });
}

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& fallback) {
    const std::string path = cfg.out.empty() ? fallback : cfg.out;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open output file " + path);
    return os;
}

void write_metadata(std::ostream& os, const ExperimentConfig& cfg,
                    const std::map<std::string, std::string>& extra = {}) {
    auto kv = cfg.to_key_values();
    kv["version"] = kVersion;
    for (const auto& [k, v] : extra) kv[k] = v;
    os << metadata_block(kv);
}

/// Least-squares slope of log(err) against log(h).
double fit_rate(const std::vector<double>& h, const std::vector<double>& err) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(h.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(std::max(err[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

IdentifySetup prepare_identify(const ExperimentConfig& cfg) {
    cfg.validate();
    IdentifySetup setup;
    setup.mesh = build_mesh(cfg.domain_a, cfg.domain_b, cfg.n_elem);
    const ResolvedSchedule rs = resolve_schedule(cfg, setup.mesh);
    setup.eta_resolved = rs.eta;
    setup.xi_resolved = rs.xi;
    setup.f_vec = unit_load(setup.mesh);

    const bool problem_one = cfg.problem == "I";
    setup.family = make_family(cfg, setup.mesh, rs, problem_one);
    if (problem_one) {
        setup.q_star = ParamPoint::infinite_horizon(cfg.s_star);
        setup.q0 = ParamPoint::infinite_horizon(cfg.q0_s);
        setup.reg = Regularizer{cfg.alpha, 0.0};
        setup.u_d = interpolate(setup.mesh, getoor_solution(1, cfg.s_star)).coeffs;
    } else {
        setup.q_star = ParamPoint(cfg.s_star, cfg.delta_star);
        setup.q0 = ParamPoint(cfg.q0_s, cfg.q0_delta);
        setup.reg = Regularizer{cfg.alpha, cfg.beta};
        LinearSolver solver(*setup.family, cfg.solve_method(), cfg.solver_tol);
        setup.u_d = solver.solve_state(setup.q_star, setup.f_vec).solution;
    }
    if (cfg.sigma > 0.0) {
        FieldVector noisy =
            add_noise(FieldVector(setup.u_d, setup.mesh), cfg.sigma, cfg.seed);
        setup.u_d = noisy.coeffs;
    }
    return setup;
}

IdentifyOutcome run_identify(const ExperimentConfig& cfg) {
    IdentifySetup setup = prepare_identify(cfg);
    CostEvaluator evaluator(*setup.family, setup.u_d, setup.reg, setup.f_vec, cfg.solve_method(),
                            cfg.solver_tol);
    BfgsOptions opts;
    opts.grad_tol = cfg.grad_tol;
    opts.max_iter = cfg.max_iter;
    IdentifyOutcome outcome;
    outcome.run = bfgs_identify(evaluator, setup.q0, opts);
    outcome.h = setup.mesh.h;
    outcome.n_dofs = setup.mesh.n_dofs();
    outcome.eta_resolved = setup.eta_resolved;
    outcome.xi_resolved = setup.xi_resolved;
    return outcome;
}

int cmd_identify(const ExperimentConfig& cfg) {
    IdentifyOutcome outcome = run_identify(cfg);
    std::ofstream os = open_output(cfg, "identify.csv");
    write_metadata(os, cfg,
                   {{"resolved_eta", csv_number(outcome.eta_resolved)},
                    {"resolved_xi", csv_number(outcome.xi_resolved)},
                    {"n_dofs", std::to_string(outcome.n_dofs)}});
    write_trajectory_csv(outcome.run, os);
    os << '\n';
    os << "h,N,s,delta,iterations,evaluations\n";
    os << csv_number(outcome.h) << ',' << outcome.n_dofs << ','
       << csv_number(outcome.run.final_q.s) << ',' << csv_number(outcome.run.final_q.delta)
       << ',' << outcome.run.n_iterations << ',' << outcome.run.n_functional_evals << '\n';
    std::cout << "identify: s=" << csv_number(outcome.run.final_q.s)
              << " delta=" << csv_number(outcome.run.final_q.delta)
              << " iterations=" << outcome.run.n_iterations
              << " evaluations=" << outcome.run.n_functional_evals
              << (outcome.run.converged ? " (converged)" : " (NOT converged)") << '\n';
    return outcome.run.converged ? 0 : 1;
}

namespace {

/// (f, u_ex) for the unit-forcing Getoor problem: c_{1,s} * B(1/2, s+1).
double getoor_energy(double s) {
    return getoor_constant(1, s) * std::sqrt(std::numbers::pi) * std::tgamma(s + 1.0) /
           std::tgamma(s + 1.5);
}

} // namespace

ConvergenceResult run_convergence(const ExperimentConfig& cfg, const std::vector<int>& h_powers) {
    cfg.validate();
    if (cfg.problem != "I")
        throw std::invalid_argument("convergence study: only the analytic problem I is wired up");
    const double s = cfg.s_star;
    auto u_ex = getoor_solution(1, s);
    const double c_scale = weak_scaling_constant(1, s);
    const double a_uu = getoor_energy(s);

    ConvergenceResult result;
    std::vector<double> hs, errs_hs, errs_l2, errs_hs_exact;
    for (int j : h_powers) {
        const double h_target = std::pow(2.0, -j);
        const int n_elem = static_cast<int>(std::llround((cfg.domain_b - cfg.domain_a) / h_target));
        ExperimentConfig local = cfg;
        local.n_elem = n_elem;
        const Mesh1D mesh = build_mesh(cfg.domain_a, cfg.domain_b, n_elem);
        const ResolvedSchedule rs = resolve_schedule(local, mesh);
        auto family = make_family(local, mesh, rs, true);
        const Eigen::VectorXd f = unit_load(mesh);

        LinearSolver solver(*family, cfg.solve_method(), cfg.solver_tol);
        const Eigen::VectorXd u_int = solver.solve_state(ParamPoint::infinite_horizon(s), f).solution;

        const Eigen::MatrixXd a_inf = profile_infinite(mesh, s).to_dense();
        Eigen::MatrixXd a_scaled = c_scale * a_inf;
        Eigen::LLT<Eigen::MatrixXd> llt(a_scaled);
        if (llt.info() != Eigen::Success) throw std::runtime_error("direct operator not SPD");
        const Eigen::VectorXd u_dir = llt.solve(f);

        auto hs_error = [&](const Eigen::VectorXd& u) {
            const double scaled = a_uu - 2.0 * f.dot(u) + c_scale * u.dot(a_inf * u);
            return std::sqrt(std::max(0.0, scaled / c_scale));
        };
        ConvergenceRow row;
        row.h = mesh.h;
        row.n_dofs = mesh.n_dofs();
        row.error_hs = hs_error(u_int);
        row.error_hs_noninterp = hs_error(u_dir);
        row.error_l2 = l2_error(FieldVector(u_int, mesh), u_ex, 14);
        row.error_l2_noninterp = l2_error(FieldVector(u_dir, mesh), u_ex, 14);
        if (!result.rows.empty()) {
            const ConvergenceRow& prev = result.rows.back();
            row.rate = std::log(prev.error_hs / row.error_hs) / std::log(prev.h / row.h);
        }
        result.rows.push_back(row);
        hs.push_back(row.h);
        errs_hs.push_back(row.error_hs);
        errs_l2.push_back(row.error_l2);
        errs_hs_exact.push_back(row.error_hs_noninterp);
        result.max_interp_gap =
            std::max(result.max_interp_gap,
                     std::abs(row.error_hs - row.error_hs_noninterp) / row.error_hs_noninterp);
    }
    result.fitted_rate_hs = fit_rate(hs, errs_hs);
    result.fitted_rate_l2 = fit_rate(hs, errs_l2);
    result.fitted_rate_hs_noninterp = fit_rate(hs, errs_hs_exact);
    return result;
}

int cmd_convergence(const ExperimentConfig& cfg, const std::vector<int>& h_powers) {
    ConvergenceResult result = run_convergence(cfg, h_powers);
    std::ofstream os = open_output(cfg, "convergence.csv");
    write_metadata(os, cfg,
                   {{"fitted_rate_hs", csv_number(result.fitted_rate_hs)},
                    {"fitted_rate_l2", csv_number(result.fitted_rate_l2)}});
    os << "h,N,error_Hs,error_L2,rate,error_Hs_noninterp,error_L2_noninterp\n";
    for (const auto& row : result.rows) {
        os << csv_number(row.h) << ',' << row.n_dofs << ',' << csv_number(row.error_hs) << ','
           << csv_number(row.error_l2) << ',' << csv_number(row.rate) << ','
           << csv_number(row.error_hs_noninterp) << ',' << csv_number(row.error_l2_noninterp)
           << '\n';
    }
    std::cout << "convergence: fitted Hs rate " << result.fitted_rate_hs << ", L2 rate "
              << result.fitted_rate_l2 << ", max interp gap " << result.max_interp_gap << '\n';
    const double l2_target = 0.5 + std::min(cfg.s_star, 0.5);
    const bool ok = result.fitted_rate_hs >= 0.45 && result.max_interp_gap < 0.05 &&
                    std::abs(result.fitted_rate_l2 - l2_target) <= 0.2;
    return ok ? 0 : 1;
}

InterpStudyResult run_interp_study(const ExperimentConfig& cfg, const std::vector<int>& orders) {
    cfg.validate();
    if (orders.empty()) throw std::invalid_argument("interp study: empty order list");
    const Mesh1D mesh = build_mesh(cfg.domain_a, cfg.domain_b, cfg.n_elem);
    const double xi = cfg.xi ? *cfg.xi : 0.3;
    const Eigen::VectorXd f = unit_load(mesh);
    const Eigen::VectorXd u_d = interpolate(mesh, [](double x) { return 1.0 - x * x; }).coeffs;
    const Regularizer reg{cfg.alpha, 0.0};

    // probe points strictly inside each interval (never a Chebyshev node)
    const ChebSchedule tiling = build_schedule_forced(cfg.s_min, cfg.s_max, xi, 1,
                                                      mesh.diameter());
    std::vector<double> probes;
    for (const auto& iv : tiling.intervals)
        probes.push_back(iv.lo + 0.6180339887498949 * (iv.hi - iv.lo));

    struct ProbeData {
        double s;
        ToeplitzProfile norm_profile;
        Eigen::VectorXd u_dir;
    };
    std::vector<ProbeData> probe_data;
    for (double sp : probes) {
        ProbeData pd;
        pd.s = sp;
        pd.norm_profile = profile_infinite(mesh, sp);
        Eigen::MatrixXd a_scaled = weak_scaling_constant(1, sp) * pd.norm_profile.to_dense();
        Eigen::LLT<Eigen::MatrixXd> llt(a_scaled);
        if (llt.info() != Eigen::Success) throw std::runtime_error("probe operator not SPD");
        pd.u_dir = llt.solve(f);
        probe_data.push_back(std::move(pd));
    }

    const int ref_order = *std::max_element(orders.begin(), orders.end()) + 6;
    OperatorFamily ref_family(mesh,
                              build_schedule_forced(cfg.s_min, cfg.s_max, xi, ref_order,
                                                    mesh.diameter()),
                              QuadratureConfig{}, true);
    CostEvaluator ref_eval(ref_family, u_d, reg, f, cfg.solve_method(), cfg.solver_tol);
    std::vector<double> ref_deriv;
    for (double sp : probes)
        ref_deriv.push_back(ref_eval.gradient(ParamPoint::infinite_horizon(sp))[0]);

    InterpStudyResult result;
    for (int m : orders) {
        OperatorFamily family(mesh,
                              build_schedule_forced(cfg.s_min, cfg.s_max, xi, m,
                                                    mesh.diameter()),
                              QuadratureConfig{}, true);
        CostEvaluator eval(family, u_d, reg, f, cfg.solve_method(), cfg.solver_tol);
        InterpStudyRow row;
        row.order = m;
        for (std::size_t k = 0; k < probes.size(); ++k) {
            const ParamPoint q = ParamPoint::infinite_horizon(probes[k]);
            const Eigen::VectorXd u_m = eval.solver().solve_state(q, f).solution;
            const Eigen::VectorXd diff = u_m - probe_data[k].u_dir;
            row.solution_error = std::max(
                row.solution_error, std::sqrt(std::max(0.0, probe_data[k].norm_profile.bilinear(
                                                                 diff, diff))));
            if (m >= 1) {
                const double jp = eval.gradient(q)[0];
                row.deriv_error = std::max(row.deriv_error, std::abs(jp - ref_deriv[k]));
            }
        }
        result.rows.push_back(row);
    }

    // node-count law across an eta sweep at the same xi
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    int n = 0;
    for (int p = 2; p <= 8; ++p) {
        const double eta = std::pow(10.0, -p);
        NodeCountRow row;
        row.eta = eta;
        row.total_nodes =
            build_schedule(cfg.s_min, cfg.s_max, mesh.diameter(), eta, xi, mesh.diameter())
                .total_nodes();
        result.node_counts.push_back(row);
        const double x = std::abs(std::log10(eta));
        const double y = row.total_nodes;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
        ++n;
    }
    const double cov = n * sxy - sx * sy;
    result.node_count_r2 = (cov * cov) / ((n * sxx - sx * sx) * (n * syy - sy * sy));
    return result;
}

int cmd_interp_study(const ExperimentConfig& cfg, const std::vector<int>& orders) {
    InterpStudyResult result = run_interp_study(cfg, orders);
    std::ofstream os = open_output(cfg, "interp_study.csv");
    write_metadata(os, cfg, {{"node_count_r2", csv_number(result.node_count_r2)}});
    os << "M,solution_error,deriv_error\n";
    for (const auto& row : result.rows)
        os << row.order << ',' << csv_number(row.solution_error) << ','
           << csv_number(row.deriv_error) << '\n';
    os << '\n';
    os << "eta,total_nodes\n";
    for (const auto& row : result.node_counts)
        os << csv_number(row.eta) << ',' << row.total_nodes << '\n';
    std::cout << "interp-study: node-count R^2 " << result.node_count_r2 << '\n';
    const bool ok = result.node_count_r2 >= 0.95 &&
                    result.rows.back().solution_error <= result.rows.front().solution_error;
    return ok ? 0 : 1;
}

BenchResult run_bench(const ExperimentConfig& cfg, const std::vector<int>& h_powers) {
    cfg.validate();
    BenchResult result;
    using clock = std::chrono::steady_clock;
    auto seconds_since = [](clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };
    for (int j : h_powers) {
        const int n_elem =
            static_cast<int>(std::llround((cfg.domain_b - cfg.domain_a) * std::pow(2.0, j)));
        const Mesh1D mesh = build_mesh(cfg.domain_a, cfg.domain_b, n_elem);
        ExperimentConfig local = cfg;
        local.n_elem = n_elem;
        const ResolvedSchedule rs = resolve_schedule(local, mesh);

        auto t0 = clock::now();
        auto family = make_family(local, mesh, rs, false);
        result.rows.push_back({"precompute", mesh.n_dofs(), seconds_since(t0)});

        auto time_correction = [&](double delta) {
            double best = std::numeric_limits<double>::infinity();
            for (int rep = 0; rep < 3; ++rep) {
                auto t = clock::now();
                ToeplitzProfile prof = profile_correction(mesh, 0.75, delta);
                best = std::min(best, seconds_since(t));
                (void)prof;
            }
            return best;
        };
        const double t_near = time_correction(0.5);
        const double t_far = time_correction(mesh.diameter() + 0.5);
        result.rows.push_back({"correction_delta_0.5", mesh.n_dofs(), t_near});
        result.rows.push_back({"correction_delta_far", mesh.n_dofs(), t_far});
        if (mesh.n_elem >= 1024 && !(t_far < 0.5 * t_near)) result.far_horizon_cheaper = false;
    }
    return result;
}

int cmd_bench(const ExperimentConfig& cfg, const std::vector<int>& h_powers) {
    BenchResult result = run_bench(cfg, h_powers);
    std::ofstream os = open_output(cfg, "bench.csv");
    write_metadata(os, cfg);
    os << "phase,N,seconds\n";
    for (const auto& row : result.rows)
        os << row.phase << ',' << row.n_dofs << ',' << csv_number(row.seconds) << '\n';
    std::cout << "bench: far-horizon correction cheaper: "
              << (result.far_horizon_cheaper ? "yes" : "NO") << '\n';
    return result.far_horizon_cheaper ? 0 : 1;
}

GradcheckResult run_gradcheck(const ExperimentConfig& cfg, int n_points) {
    ExperimentConfig local = cfg;
    local.problem = "II";
    local.sigma = 0.0;
    IdentifySetup setup = prepare_identify(local);
    CostEvaluator evaluator(*setup.family, setup.u_d, setup.reg, setup.f_vec,
                            local.solve_method(), local.solver_tol);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> s_draw(std::max(0.15, cfg.s_min + 0.05),
                                                  std::min(0.85, cfg.s_max - 0.05));
    std::uniform_real_distribution<double> d_draw(0.3, 1.8);

    auto cost_vec = [&](const Eigen::VectorXd& v) {
        return evaluator.cost(ParamPoint(v[0], v[1]));
    };
    auto feasible_vec = [&](const Eigen::VectorXd& v) {
        return evaluator.feasible(ParamPoint(v[0], v[1]));
    };

    GradcheckResult result;
    for (int k = 0; k < n_points; ++k) {
        GradcheckRow row;
        row.q = ParamPoint(s_draw(rng), d_draw(rng));
        row.grad = evaluator.gradient(row.q);
        Eigen::VectorXd v(2);
        v << row.q.s, row.q.delta;
        row.grad_fd = fd_gradient(cost_vec, v, 1e-5, feasible_vec);
        row.rel_err = (row.grad - row.grad_fd).norm() / std::max(row.grad_fd.norm(), 1e-300);
        result.max_rel_err = std::max(result.max_rel_err, row.rel_err);
        result.rows.push_back(std::move(row));
    }
    return result;
}

int cmd_gradcheck(const ExperimentConfig& cfg, int n_points) {
    GradcheckResult result = run_gradcheck(cfg, n_points);
    std::ofstream os = open_output(cfg, "gradcheck.csv");
    write_metadata(os, cfg, {{"max_rel_err", csv_number(result.max_rel_err)}});
    os << "s,delta,g_s,g_delta,g_fd_s,g_fd_delta,rel_err\n";
    for (const auto& row : result.rows)
        os << csv_number(row.q.s) << ',' << csv_number(row.q.delta) << ','
           << csv_number(row.grad[0]) << ',' << csv_number(row.grad[1]) << ','
           << csv_number(row.grad_fd[0]) << ',' << csv_number(row.grad_fd[1]) << ','
           << csv_number(row.rel_err) << '\n';
    std::cout << "gradcheck: max relative error " << result.max_rel_err << '\n';
    return result.max_rel_err <= 1e-4 ? 0 : 1;
}

} // namespace fracident
