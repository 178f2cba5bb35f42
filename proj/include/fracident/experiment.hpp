#pragma once

#include "fracident/control.hpp"
#include "fracident/opfamily.hpp"
#include "fracident/oracle.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fracident {

/// Flat configuration shared by all subcommands. Unset eta/xi resolve to the
/// mesh-tied default and the brute-force node-count minimizer.
struct ExperimentConfig {
    std::string problem = "II";          // "I" (infinite horizon) or "II"
    int n_elem = 1 << 10;
    double domain_a = -1.0;
    double domain_b = 1.0;
    double s_min = 0.05;
    double s_max = 0.95;
    std::optional<double> eta;           // empty = auto
    std::optional<double> xi;            // empty = auto
    double q0_s = 0.1;
    double q0_delta = 0.5;               // ignored for problem I (kept at inf)
    double s_star = 0.75;
    double delta_star = 0.9;             // inf for problem I
    double alpha = 5e-7;
    double beta = 1e-6;
    double sigma = 0.0;
    std::uint64_t seed = 1;
    std::string solver = "direct";       // "direct" | "cg"
    double solver_tol = 1e-10;
    double grad_tol = 1e-8;
    int max_iter = 200;
    std::string out;                     // CSV path; empty = "<subcommand>.csv"

    void validate() const;
    std::map<std::string, std::string> to_key_values() const;
    static ExperimentConfig from_key_values(const std::map<std::string, std::string>& kv);
    static ExperimentConfig from_file(const std::string& path);

    SolveMethod solve_method() const;
};

/// Mesh, operator family, data and regularizer resolved from a config.
struct IdentifySetup {
    Mesh1D mesh;
    std::shared_ptr<OperatorFamily> family;
    Eigen::VectorXd f_vec;
    Eigen::VectorXd u_d;
    Regularizer reg;
    ParamPoint q0;
    ParamPoint q_star;
    double eta_resolved = 0.0;
    double xi_resolved = 0.0;
};

IdentifySetup prepare_identify(const ExperimentConfig& cfg);

struct IdentifyOutcome {
    IdentifyRun run;
    double h = 0.0;
    int n_dofs = 0;
    double eta_resolved = 0.0;
    double xi_resolved = 0.0;
};

IdentifyOutcome run_identify(const ExperimentConfig& cfg);

struct ConvergenceRow {
    double h = 0.0;
    int n_dofs = 0;
    double error_hs = 0.0;           // interpolated operator
    double error_l2 = 0.0;
    double rate = 0.0;               // consecutive-pair Hs rate
    double error_hs_noninterp = 0.0;
    double error_l2_noninterp = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double fitted_rate_hs = 0.0;
    double fitted_rate_l2 = 0.0;
    double fitted_rate_hs_noninterp = 0.0;
    double max_interp_gap = 0.0;     // max relative Hs gap interp vs exact
};

ConvergenceResult run_convergence(const ExperimentConfig& cfg, const std::vector<int>& h_powers);

struct InterpStudyRow {
    int order = 0;
    double solution_error = 0.0;     // max over probe s of ||u_M - u_h||_Hs
    double deriv_error = 0.0;        // max over probe s of |j'_M - j'_ref|
};

struct NodeCountRow {
    double eta = 0.0;
    int total_nodes = 0;
};

struct InterpStudyResult {
    std::vector<InterpStudyRow> rows;
    std::vector<NodeCountRow> node_counts;   // eta sweep at the same xi
    double node_count_r2 = 0.0;              // correlation vs |log eta|
};

InterpStudyResult run_interp_study(const ExperimentConfig& cfg, const std::vector<int>& orders);

struct BenchRow {
    std::string phase;
    int n_dofs = 0;
    double seconds = 0.0;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    bool far_horizon_cheaper = true;
};

BenchResult run_bench(const ExperimentConfig& cfg, const std::vector<int>& h_powers);

struct GradcheckRow {
    ParamPoint q;
    Eigen::VectorXd grad;
    Eigen::VectorXd grad_fd;
    double rel_err = 0.0;
};

struct GradcheckResult {
    std::vector<GradcheckRow> rows;
    double max_rel_err = 0.0;
};

GradcheckResult run_gradcheck(const ExperimentConfig& cfg, int n_points = 10);

// CSV-writing CLI entry points; return the process exit code.
int cmd_identify(const ExperimentConfig& cfg);
int cmd_convergence(const ExperimentConfig& cfg, const std::vector<int>& h_powers);
int cmd_interp_study(const ExperimentConfig& cfg, const std::vector<int>& orders);
int cmd_bench(const ExperimentConfig& cfg, const std::vector<int>& h_powers);
int cmd_gradcheck(const ExperimentConfig& cfg, int n_points = 10);

} // namespace fracident
