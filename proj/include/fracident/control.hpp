#pragma once

#include "fracident/opfamily.hpp"
#include "fracident/solve.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace fracident {

/// Barrier regularization R(s, delta) = alpha/(s(1-s)) + beta e^delta/delta.
/// The delta term is dropped for order-only problems (beta = 0).
struct Regularizer {
    double alpha = 0.0;
    double beta = 0.0;

    double value(ParamPoint q) const;
    double ds(ParamPoint q) const;
    double ddelta(ParamPoint q) const;
    bool delta_active() const { return beta != 0.0; }
};

/// One accepted optimizer iterate.
struct IterateRecord {
    ParamPoint q;
    double cost = 0.0;
    double grad_norm = 0.0;
};

struct IdentifyRun {
    std::vector<IterateRecord> iterates;   // q0 first, then accepted steps
    int n_functional_evals = 0;
    int n_iterations = 0;
    ParamPoint final_q;
    bool converged = false;
};

struct BfgsOptions {
    double grad_tol = 1e-8;
    int max_iter = 200;
    double armijo_c1 = 1e-4;
    double backtrack = 0.5;
    int max_backtracks = 40;
};

/// Reduced cost functional j(q) = 1/2 ||u(q) - u_d||_M^2 + R(q) and its
/// adjoint gradient. Optimizes over s only when the dataset was built with an
/// infinite horizon (delta stays pinned at infinity).
class CostEvaluator {
  public:
    CostEvaluator(const OperatorFamily& family, Eigen::VectorXd u_d, Regularizer reg,
                  Eigen::VectorXd f_vec, SolveMethod method = SolveMethod::direct,
                  double solver_tol = 1e-10);

    double cost(ParamPoint q);
    /// Gradient; size 1 (d/ds) for infinite-horizon q, else size 2 (d/ds, d/ddelta).
    Eigen::VectorXd gradient(ParamPoint q);

    /// Trial-point guard used by the optimizer: admissible set intersected
    /// with the interpolation range of the family.
    bool feasible(ParamPoint q) const;

    const OperatorFamily& family() const { return *family_; }
    int n_cost_evals() const { return n_cost_evals_; }
    LinearSolver& solver() { return solver_; }

  private:
    const Eigen::VectorXd& state(ParamPoint q);

    const OperatorFamily* family_;
    Eigen::VectorXd u_d_;
    Regularizer reg_;
    Eigen::VectorXd f_vec_;
    LinearSolver solver_;
    int n_cost_evals_ = 0;

    // last state solution, keyed by its parameter point
    std::optional<ParamPoint> state_q_;
    Eigen::VectorXd state_u_;
};

/// BFGS with Armijo backtracking; infeasible trial points are treated as
/// line-search failures. Non-convergence within max_iter returns
/// converged = false with the trajectory (no exception).
IdentifyRun bfgs_identify(CostEvaluator& problem, ParamPoint q0, const BfgsOptions& opts = {});

/// Trajectory CSV: iter, s, delta, cost, grad_norm, n_evals.
void write_trajectory_csv(const IdentifyRun& run, std::ostream& os);

} // namespace fracident
