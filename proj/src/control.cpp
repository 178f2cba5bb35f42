#include "fracident/control.hpp"

#include "fracident/csv.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace fracident {

double Regularizer::value(ParamPoint q) const {
    double r = alpha / (q.s * (1.0 - q.s));
    if (delta_active()) {
        if (!q.has_finite_horizon())
            throw std::invalid_argument("delta barrier evaluated at infinite horizon");
        r += beta * std::exp(q.delta) / q.delta;
    }
    return r;
}

double Regularizer::ds(ParamPoint q) const {
    const double s = q.s;
    return alpha * (2.0 * s - 1.0) / (s * s * (1.0 - s) * (1.0 - s));
}

double Regularizer::ddelta(ParamPoint q) const {
    if (!delta_active()) return 0.0;
    if (!q.has_finite_horizon())
        throw std::invalid_argument("delta barrier derivative at infinite horizon");
    const double d = q.delta;
    return beta * std::exp(d) * (d - 1.0) / (d * d);
}

CostEvaluator::CostEvaluator(const OperatorFamily& family, Eigen::VectorXd u_d, Regularizer reg,
                             Eigen::VectorXd f_vec, SolveMethod method, double solver_tol)
    : family_(&family),
      u_d_(std::move(u_d)),
      reg_(reg),
      f_vec_(std::move(f_vec)),
      solver_(family, method, solver_tol) {
    if (u_d_.size() != family.mesh().n_dofs() || f_vec_.size() != family.mesh().n_dofs())
        throw std::invalid_argument("data/load vector size does not match the mesh");
}

bool CostEvaluator::feasible(ParamPoint q) const {
    if (!(q.s > 0.0 && q.s < 1.0)) return false;
    if (!family_->contains(q.s)) return false;
    if (std::isnan(q.delta) || q.delta <= 0.0) return false;
    return true;
}

const Eigen::VectorXd& CostEvaluator::state(ParamPoint q) {
    if (!state_q_ || !(*state_q_ == q)) {
        state_u_ = solver_.solve_state(q, f_vec_).solution;
        state_q_ = q;
    }
    return state_u_;
}

double CostEvaluator::cost(ParamPoint q) {
    if (!feasible(q)) throw std::invalid_argument("cost evaluated at an infeasible point");
    ++n_cost_evals_;
    const Eigen::VectorXd& u = state(q);
    const Eigen::VectorXd mismatch = u - u_d_;
    return 0.5 * mismatch.dot(family_->mass() * mismatch) + reg_.value(q);
}

Eigen::VectorXd CostEvaluator::gradient(ParamPoint q) {
    if (!feasible(q)) throw std::invalid_argument("gradient evaluated at an infeasible point");
    const bool with_delta = q.has_finite_horizon();
    if (!with_delta && reg_.delta_active())
        throw std::invalid_argument("delta-regularized problem needs a finite horizon");
    const Eigen::VectorXd& u = state(q);
    const Eigen::VectorXd z = solver_.solve_adjoint(q, u, u_d_).solution;
    Eigen::VectorXd g(with_delta ? 2 : 1);
    g[0] = reg_.ds(q) - family_->evaluate_ds_profile(q)->bilinear(u, z);
    if (with_delta)
        g[1] = reg_.ddelta(q) - family_->evaluate_ddelta_profile(q)->bilinear(u, z);
    return g;
}

namespace {

ParamPoint advance(ParamPoint q, const Eigen::VectorXd& step) {
    ParamPoint out = q;
    out.s += step[0];
    if (step.size() > 1) out.delta += step[1];
    return out;
}

} // namespace

IdentifyRun bfgs_identify(CostEvaluator& problem, ParamPoint q0, const BfgsOptions& opts) {
    if (!problem.feasible(q0)) throw std::invalid_argument("bfgs_identify: infeasible q0");
    const int dim = q0.has_finite_horizon() ? 2 : 1;

    IdentifyRun run;
    ParamPoint q = q0;
    double fq = problem.cost(q);
    Eigen::VectorXd g = problem.gradient(q);
    run.iterates.push_back({q, fq, g.norm()});

    Eigen::MatrixXd H = Eigen::MatrixXd::Identity(dim, dim) / std::max(1.0, g.norm());

    bool converged = g.norm() < opts.grad_tol;
    int it = 0;
    while (!converged && it < opts.max_iter) {
        Eigen::VectorXd p = -(H * g);
        double slope = g.dot(p);
        if (!(slope < 0.0)) {
            H = Eigen::MatrixXd::Identity(dim, dim) / std::max(1.0, g.norm());
            p = -(H * g);
            slope = g.dot(p);
        }

        double step = 1.0;
        double f_new = fq;
        ParamPoint q_new = q;
        bool accepted = false;
        for (int bt = 0; bt <= opts.max_backtracks; ++bt) {
            const ParamPoint trial = advance(q, step * p);
            if (problem.feasible(trial)) {
                const double f_trial = problem.cost(trial);
                if (std::isfinite(f_trial) && f_trial <= fq + opts.armijo_c1 * step * slope) {
                    q_new = trial;
                    f_new = f_trial;
                    accepted = true;
                    break;
                }
            }
            step *= opts.backtrack;
        }
        if (!accepted) break;   // line search exhausted; report non-convergence

        const Eigen::VectorXd g_new = problem.gradient(q_new);
        Eigen::VectorXd sv(dim), yv(dim);
        sv[0] = q_new.s - q.s;
        if (dim > 1) sv[1] = q_new.delta - q.delta;
        yv = g_new - g;
        const double sy = sv.dot(yv);
        if (sy > 1e-12 * sv.norm() * yv.norm()) {
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(dim, dim);
            const Eigen::MatrixXd V = I - rho * sv * yv.transpose();
            H = V * H * V.transpose() + rho * sv * sv.transpose();
        }

        q = q_new;
        fq = f_new;
        g = g_new;
        ++it;
        run.iterates.push_back({q, fq, g.norm()});
        converged = g.norm() < opts.grad_tol;
    }

    run.n_iterations = it;
    run.final_q = q;
    run.converged = converged;
    run.n_functional_evals = problem.n_cost_evals();
    return run;
}

void write_trajectory_csv(const IdentifyRun& run, std::ostream& os) {
    os << "iter,s,delta,cost,grad_norm,n_evals\n";
    for (std::size_t k = 0; k < run.iterates.size(); ++k) {
        const IterateRecord& rec = run.iterates[k];
        os << k << ',' << csv_number(rec.q.s) << ',' << csv_number(rec.q.delta) << ','
           << csv_number(rec.cost) << ',' << csv_number(rec.grad_norm) << ','
           << run.n_functional_evals << '\n';
    }
}

} // namespace fracident
