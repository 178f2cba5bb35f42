#include "fracident/solve.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>

#include <cmath>
#include <stdexcept>

namespace fracident {

LinearSolver::LinearSolver(const OperatorFamily& family, SolveMethod method, double tol)
    : family_(&family), method_(method), tol_(tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("solver tolerance must be positive");
}

void LinearSolver::ensure_factorization(ParamPoint q) {
    if (slot_valid_ && slot_q_ == q) return;
    slot_profile_ = family_->evaluate_profile(q);
    slot_storage_ = slot_profile_->to_dense();
    slot_llt_ = std::make_unique<Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>>>(slot_storage_);
    if (slot_llt_->info() != Eigen::Success) {
        slot_valid_ = false;
        throw std::runtime_error(
            "linear solve: operator not positive definite, assembly or interpolation is broken");
    }
    slot_q_ = q;
    slot_valid_ = true;
    ++n_factorizations_;
}

SolveReport LinearSolver::solve_rhs(ParamPoint q, const Eigen::VectorXd& rhs) {
    SolveReport rep;
    rep.method = method_;
    const double rhs_norm = rhs.norm();
    if (method_ == SolveMethod::direct) {
        ensure_factorization(q);
        rep.solution = slot_llt_->solve(rhs);
        // one refinement pass if the factorization alone misses the tolerance
        for (int pass = 0; pass < 2; ++pass) {
            const Eigen::VectorXd resid = rhs - slot_profile_->apply(rep.solution);
            rep.residual_norm = rhs_norm > 0.0 ? resid.norm() / rhs_norm : resid.norm();
            if (rep.residual_norm <= tol_) break;
            if (pass == 1)
                throw std::runtime_error("direct solve failed to reach the residual tolerance");
            rep.solution += slot_llt_->solve(resid);
        }
        return rep;
    }
    const std::shared_ptr<const ToeplitzProfile> prof = family_->evaluate_profile(q);
    const Eigen::MatrixXd A = prof->to_dense();
    Eigen::ConjugateGradient<Eigen::MatrixXd, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol_);
    cg.setMaxIterations(20 * A.rows());
    cg.compute(A);
    rep.solution = cg.solve(rhs);
    rep.iterations = static_cast<int>(cg.iterations());
    const Eigen::VectorXd resid = rhs - prof->apply(rep.solution);
    rep.residual_norm = rhs_norm > 0.0 ? resid.norm() / rhs_norm : resid.norm();
    if (cg.info() != Eigen::Success && rep.residual_norm > tol_)
        throw std::runtime_error("conjugate gradient failed to converge");
    return rep;
}

SolveReport LinearSolver::solve_state(ParamPoint q, const Eigen::VectorXd& f) {
    return solve_rhs(q, f);
}

SolveReport LinearSolver::solve_adjoint(ParamPoint q, const Eigen::VectorXd& u_h,
                                        const Eigen::VectorXd& u_d) {
    const Eigen::VectorXd rhs = family_->mass() * (u_h - u_d);
    return solve_rhs(q, rhs);
}

} // namespace fracident
