#pragma once

#include "fracident/opfamily.hpp"

#include <Eigen/Cholesky>

#include <memory>

namespace fracident {

enum class SolveMethod { direct, cg };

struct SolveReport {
    Eigen::VectorXd solution;
    double residual_norm = 0.0;   // ||A u - b||_2 / ||b||_2
    SolveMethod method = SolveMethod::direct;
    int iterations = 0;           // 0 for direct solves
};

/// State and adjoint solves against the interpolated operator. One dense
/// Cholesky factorization per parameter point, shared between the state and
/// adjoint systems (the operator is symmetric).
class LinearSolver {
  public:
    explicit LinearSolver(const OperatorFamily& family, SolveMethod method = SolveMethod::direct,
                          double tol = 1e-10);

    /// A(q) u = f.
    SolveReport solve_state(ParamPoint q, const Eigen::VectorXd& f);

    /// A(q) z = M (u_h - u_d), reusing the state factorization at the same q.
    SolveReport solve_adjoint(ParamPoint q, const Eigen::VectorXd& u_h,
                              const Eigen::VectorXd& u_d);

    int factorization_count() const { return n_factorizations_; }
    double tolerance() const { return tol_; }
    SolveMethod method() const { return method_; }

  private:
    SolveReport solve_rhs(ParamPoint q, const Eigen::VectorXd& rhs);
    void ensure_factorization(ParamPoint q);

    const OperatorFamily* family_;
    SolveMethod method_;
    double tol_;

    bool slot_valid_ = false;
    ParamPoint slot_q_;
    std::shared_ptr<const ToeplitzProfile> slot_profile_;
    Eigen::MatrixXd slot_storage_;   // dense matrix, factorized in place
    std::unique_ptr<Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>>> slot_llt_;
    int n_factorizations_ = 0;
};

} // namespace fracident
