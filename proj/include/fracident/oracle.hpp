#pragma once

#include "fracident/mesh.hpp"
#include "fracident/params.hpp"

#include <Eigen/Core>

#include <functional>

namespace fracident {

/// Manufactured test setups: I is the fractional Laplacian on the unit ball
/// (scaled operator, closed-form solution), II the truncated operator with a
/// finite horizon (reference is a discrete solve).
struct TestProblem {
    enum class Id { I, II };
    Id id = Id::I;
    double s_star = 0.5;
    double delta_star = std::numeric_limits<double>::infinity();
    bool scaling = true;   // multiply the operator by C_{1,s}

    static TestProblem problem_I(double s_star);
    static TestProblem problem_II(double s_star, double delta_star);
};

/// Fractional Laplacian constant C_{n,s} = 2^{2s} s Gamma(s+n/2) /
/// (pi^{n/2} Gamma(1-s)). Only n = 1 is supported here.
double scaling_constant(int n, double s);

/// Weak-form scale of the fractional Poisson problem: testing
/// (-Delta)^s u = f against v gives (C_{n,s}/2) a(u,v) = (f,v), the 1/2 from
/// symmetrizing the kernel integral.
double weak_scaling_constant(int n, double s);

/// Getoor constant c_{n,s} = Gamma(n/2) / (2^{2s} Gamma((n+2s)/2) Gamma(1+s)).
double getoor_constant(int n, double s);

/// x -> c_{1,s} (1 - x^2)_+^s, the solution of the unit-forcing fractional
/// Poisson problem on the unit ball.
std::function<double(double)> getoor_solution(int n, double s);

/// Independent evaluation of a(phi_i, phi_j; q) by adaptive quadrature on the
/// correlation form: a = 2 int_0^{min(delta, span)} K(u) k_ij(u) du (+ closed
/// tail for delta = inf), with k_ij itself integrated adaptively. Guarded to
/// small meshes.
double brute_force_entry(const Mesh1D& mesh, int i, int j, ParamPoint q,
                         double abs_tol = 1e-9);

/// Adds i.i.d. N(0, sigma^2) perturbations to the nodal values, from a seeded
/// deterministic generator.
FieldVector add_noise(const FieldVector& u_d, double sigma, std::uint64_t seed);

/// Componentwise central differences of a scalar cost. An infeasible stencil
/// point shrinks the step once (factor 10), then errors out.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& cost,
                            const Eigen::VectorXd& q, double step = 1e-5,
                            const std::function<bool(const Eigen::VectorXd&)>& feasible = {});

} // namespace fracident
