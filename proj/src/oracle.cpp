#include "fracident/oracle.hpp"

#include "fracident/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <algorithm>
#include <random>
#include <stdexcept>

namespace fracident {

TestProblem TestProblem::problem_I(double s_star) {
    TestProblem p;
    p.id = Id::I;
    p.s_star = s_star;
    p.delta_star = std::numeric_limits<double>::infinity();
    p.scaling = true;
    return p;
}

TestProblem TestProblem::problem_II(double s_star, double delta_star) {
    if (!std::isfinite(delta_star))
        throw std::invalid_argument("problem II requires a finite horizon");
    TestProblem p;
    p.id = Id::II;
    p.s_star = s_star;
    p.delta_star = delta_star;
    p.scaling = false;
    return p;
}

namespace {

void require_1d(int n) {
    if (n != 1) throw std::invalid_argument("only dimension 1 is supported");
}

} // namespace

double scaling_constant(int n, double s) {
    require_1d(n);
    return std::pow(2.0, 2.0 * s) * s * std::tgamma(s + 0.5) /
           (std::sqrt(std::numbers::pi) * std::tgamma(1.0 - s));
}

double weak_scaling_constant(int n, double s) { return 0.5 * scaling_constant(n, s); }

double getoor_constant(int n, double s) {
    require_1d(n);
    return std::tgamma(0.5) /
           (std::pow(2.0, 2.0 * s) * std::tgamma(0.5 + s) * std::tgamma(1.0 + s));
}

std::function<double(double)> getoor_solution(int n, double s) {
    const double c = getoor_constant(n, s);
    return [c, s](double x) {
        const double t = 1.0 - x * x;
        return t > 0.0 ? c * std::pow(t, s) : 0.0;
    };
}

double brute_force_entry(const Mesh1D& mesh, int i, int j, ParamPoint q, double abs_tol) {
    if (mesh.n_elem > 16)
        throw std::invalid_argument("brute_force_entry: guarded to n_elem <= 16");
    if (i < 0 || j < 0 || i >= mesh.n_dofs() || j >= mesh.n_dofs())
        throw std::out_of_range("brute_force_entry: dof index");
    q.require_feasible();
    const double h = mesh.h;
    const double ci = mesh.dof_coord(i);
    const double cj = mesh.dof_coord(j);
    auto hat_i = [&](double x) { return std::max(0.0, 1.0 - std::abs(x - ci) / h); };
    auto hat_j = [&](double x) { return std::max(0.0, 1.0 - std::abs(x - cj) / h); };

    const double span = std::abs(ci - cj) + 2.0 * h;   // correlation constant beyond
    // inner correlation integral: the integrand is piecewise quadratic with
    // kinks only where a hat argument crosses a vertex, so splitting there
    // makes a 3-point Gauss rule exact per piece
    auto correlation = [&](double u) {
        double pts[12];
        int np = 0;
        for (double c : {ci, cj})
            for (double off : {-h, 0.0, h}) {
                pts[np++] = c + off;
                pts[np++] = c + off + u;
            }
        std::sort(pts, pts + np);
        double sum = 0.0;
        for (int k = 0; k + 1 < np; ++k) {
            if (pts[k + 1] <= pts[k]) continue;
            sum += gauss_integrate(
                [&](double x) {
                    return (hat_i(x) - hat_i(x - u)) * (hat_j(x) - hat_j(x - u));
                },
                pts[k], pts[k + 1], 3);
        }
        return sum;
    };

    const double s = q.s;
    auto integrand = [&](double u) { return std::pow(u, -1.0 - 2.0 * s) * correlation(u); };

    const double outer_hi = std::isfinite(q.delta) ? std::min(q.delta, span) : span;
    double value = 2.0 * adaptive_integrate(integrand, 0.0, outer_hi, 0.5 * abs_tol, 90, 10);

    if (!std::isfinite(q.delta) || q.delta > span) {
        // beyond span the correlation is the constant 2 (phi_i, phi_j)
        const double mij = adaptive_integrate(
            [&](double x) { return hat_i(x) * hat_j(x); }, std::min(ci, cj) - h,
            std::max(ci, cj) + h, abs_tol * 1e-3, 60, 10);
        double kernel_mass = std::pow(span, -2.0 * s) / (2.0 * s);
        if (std::isfinite(q.delta)) kernel_mass -= std::pow(q.delta, -2.0 * s) / (2.0 * s);
        value += 4.0 * mij * kernel_mass;
    }
    return value;
}

FieldVector add_noise(const FieldVector& u_d, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
    FieldVector out = u_d;
    if (sigma == 0.0) return out;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (Eigen::Index k = 0; k < out.coeffs.size(); ++k) out.coeffs[k] += noise(rng);
    return out;
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& cost,
                            const Eigen::VectorXd& q, double step,
                            const std::function<bool(const Eigen::VectorXd&)>& feasible) {
    auto ok = [&](const Eigen::VectorXd& p) { return !feasible || feasible(p); };
    Eigen::VectorXd g(q.size());
    for (Eigen::Index k = 0; k < q.size(); ++k) {
        double eps = step;
        Eigen::VectorXd lo = q, hi = q;
        hi[k] += eps;
        lo[k] -= eps;
        if (!ok(hi) || !ok(lo)) {
            eps = step / 10.0;
            hi = q;
            lo = q;
            hi[k] += eps;
            lo[k] -= eps;
            if (!ok(hi) || !ok(lo))
                throw std::invalid_argument("fd_gradient: stencil infeasible after shrink");
        }
        g[k] = (cost(hi) - cost(lo)) / (2.0 * eps);
    }
    return g;
}

} // namespace fracident
