#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracident/assembly.hpp"
#include "fracident/mesh.hpp"
#include "fracident/oracle.hpp"

#include <cmath>
#include <numbers>

using namespace fracident;

TEST_CASE("fractional Laplacian constant") {
    CHECK(scaling_constant(1, 0.5) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-13));
    CHECK(scaling_constant(1, 1e-6) < 1e-4);
    // frozen from a 30-digit evaluation of the Gamma formula
    const double reference[9] = {
        0.0903139828714556135, 0.166005158633505126, 0.230096381681632105,
        0.281958452999990379,  0.318309886183790672, 0.333549429912248114,
        0.31988109866734784,   0.267479690930975041, 0.164904938818302725};
    for (int i = 1; i <= 9; ++i)
        CHECK(scaling_constant(1, i / 10.0) ==
              doctest::Approx(reference[i - 1]).epsilon(1e-13));
    CHECK_THROWS_AS(scaling_constant(2, 0.5), std::invalid_argument);
}

TEST_CASE("Getoor solution and its constant") {
    CHECK(getoor_constant(1, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(getoor_constant(1, 0.25) == doctest::Approx(1.12837916709551257).epsilon(1e-13));
    CHECK(getoor_constant(1, 0.75) == doctest::Approx(0.752252778063675049).epsilon(1e-13));
    auto u = getoor_solution(1, 0.5);
    CHECK(u(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(u(1.0) == 0.0);
    CHECK(u(-1.0) == 0.0);
    CHECK(u(1.7) == 0.0);
    for (double x : {0.15, 0.4, 0.83}) CHECK(u(x) == doctest::Approx(u(-x)).epsilon(1e-15));
}

TEST_CASE("brute-force entries agree with assembly on a 4-element mesh") {
    Mesh1D m = build_mesh(-1.0, 1.0, 4);
    const double s = 0.5;
    StiffnessMatrix Ainf = assemble_infinite(m, s);
    StiffnessMatrix Atr = assemble_truncated_direct(m, ParamPoint(s, 0.6));
    for (int i = 0; i < m.n_dofs(); ++i)
        for (int j = i; j < m.n_dofs(); ++j) {
            const double binf = brute_force_entry(m, i, j, ParamPoint::infinite_horizon(s));
            const double btr = brute_force_entry(m, i, j, ParamPoint(s, 0.6));
            CHECK(Ainf.entries(i, j) == doctest::Approx(binf).epsilon(1e-6));
            CHECK(Atr.entries(i, j) == doctest::Approx(btr).epsilon(1e-6));
        }
}

TEST_CASE("brute-force entries are symmetric and horizon-monotone") {
    Mesh1D m = build_mesh(-1.0, 1.0, 4);
    const double s = 0.4;
    const double b01 = brute_force_entry(m, 0, 1, ParamPoint(s, 0.8));
    const double b10 = brute_force_entry(m, 1, 0, ParamPoint(s, 0.8));
    CHECK(b01 == doctest::Approx(b10).epsilon(1e-9));
    const double diag_small = brute_force_entry(m, 1, 1, ParamPoint(s, 0.4));
    const double diag_large = brute_force_entry(m, 1, 1, ParamPoint(s, 1.4));
    CHECK(diag_large >= diag_small);
    CHECK_THROWS_AS(brute_force_entry(build_mesh(-1.0, 1.0, 32), 0, 0,
                                      ParamPoint::infinite_horizon(0.5)),
                    std::invalid_argument);
}

TEST_CASE("noise injection is seeded and deterministic") {
    Mesh1D m = build_mesh(-1.0, 1.0, 16);
    Eigen::VectorXd base = Eigen::VectorXd::LinSpaced(m.n_dofs(), 0.0, 1.0);
    FieldVector u(base, m);
    FieldVector clean = add_noise(u, 0.0, 42);
    CHECK((clean.coeffs - base).norm() == 0.0);
    FieldVector a = add_noise(u, 0.1, 42);
    FieldVector b = add_noise(u, 0.1, 42);
    FieldVector c = add_noise(u, 0.1, 43);
    CHECK((a.coeffs - b.coeffs).norm() == 0.0);
    CHECK((a.coeffs - c.coeffs).norm() > 0.0);
    CHECK((a.coeffs - base).norm() > 0.0);
    CHECK_THROWS_AS(add_noise(u, -0.5, 1), std::invalid_argument);
}

TEST_CASE("central differences: exact on quadratics, O(step^2) otherwise") {
    auto quadratic = [](const Eigen::VectorXd& v) {
        return 3.0 * v[0] * v[0] - 2.0 * v[0] * v[1] + 0.5 * v[1] * v[1] + v[0];
    };
    Eigen::VectorXd q(2);
    q << 0.4, 0.9;
    Eigen::VectorXd g = fd_gradient(quadratic, q, 1e-5);
    CHECK(g[0] == doctest::Approx(6.0 * 0.4 - 2.0 * 0.9 + 1.0).epsilon(1e-10));
    CHECK(g[1] == doctest::Approx(-2.0 * 0.4 + 0.9).epsilon(1e-10));

    auto smooth = [](const Eigen::VectorXd& v) { return std::exp(2.0 * v[0]); };
    Eigen::VectorXd x(1);
    x << 0.3;
    const double exact = 2.0 * std::exp(0.6);
    const double e1 = std::abs(fd_gradient(smooth, x, 1e-3)[0] - exact);
    const double e2 = std::abs(fd_gradient(smooth, x, 5e-4)[0] - exact);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("infeasible stencil points shrink the step once, then error") {
    auto cost = [](const Eigen::VectorXd& v) { return v[0] * v[0]; };
    auto feasible = [](const Eigen::VectorXd& v) { return v[0] > 0.0 && v[0] < 1.0; };
    Eigen::VectorXd q(1);
    q << 5e-6;   // step 1e-5 crosses zero, the shrunk 1e-6 stays inside
    Eigen::VectorXd g = fd_gradient(cost, q, 1e-5, feasible);
    CHECK(g[0] == doctest::Approx(2.0 * 5e-6).epsilon(1e-8));
    Eigen::VectorXd q2(1);
    q2 << 5e-7;  // even the shrunk step crosses zero
    CHECK_THROWS_AS(fd_gradient(cost, q2, 1e-5, feasible), std::invalid_argument);
}

TEST_CASE("test problem descriptors") {
    TestProblem p1 = TestProblem::problem_I(0.5);
    CHECK(p1.scaling);
    CHECK(!std::isfinite(p1.delta_star));
    TestProblem p2 = TestProblem::problem_II(0.75, 0.9);
    CHECK(!p2.scaling);
    CHECK(p2.delta_star == 0.9);
    CHECK_THROWS_AS(TestProblem::problem_II(0.75, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}
