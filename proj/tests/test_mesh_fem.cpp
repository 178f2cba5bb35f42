#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracident/mesh.hpp"
#include "fracident/quadrature.hpp"

#include <cmath>
#include <random>

using namespace fracident;

TEST_CASE("build_mesh produces uniform nodes with interior dofs") {
    Mesh1D m = build_mesh(-1.0, 1.0, 4);
    REQUIRE(m.nodes.size() == 5);
    CHECK(m.nodes[0] == -1.0);
    CHECK(m.nodes[1] == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(m.nodes[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(m.nodes[4] == 1.0);
    CHECK(m.n_dofs() == 3);

    Mesh1D fine = build_mesh(-1.0, 1.0, 1 << 12);
    CHECK(fine.h == doctest::Approx(std::pow(2.0, -11.0)).epsilon(1e-15));
    CHECK(fine.n_dofs() == 4095);
    for (int i = 0; i + 1 <= fine.n_elem; ++i)
        CHECK(std::abs((fine.nodes[i + 1] - fine.nodes[i]) - fine.h) <= 1e-14 * fine.h);

    Mesh1D half = build_mesh(0.0, 1.0, 2);
    CHECK(half.n_dofs() == 1);
    CHECK(half.dof_coord(0) == doctest::Approx(0.5));
}

TEST_CASE("build_mesh rejects degenerate input") {
    CHECK_THROWS_AS(build_mesh(0.0, 1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(1.0, 0.0, 4), std::invalid_argument);
}

TEST_CASE("mass matrix is the tridiagonal P1 mass") {
    Mesh1D m = build_mesh(0.0, 1.0, 2);
    Eigen::MatrixXd M(mass_matrix(m));
    REQUIRE(M.rows() == 1);
    CHECK(M(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    Mesh1D m8 = build_mesh(-1.0, 1.0, 8);
    Eigen::MatrixXd M8(mass_matrix(m8));
    CHECK((M8 - M8.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(M8(0, 0) == doctest::Approx(2.0 * m8.h / 3.0));
    CHECK(M8(0, 1) == doctest::Approx(m8.h / 6.0));

    std::mt19937_64 rng(7);
    std::normal_distribution<double> draw;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd v(M8.rows());
        for (int i = 0; i < v.size(); ++i) v[i] = draw(rng);
        if (v.norm() == 0.0) continue;
        CHECK(v.dot(M8 * v) > 0.0);
    }
}

TEST_CASE("quadratic form of the all-ones vector matches piecewise integration") {
    Mesh1D m = build_mesh(-1.0, 1.0, 256);
    Eigen::MatrixXd M(mass_matrix(m));
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.n_dofs());
    // the P1 function is 1 on the interior, dropping linearly to 0 over the
    // two boundary elements: integral of v^2 is (b-a) - 2h + 2h/3
    const double exact = (m.b - m.a) - 2.0 * m.h + 2.0 * m.h / 3.0;
    CHECK(ones.dot(M * ones) == doctest::Approx(exact).epsilon(1e-13));
}

TEST_CASE("load vector: constant forcing gives h exactly") {
    Mesh1D m = build_mesh(-1.0, 1.0, 4);
    Eigen::VectorXd F = load_vector(m, [](double) { return 1.0; });
    for (int i = 0; i < F.size(); ++i) CHECK(F[i] == doctest::Approx(m.h).epsilon(1e-14));
}

TEST_CASE("load vector: odd forcing is antisymmetric on a symmetric mesh") {
    Mesh1D m = build_mesh(-1.0, 1.0, 8);
    Eigen::VectorXd F = load_vector(m, [](double x) { return x; });
    const int n = m.n_dofs();
    for (int i = 0; i < n; ++i) CHECK(F[i] == doctest::Approx(-F[n - 1 - i]).epsilon(1e-13));
}

TEST_CASE("load vector matches an adaptive quadrature oracle") {
    Mesh1D m = build_mesh(-1.0, 1.0, 16);
    auto f = [](double x) { return 1.0 - x * x; };
    Eigen::VectorXd F = load_vector(m, f);
    for (int i = 0; i < m.n_dofs(); ++i) {
        const double c = m.dof_coord(i);
        const double oracle = adaptive_integrate(
            [&](double x) {
                const double hat = std::max(0.0, 1.0 - std::abs(x - c) / m.h);
                return f(x) * hat;
            },
            c - m.h, c + m.h, 1e-14);
        CHECK(F[i] == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("l2_error basics") {
    Mesh1D m = build_mesh(-1.0, 1.0, 32);
    Eigen::VectorXd c(m.n_dofs());
    for (int i = 0; i < c.size(); ++i) c[i] = std::sin(m.dof_coord(i));
    FieldVector u(c, m);
    // the P1 function against itself
    CHECK(l2_error(u, [&](double x) { return u.eval(x); }) <= 1e-13);

    FieldVector zero(Eigen::VectorXd::Zero(m.n_dofs()), m);
    const double norm = l2_error(zero, [](double x) { return std::sqrt(1.0 - x * x); }, 16);
    CHECK(norm == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(2e-4));
}

TEST_CASE("l2_error triangle inequality spot check") {
    Mesh1D m = build_mesh(-1.0, 1.0, 16);
    Eigen::VectorXd a(m.n_dofs()), b(m.n_dofs());
    std::mt19937_64 rng(3);
    std::normal_distribution<double> draw;
    for (int i = 0; i < a.size(); ++i) {
        a[i] = draw(rng);
        b[i] = draw(rng);
    }
    FieldVector ua(a, m), ub(b, m), udiff(a - b, m);
    auto wfn = [](double x) { return std::cos(3.0 * x); };
    const double lhs = l2_error(ua, wfn);
    const double rhs = l2_error(ub, wfn) + l2_error(udiff, [](double) { return 0.0; });
    CHECK(lhs <= rhs + 1e-12);
}

TEST_CASE("field evaluation respects the zero extension") {
    Mesh1D m = build_mesh(-1.0, 1.0, 4);
    Eigen::VectorXd c(3);
    c << 1.0, 2.0, 3.0;
    FieldVector u(c, m);
    CHECK(u.eval(-1.0) == 0.0);
    CHECK(u.eval(1.5) == 0.0);
    CHECK(u.eval(-0.5) == doctest::Approx(1.0));
    CHECK(u.eval(0.25) == doctest::Approx(2.5));
}
