#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <vector>

namespace fracident {

/// Uniform P1 mesh of an interval with homogeneous volume constraints: only
/// the strictly interior nodes carry degrees of freedom.
struct Mesh1D {
    double a = -1.0;
    double b = 1.0;
    int n_elem = 0;
    double h = 0.0;
    std::vector<double> nodes;         // n_elem + 1 sorted coordinates
    std::vector<int> interior_dofs;    // node indices 1 .. n_elem-1

    int n_dofs() const { return n_elem - 1; }
    double diameter() const { return b - a; }
    /// Coordinate of the node carrying interior dof i.
    double dof_coord(int i) const { return nodes[static_cast<std::size_t>(i) + 1]; }
};

Mesh1D build_mesh(double a, double b, int n_elem);

/// Coefficients of a P1 function on the interior dofs; implied zero extension
/// outside (a, b).
struct FieldVector {
    Eigen::VectorXd coeffs;
    Mesh1D mesh;

    FieldVector() = default;
    FieldVector(Eigen::VectorXd c, Mesh1D m) : coeffs(std::move(c)), mesh(std::move(m)) {}

    /// Point evaluation of the piecewise-linear function (zero outside the domain).
    double eval(double x) const;
};

/// Nodal interpolant of f on the interior dofs.
FieldVector interpolate(const Mesh1D& mesh, const std::function<double(double)>& f);

/// Tridiagonal P1 mass matrix on the interior dofs (h/6 * [1 4 1]).
Eigen::SparseMatrix<double> mass_matrix(const Mesh1D& mesh);

/// Load vector (f, phi_i) via per-element Gauss quadrature.
Eigen::VectorXd load_vector(const Mesh1D& mesh, const std::function<double(double)>& f,
                            int quad_order = 6);

/// L2(a,b) distance between a P1 function and a bounded reference function.
double l2_error(const FieldVector& u_h, const std::function<double(double)>& u_exact,
                int quad_order = 12);

/// sqrt(v^T A v) for a stiffness matrix assembled at (s, infinity). Rejects
/// quadratic form values below -1e-12 (relative) as broken assembly.
double energy_norm(const Eigen::VectorXd& v, const Eigen::MatrixXd& A_inf);

} // namespace fracident
