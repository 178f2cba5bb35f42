#include "fracident/mesh.hpp"

#include "fracident/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace fracident {

Mesh1D build_mesh(double a, double b, int n_elem) {
    if (!(a < b)) throw std::invalid_argument("build_mesh: requires a < b");
    if (n_elem < 2) throw std::invalid_argument("build_mesh: n_elem < 2 leaves no interior dof");
    Mesh1D mesh;
    mesh.a = a;
    mesh.b = b;
    mesh.n_elem = n_elem;
    mesh.h = (b - a) / n_elem;
    mesh.nodes.resize(n_elem + 1);
    for (int i = 0; i <= n_elem; ++i)
        mesh.nodes[i] = a + (b - a) * (static_cast<double>(i) / n_elem);
    mesh.nodes.front() = a;
    mesh.nodes.back() = b;
    mesh.interior_dofs.resize(n_elem - 1);
    for (int i = 1; i < n_elem; ++i) mesh.interior_dofs[i - 1] = i;
    return mesh;
}

double FieldVector::eval(double x) const {
    const Mesh1D& m = mesh;
    if (x <= m.a || x >= m.b) return 0.0;
    int e = static_cast<int>((x - m.a) / m.h);
    if (e >= m.n_elem) e = m.n_elem - 1;
    const double xl = m.nodes[e];
    const double t = (x - xl) / m.h;
    const double vl = (e >= 1 && e <= m.n_dofs()) ? coeffs[e - 1] : 0.0;
    const double vr = (e + 1 >= 1 && e + 1 <= m.n_dofs()) ? coeffs[e] : 0.0;
    return vl * (1.0 - t) + vr * t;
}

FieldVector interpolate(const Mesh1D& mesh, const std::function<double(double)>& f) {
    Eigen::VectorXd c(mesh.n_dofs());
    for (int i = 0; i < mesh.n_dofs(); ++i) c[i] = f(mesh.dof_coord(i));
    return FieldVector(std::move(c), mesh);
}

Eigen::SparseMatrix<double> mass_matrix(const Mesh1D& mesh) {
    const int n = mesh.n_dofs();
    const double h = mesh.h;
    Eigen::SparseMatrix<double> M(n, n);
    M.reserve(Eigen::VectorXi::Constant(n, 3));
    for (int i = 0; i < n; ++i) {
        if (i > 0) M.insert(i, i - 1) = h / 6.0;
        M.insert(i, i) = 2.0 * h / 3.0;
        if (i + 1 < n) M.insert(i, i + 1) = h / 6.0;
    }
    M.makeCompressed();
    return M;
}

Eigen::VectorXd load_vector(const Mesh1D& mesh, const std::function<double(double)>& f,
                            int quad_order) {
    const int n = mesh.n_dofs();
    Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
    for (int e = 0; e < mesh.n_elem; ++e) {
        const double xl = mesh.nodes[e];
        const double xr = mesh.nodes[e + 1];
        const int il = e - 1;     // dof index of the left node (may be out of range)
        const int ir = e;         // dof index of the right node
        if (il >= 0 && il < n) {
            F[il] += gauss_integrate(
                [&](double x) { return f(x) * (xr - x) / mesh.h; }, xl, xr, quad_order);
        }
        if (ir >= 0 && ir < n) {
            F[ir] += gauss_integrate(
                [&](double x) { return f(x) * (x - xl) / mesh.h; }, xl, xr, quad_order);
        }
    }
    return F;
}

double l2_error(const FieldVector& u_h, const std::function<double(double)>& u_exact,
                int quad_order) {
    const Mesh1D& m = u_h.mesh;
    double sum = 0.0;
    for (int e = 0; e < m.n_elem; ++e) {
        const double xl = m.nodes[e];
        const double xr = m.nodes[e + 1];
        const double vl = (e >= 1) ? u_h.coeffs[e - 1] : 0.0;
        const double vr = (e < m.n_dofs()) ? u_h.coeffs[e] : 0.0;
        sum += gauss_integrate(
            [&](double x) {
                const double t = (x - xl) / m.h;
                const double d = vl * (1.0 - t) + vr * t - u_exact(x);
                return d * d;
            },
            xl, xr, quad_order);
    }
    return std::sqrt(sum);
}

double energy_norm(const Eigen::VectorXd& v, const Eigen::MatrixXd& A_inf) {
    const double q = v.dot(A_inf * v);
    const double scale = std::max(1.0, v.squaredNorm() * A_inf.cwiseAbs().maxCoeff());
    if (q < -1e-12 * scale)
        throw std::runtime_error("energy_norm: negative quadratic form, assembly is broken");
    return std::sqrt(q > 0.0 ? q : 0.0);
}

} // namespace fracident
