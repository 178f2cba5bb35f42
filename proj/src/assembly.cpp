#include "fracident/assembly.hpp"

#include "fracident/hat_integrals.hpp"
#include "fracident/parallel.hpp"
#include "fracident/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace fracident {

namespace {

double kernel_pow(double r, double s) { return std::pow(r, -1.0 - 2.0 * s); }

void require_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fractional order must be in (0,1)");
}

void require_finite_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("horizon must be finite and positive here");
}

/// Linear restriction of a global hat to one element, stored as endpoint values.
struct LocalLinear {
    double vl = 0.0, vr = 0.0;
    double eval_local(double t) const { return vl + (vr - vl) * t; }
};

LocalLinear local_basis(int dof, int elem) {
    LocalLinear f;
    f.vl = (dof + 1 == elem) ? 1.0 : 0.0;
    f.vr = (dof + 1 == elem + 1) ? 1.0 : 0.0;
    return f;
}

/// Gauss integration of f over [lo, hi] split geometrically so that each
/// panel spans at most one octave; keeps Gauss accurate against the
/// power-law kernels used below. Requires lo > 0.
double octave_gauss(const std::function<double(double)>& f, double lo, double hi, int order) {
    double sum = 0.0;
    while (hi / lo > 2.0) {
        sum += gauss_integrate(f, lo, 2.0 * lo, order);
        lo *= 2.0;
    }
    if (hi > lo) sum += gauss_integrate(f, lo, hi, order);
    return sum;
}

// --------------------------------------------------------------------------
// Element-pair integrals of the difference form
//   (phi_I(x) - phi_I(y)) (phi_J(x) - phi_J(y)) |x-y|^{-1-2s}
// over E_p x E_q intersected with |x - y| <= cap.
// --------------------------------------------------------------------------

/// Identical pair: the differences are slope * (x - y) exactly, so the
/// integral reduces to 2 b_I b_J int_0^{min(h,cap)} u^{1-2s} (h-u) du.
double same_pair_integral(const Mesh1D& m, int p, int I, int J, double s, double cap) {
    const double h = m.h;
    const double c = std::min(h, cap);
    if (!(c > 0.0)) return 0.0;
    const LocalLinear fI = local_basis(I, p), fJ = local_basis(J, p);
    const double bI = (fI.vr - fI.vl) / h;
    const double bJ = (fJ.vr - fJ.vl) / h;
    if (bI == 0.0 || bJ == 0.0) return 0.0;
    const double w =
        2.0 * (h * power_integral(1.0 - 2.0 * s, 0.0, c) - power_integral(2.0 - 2.0 * s, 0.0, c));
    return bI * bJ * w;
}

/// Vertex-touching pair, x-element directly right of y-element (p = q+1).
/// In u = x - y the inner slice integral is cubic piecewise on [0,h] and
/// [h,2h]; the first piece vanishes to second order at u = 0, so its two
/// remaining cubic coefficients integrate exactly against the kernel.
double adjacent_pair_integral(const Mesh1D& m, int p, int I, int J, double s, double cap,
                              int order) {
    const double h = m.h;
    const double xp = m.nodes[p];          // shared vertex
    const double yq = xp - h;              // left endpoint of the y element
    const LocalLinear fI = local_basis(I, p), fJ = local_basis(J, p);
    const LocalLinear gI = local_basis(I, p - 1), gJ = local_basis(J, p - 1);

    auto P = [&](double x, double y) {
        const double tf = (x - xp) / h;
        const double tg = (y - yq) / h;
        return (fI.eval_local(tf) - gI.eval_local(tg)) * (fJ.eval_local(tf) - gJ.eval_local(tg));
    };
    auto inner = [&](double u) {
        const double lo = std::max(xp, yq + u);
        const double hi = std::min(xp + h, yq + h + u);
        if (hi <= lo) return 0.0;
        return gauss_integrate([&](double x) { return P(x, x - u); }, lo, hi, 2);
    };

    double total = 0.0;
    const double c1 = std::min(h, cap);
    if (c1 > 0.0) {
        const double u1 = 0.4 * h, u2 = 0.9 * h;
        const double k1 = inner(u1), k2 = inner(u2);
        const double det = u1 * u1 * u2 * u2 * (u2 - u1);
        const double c2 = (k1 * u2 * u2 * u2 - k2 * u1 * u1 * u1) / det;
        const double c3 = (k2 * u1 * u1 - k1 * u2 * u2) / det;
        total += c2 * power_integral(1.0 - 2.0 * s, 0.0, c1) +
                 c3 * power_integral(2.0 - 2.0 * s, 0.0, c1);
    }
    const double c2hi = std::min(2.0 * h, cap);
    if (c2hi > h) {
        total += octave_gauss([&](double u) { return kernel_pow(u, s) * inner(u); }, h, c2hi,
                              order);
    }
    return total;
}

/// Tensor Gauss over x in [xa,xb], y in [ylo(x), yhi(x)].
template <class YLo, class YHi, class F>
double tensor_gauss(double xa, double xb, YLo&& ylo, YHi&& yhi, F&& f, int order) {
    if (xb <= xa) return 0.0;
    const GaussRule& rule = gauss_rule(order);
    const double xm = 0.5 * (xa + xb), xr = 0.5 * (xb - xa);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double x = xm + xr * rule.nodes[i];
        const double ya = ylo(x), yb = yhi(x);
        if (yb <= ya) continue;
        const double ym = 0.5 * (ya + yb), yr = 0.5 * (yb - ya);
        double inner = 0.0;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j)
            inner += rule.weights[j] * f(x, ym + yr * rule.nodes[j]);
        sum += rule.weights[i] * yr * inner;
    }
    return xr * sum;
}

/// Disjoint pair, p >= q+2 (x strictly right of y). Truncation only cuts
/// along y = x - cap; the rectangle is split at the crossing abscissas.
double disjoint_pair_integral(const Mesh1D& m, int p, int q, int I, int J, double s, double cap,
                              int order) {
    const double h = m.h;
    const double xp = m.nodes[p], yq = m.nodes[q];
    const LocalLinear fI = local_basis(I, p), fJ = local_basis(J, p);
    const LocalLinear gI = local_basis(I, q), gJ = local_basis(J, q);
    auto f = [&](double x, double y) {
        const double tf = (x - xp) / h;
        const double tg = (y - yq) / h;
        return (fI.eval_local(tf) - gI.eval_local(tg)) *
               (fJ.eval_local(tf) - gJ.eval_local(tg)) * kernel_pow(x - y, s);
    };
    const double yhi = yq + h;
    if (!std::isfinite(cap)) {
        return tensor_gauss(
            xp, xp + h, [&](double) { return yq; }, [&](double) { return yhi; }, f, order);
    }
    // y >= x - cap
    double sum = 0.0;
    double cuts[4] = {xp, std::min(std::max(yq + cap, xp), xp + h),
                      std::min(std::max(yhi + cap, xp), xp + h), xp + h};
    for (int k = 0; k < 3; ++k) {
        const double xa = cuts[k], xb = cuts[k + 1];
        if (xb <= xa) continue;
        sum += tensor_gauss(
            xa, xb, [&](double x) { return std::max(yq, x - cap); },
            [&](double) { return yhi; }, f, order);
    }
    return sum;
}

double pair_integral(const Mesh1D& m, int p, int q, int I, int J, double s, double cap,
                     const QuadratureConfig& quad) {
    if (p == q) return same_pair_integral(m, p, I, J, s, cap);
    if (p == q + 1) return adjacent_pair_integral(m, p, I, J, s, cap, quad.singular_order);
    return disjoint_pair_integral(m, p, q, I, J, s, cap, quad.order_for_gap(p - q - 1));
}

/// Domain x domain part over the strip |x-y| <= cap, accumulated over ordered
/// element pairs p >= q (factor two off the element diagonal by symmetry).
Eigen::MatrixXd domain_pairs_matrix(const Mesh1D& m, double s, double cap,
                                    const QuadratureConfig& quad) {
    const int n = m.n_dofs();
    const int ne = m.n_elem;
    const int workers = std::max(1, thread_count());
    std::vector<Eigen::MatrixXd> acc(workers, Eigen::MatrixXd::Zero(n, n));
    std::atomic<int> ticket{0};
    parallel_for(0, ne, [&](std::int64_t p64) {
        const int p = static_cast<int>(p64);
        thread_local int slot = -1;
        if (slot < 0) slot = ticket.fetch_add(1) % workers;
        Eigen::MatrixXd& A = acc[slot];
        for (int q = p; q >= 0; --q) {
            if (p - q >= 2 && std::isfinite(cap) && (p - q - 1) * m.h >= cap) break;
            const double factor = (p == q) ? 1.0 : 2.0;
            int dofs[4] = {p - 1, p, q - 1, q};
            std::sort(dofs, dofs + 4);
            int uniq[4], nu = 0;
            for (int k = 0; k < 4; ++k) {
                const int d = dofs[k];
                if (d < 0 || d >= n) continue;
                if (nu > 0 && uniq[nu - 1] == d) continue;
                uniq[nu++] = d;
            }
            for (int ii = 0; ii < nu; ++ii)
                for (int jj = ii; jj < nu; ++jj) {
                    const double v = pair_integral(m, p, q, uniq[ii], uniq[jj], s, cap, quad);
                    A(uniq[ii], uniq[jj]) += factor * v;
                }
        }
    });
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (const auto& part : acc) A += part;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) A(i, j) = A(j, i);
    return A;
}

// --------------------------------------------------------------------------
// Exterior tail: 2 int_domain phi_I phi_J rho(x) dx with
//   rho(x) = ((x-a)^{-2s} + (b-x)^{-2s}) / (2s)              (cap = inf)
//   rho(x) = capped variant, each side active on dist < cap  (cap finite)
// Boundary elements integrate exactly (the basis product vanishes at the
// boundary, leaving pure monomials); interior elements use octave Gauss.
// --------------------------------------------------------------------------

double tail_side_element(double tl, double tr, double q2, double q1, double q0, double s,
                         double cap, int order) {
    // integral of (q2 t^2 + q1 t + q0) * w(t) dt over [tl, tr] cut at cap,
    // w(t) = (t^{-2s} - cap^{-2s}) / (2s), or t^{-2s}/(2s) for infinite cap.
    const double hi = std::isfinite(cap) ? std::min(tr, cap) : tr;
    if (hi <= tl) return 0.0;
    const double inv2s = 1.0 / (2.0 * s);
    if (tl == 0.0) {
        // boundary element: q0 vanishes identically there
        double v = q2 * power_integral(2.0 - 2.0 * s, 0.0, hi) +
                   q1 * power_integral(1.0 - 2.0 * s, 0.0, hi);
        if (std::isfinite(cap)) {
            const double c = std::pow(cap, -2.0 * s);
            v -= c * (q2 * hi * hi * hi / 3.0 + q1 * hi * hi / 2.0);
        }
        return v * inv2s;
    }
    auto w = [&](double t) {
        double x = std::pow(t, -2.0 * s);
        if (std::isfinite(cap)) x -= std::pow(cap, -2.0 * s);
        return (q2 * t * t + q1 * t + q0) * x * inv2s;
    };
    return octave_gauss(w, tl, hi, order);
}

Eigen::MatrixXd exterior_tail_matrix(const Mesh1D& m, double s, double cap,
                                     const QuadratureConfig& quad) {
    const int n = m.n_dofs();
    const double h = m.h;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    const int order = quad.singular_order;
    for (int e = 0; e < m.n_elem; ++e) {
        int dofs[2] = {e - 1, e};
        for (int ii = 0; ii < 2; ++ii)
            for (int jj = ii; jj < 2; ++jj) {
                const int I = dofs[ii], J = dofs[jj];
                if (I < 0 || I >= n || J < 0 || J >= n) continue;
                const LocalLinear fI = local_basis(I, e), fJ = local_basis(J, e);
                double v = 0.0;
                // left side, t = x - a
                {
                    const double tl = m.nodes[e] - m.a;
                    const double aI = (fI.vr - fI.vl) / h, aJ = (fJ.vr - fJ.vl) / h;
                    const double cI0 = fI.vl - aI * tl, cJ0 = fJ.vl - aJ * tl;
                    v += tail_side_element(tl, tl + h, aI * aJ, aI * cJ0 + aJ * cI0, cI0 * cJ0,
                                           s, cap, order);
                }
                // right side, t = b - x (endpoint roles swap)
                {
                    const double tl = m.b - m.nodes[e + 1];
                    const double aI = (fI.vl - fI.vr) / h, aJ = (fJ.vl - fJ.vr) / h;
                    const double cI0 = fI.vr - aI * tl, cJ0 = fJ.vr - aJ * tl;
                    v += tail_side_element(tl, tl + h, aI * aJ, aI * cJ0 + aJ * cI0, cI0 * cJ0,
                                           s, cap, order);
                }
                T(I, J) += 2.0 * v;
                if (I != J) T(J, I) += 2.0 * v;
            }
    }
    return T;
}

// --------------------------------------------------------------------------
// Far-field product form int int phi_I(x) phi_J(y) kern(x-y) 1_{|x-y|>delta}.
// Only the branch y < x - delta is integrated; the mirrored branch is added
// through the transposed accumulation.
// --------------------------------------------------------------------------

double farfield_branch(const Mesh1D& m, int p, int q, int I, int J, double delta,
                       const std::function<double(double)>& kern, int order) {
    const double h = m.h;
    const double xp = m.nodes[p], yq = m.nodes[q];
    const LocalLinear fI = local_basis(I, p), gJ = local_basis(J, q);
    auto f = [&](double x, double y) {
        const double tf = (x - xp) / h;
        const double tg = (y - yq) / h;
        return fI.eval_local(tf) * gJ.eval_local(tg) * kern(x - y);
    };
    const double xa0 = std::max(xp, yq + delta);
    const double xb0 = xp + h;
    if (xb0 <= xa0) return 0.0;
    const double cut = std::min(std::max(yq + h + delta, xa0), xb0);
    double sum = 0.0;
    sum += tensor_gauss(
        xa0, cut, [&](double) { return yq; }, [&](double x) { return std::min(yq + h, x - delta); },
        f, order);
    sum += tensor_gauss(
        cut, xb0, [&](double) { return yq; }, [&](double) { return yq + h; }, f, order);
    return sum;
}

Eigen::MatrixXd farfield_matrix(const Mesh1D& m, double delta,
                                const std::function<double(double)>& kern,
                                const QuadratureConfig& quad) {
    const int n = m.n_dofs();
    const int ne = m.n_elem;
    const int order = quad.regular_order_base + 2;
    Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, n);
    for (int p = 0; p < ne; ++p) {
        for (int q = 0; q <= p; ++q) {
            if ((p - q + 1) * m.h <= delta) continue;  // whole rectangle inside |x-y|<=delta
            for (int I : {p - 1, p}) {
                if (I < 0 || I >= n) continue;
                for (int J : {q - 1, q}) {
                    if (J < 0 || J >= n) continue;
                    const double v = farfield_branch(m, p, q, I, J, delta, kern, order);
                    if (v == 0.0) continue;
                    F(I, J) += v;
                    F(J, I) += v;  // mirrored branch of the symmetric kernel
                }
            }
        }
    }
    return F;
}

Eigen::MatrixXd dense_mass(const Mesh1D& m) { return Eigen::MatrixXd(mass_matrix(m)); }

double mass_coef_correction(double s, double delta) {
    return -2.0 * std::pow(delta, -2.0 * s) / s;
}

double mass_coef_s_derivative(double s, double delta) {
    return 2.0 * std::pow(delta, -2.0 * s) * (1.0 + 2.0 * s * std::log(delta)) / (s * s);
}

} // namespace

StiffnessMatrix assemble_infinite(const Mesh1D& mesh, double s, const QuadratureConfig& quad) {
    require_order(s);
    quad.validate();
    const double inf = std::numeric_limits<double>::infinity();
    StiffnessMatrix A;
    A.entries = domain_pairs_matrix(mesh, s, inf, quad) + exterior_tail_matrix(mesh, s, inf, quad);
    A.param = ParamPoint::infinite_horizon(s);
    A.kind = MatrixKind::infinite_horizon;
    return A;
}

StiffnessMatrix assemble_correction(const Mesh1D& mesh, double s, double delta,
                                    const QuadratureConfig& quad) {
    require_order(s);
    require_finite_delta(delta);
    quad.validate();
    StiffnessMatrix C;
    C.entries = mass_coef_correction(s, delta) * dense_mass(mesh);
    if (delta < mesh.diameter()) {
        auto kern = [s](double r) { return kernel_pow(r, s); };
        C.entries += 2.0 * farfield_matrix(mesh, delta, kern, quad);
    }
    C.param = ParamPoint(s, delta);
    C.kind = MatrixKind::correction;
    return C;
}

StiffnessMatrix assemble_s_derivative_correction(const Mesh1D& mesh, ParamPoint q,
                                                 const QuadratureConfig& quad) {
    require_order(q.s);
    require_finite_delta(q.delta);
    quad.validate();
    StiffnessMatrix C;
    C.entries = mass_coef_s_derivative(q.s, q.delta) * dense_mass(mesh);
    if (q.delta < mesh.diameter()) {
        const double s = q.s;
        auto kern = [s](double r) { return -2.0 * std::log(r) * kernel_pow(r, s); };
        C.entries += 2.0 * farfield_matrix(mesh, q.delta, kern, quad);
    }
    C.param = q;
    C.kind = MatrixKind::s_derivative_correction;
    return C;
}

StiffnessMatrix assemble_truncated_direct(const Mesh1D& mesh, ParamPoint q,
                                          const QuadratureConfig& quad) {
    require_order(q.s);
    require_finite_delta(q.delta);
    quad.validate();
    StiffnessMatrix A;
    A.entries = domain_pairs_matrix(mesh, q.s, q.delta, quad) +
                exterior_tail_matrix(mesh, q.s, q.delta, quad);
    A.param = q;
    A.kind = MatrixKind::full;
    return A;
}

StiffnessMatrix assemble_delta_derivative(const Mesh1D& mesh, ParamPoint q) {
    require_order(q.s);
    require_finite_delta(q.delta);
    const int n = mesh.n_dofs();
    const double h = mesh.h;
    const double coef = 4.0 * std::pow(q.delta, -1.0 - 2.0 * q.s);
    StiffnessMatrix D;
    D.entries = coef * dense_mass(mesh);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double c = (j - i) * h;
            const double shifted =
                0.5 * (hat_overlap(c - q.delta, h) + hat_overlap(c + q.delta, h));
            D.entries(i, j) -= coef * shifted;
        }
    D.param = q;
    D.kind = MatrixKind::delta_derivative;
    return D;
}

void dump_matrix(const Eigen::MatrixXd& A, std::ostream& os) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            if (j) os << ' ';
            os << A(i, j);
        }
        os << '\n';
    }
}

// --------------------------------------------------------------------------
// Toeplitz profiles. With hats phi_i(x) = phi(x - x_i) the lag-d column of
// the difference form is
//   t_d = 2 int_0^inf K(u) [2 rho(dh) - rho(dh-u) - rho(dh+u)] du,
// where rho is the hat overlap; the bracket is piecewise cubic with lattice
// breakpoints and vanishes to second order at u = 0.
// --------------------------------------------------------------------------

Eigen::MatrixXd ToeplitzProfile::to_dense() const {
    const int n = size();
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const double v = col[i - j];
            A(i, j) = v;
            A(j, i) = v;
        }
    }
    return A;
}

double ToeplitzProfile::bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
    const int n = size();
    double sum = col[0] * u.dot(v);
    for (int d = 1; d < n; ++d) {
        double cross = 0.0;
        for (int i = 0; i + d < n; ++i) cross += u[i] * v[i + d] + u[i + d] * v[i];
        sum += col[d] * cross;
    }
    return sum;
}

Eigen::VectorXd ToeplitzProfile::apply(const Eigen::VectorXd& x) const {
    const int n = size();
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += col[std::abs(i - j)] * x[j];
        y[i] = acc;
    }
    return y;
}

namespace {

std::vector<double> lattice_breakpoints(int d, double h) {
    double raw[5] = {std::abs(d - 2) * h, std::abs(d - 1) * h, double(d) * h, (d + 1) * h,
                     (d + 2) * h};
    std::vector<double> pts(raw, raw + 5);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](double a, double b) { return std::abs(a - b) < 1e-12 * h; }),
              pts.end());
    return pts;
}

/// int_0^{p1} K(u) (c2 u^2 + c3 u^3) du where the cubic is pinned from two
/// interior samples of g (exact: g vanishes to second order at 0).
double leading_piece_integral(const std::function<double(double)>& g, double p1, double s) {
    const double u1 = 0.4 * p1, u2 = 0.9 * p1;
    const double k1 = g(u1), k2 = g(u2);
    const double det = u1 * u1 * u2 * u2 * (u2 - u1);
    const double c2 = (k1 * u2 * u2 * u2 - k2 * u1 * u1 * u1) / det;
    const double c3 = (k2 * u1 * u1 - k1 * u2 * u2) / det;
    return c2 * power_integral(1.0 - 2.0 * s, 0.0, p1) +
           c3 * power_integral(2.0 - 2.0 * s, 0.0, p1);
}

constexpr int kProfileGaussOrder = 12;

} // namespace

ToeplitzProfile profile_infinite(const Mesh1D& mesh, double s) {
    require_order(s);
    const int n = mesh.n_dofs();
    const double h = mesh.h;
    ToeplitzProfile prof;
    prof.col.resize(n);
    parallel_for(0, n, [&](std::int64_t d64) {
        const int d = static_cast<int>(d64);
        const double rho_d = hat_overlap(d * h, h);
        auto bracket = [&](double u) {
            return 2.0 * rho_d - hat_overlap(d * h - u, h) - hat_overlap(d * h + u, h);
        };
        const std::vector<double> pts = lattice_breakpoints(d, h);
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            const double ul = pts[k], ur = pts[k + 1];
            if (ul == 0.0) {
                total += leading_piece_integral(bracket, ur, s);
            } else {
                total += octave_gauss(
                    [&](double u) { return kernel_pow(u, s) * bracket(u); }, ul, ur,
                    kProfileGaussOrder);
            }
        }
        if (rho_d != 0.0) {
            const double umax = (d + 2) * h;
            total += 2.0 * rho_d * std::pow(umax, -2.0 * s) / (2.0 * s);
        }
        prof.col[d] = 2.0 * total;
    });
    return prof;
}

namespace {

/// Far-field lag integral int_delta^{(d+2)h} kern(u) [rho(dh-u)+rho(dh+u)] du.
double farfield_lag(int d, double h, double delta, const std::function<double(double)>& kern) {
    const double umax = (d + 2) * h;
    if (delta >= umax) return 0.0;
    auto g = [&](double u) { return hat_overlap(d * h - u, h) + hat_overlap(d * h + u, h); };
    std::vector<double> pts = lattice_breakpoints(d, h);
    pts.push_back(delta);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double ul = std::max(pts[k], delta), ur = pts[k + 1];
        if (ur <= ul) continue;
        total += octave_gauss([&](double u) { return kern(u) * g(u); }, ul, ur,
                              kProfileGaussOrder);
    }
    return total;
}

} // namespace

ToeplitzProfile profile_correction(const Mesh1D& mesh, double s, double delta) {
    require_order(s);
    require_finite_delta(delta);
    const int n = mesh.n_dofs();
    const double h = mesh.h;
    const double mc = mass_coef_correction(s, delta);
    ToeplitzProfile prof;
    prof.col.resize(n);
    parallel_for(0, n, [&](std::int64_t d64) {
        const int d = static_cast<int>(d64);
        double v = mc * hat_overlap(d * h, h);
        if (delta < mesh.diameter()) {
            v += 2.0 * farfield_lag(d, h, delta, [&](double u) { return kernel_pow(u, s); });
        }
        prof.col[d] = v;
    });
    return prof;
}

ToeplitzProfile profile_s_derivative_correction(const Mesh1D& mesh, ParamPoint q) {
    require_order(q.s);
    require_finite_delta(q.delta);
    const int n = mesh.n_dofs();
    const double h = mesh.h;
    const double mc = mass_coef_s_derivative(q.s, q.delta);
    const double s = q.s;
    ToeplitzProfile prof;
    prof.col.resize(n);
    parallel_for(0, n, [&](std::int64_t d64) {
        const int d = static_cast<int>(d64);
        double v = mc * hat_overlap(d * h, h);
        if (q.delta < mesh.diameter()) {
            v += 2.0 * farfield_lag(d, h, q.delta, [&](double u) {
                     return -2.0 * std::log(u) * kernel_pow(u, s);
                 });
        }
        prof.col[d] = v;
    });
    return prof;
}

ToeplitzProfile profile_delta_derivative(const Mesh1D& mesh, ParamPoint q) {
    require_order(q.s);
    require_finite_delta(q.delta);
    const int n = mesh.n_dofs();
    const double h = mesh.h;
    const double coef = 4.0 * std::pow(q.delta, -1.0 - 2.0 * q.s);
    ToeplitzProfile prof;
    prof.col.resize(n);
    for (int d = 0; d < n; ++d) {
        const double shifted =
            0.5 * (hat_overlap(d * h - q.delta, h) + hat_overlap(d * h + q.delta, h));
        prof.col[d] = coef * (hat_overlap(d * h, h) - shifted);
    }
    return prof;
}

} // namespace fracident
