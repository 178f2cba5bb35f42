#pragma once

#include "fracident/mesh.hpp"
#include "fracident/params.hpp"

#include <Eigen/Core>

#include <iosfwd>

namespace fracident {

enum class MatrixKind {
    full,                      // a(.,.;s,delta), finite horizon
    infinite_horizon,          // a(.,.;s,inf)
    correction,                // c(.,.;s,delta) = a(s,delta) - a(s,inf)
    s_derivative_correction,   // d/ds c(.,.;s,delta)
    s_derivative,              // d/ds of the full interpolated operator
    delta_derivative,          // d/ddelta a(.,.;s,delta)
};

/// Dense symmetric matrix over the interior dofs, tagged with the parameter
/// point it was assembled at.
struct StiffnessMatrix {
    Eigen::MatrixXd entries;
    ParamPoint param;
    MatrixKind kind = MatrixKind::full;
};

/// a(phi_i, phi_j; s, inf): full-plane double integral of the fractional
/// kernel, computed as the domain-domain part plus the closed-form exterior
/// tail. Exact on identical element pairs, Gauss elsewhere.
StiffnessMatrix assemble_infinite(const Mesh1D& mesh, double s,
                                  const QuadratureConfig& quad = {});

/// Correction c(s,delta) = -(2 delta^{-2s}/s) M + 2 * far-field matrix; the
/// far field vanishes for delta >= diam(domain).
StiffnessMatrix assemble_correction(const Mesh1D& mesh, double s, double delta,
                                    const QuadratureConfig& quad = {});

/// d/ds of the correction: 2 delta^{-2s}(1+2s log delta)/s^2 * M minus the
/// log-weighted far-field matrix.
StiffnessMatrix assemble_s_derivative_correction(const Mesh1D& mesh, ParamPoint q,
                                                 const QuadratureConfig& quad = {});

/// Direct assembly over the interaction strip |x-y| <= delta. Cross-validation
/// path for the splitting a(s,delta) = a(s,inf) + c(s,delta).
StiffnessMatrix assemble_truncated_direct(const Mesh1D& mesh, ParamPoint q,
                                          const QuadratureConfig& quad = {});

/// Exact horizon derivative: u^T D v = 4 delta^{-1-2s} (u, v - vbar)_{L2}
/// with vbar(x) = (v(x-delta) + v(x+delta))/2, zero extension.
StiffnessMatrix assemble_delta_derivative(const Mesh1D& mesh, ParamPoint q);

/// Plain-text dense dump, row-major, one row per line.
void dump_matrix(const Eigen::MatrixXd& A, std::ostream& os);

// ---------------------------------------------------------------------------
// Compressed representation for uniform meshes. All bilinear forms here are
// translation invariant over the zero-extended basis, so every assembled
// matrix is symmetric Toeplitz: A_ij = col(|i-j|). This keeps a full family
// of cached node matrices in O(N) memory each; dense materialization happens
// once per linear solve.
// ---------------------------------------------------------------------------

struct ToeplitzProfile {
    Eigen::VectorXd col;   // first column, length = number of interior dofs

    int size() const { return static_cast<int>(col.size()); }
    Eigen::MatrixXd to_dense() const;
    /// u^T A v without materializing the dense matrix.
    double bilinear(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

ToeplitzProfile profile_infinite(const Mesh1D& mesh, double s);
ToeplitzProfile profile_correction(const Mesh1D& mesh, double s, double delta);
ToeplitzProfile profile_s_derivative_correction(const Mesh1D& mesh, ParamPoint q);
ToeplitzProfile profile_delta_derivative(const Mesh1D& mesh, ParamPoint q);

} // namespace fracident
