#pragma once

#include <functional>
#include <vector>

namespace fracident {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Cached Gauss-Legendre rule of the given point count (>= 1).
const GaussRule& gauss_rule(int order);

/// Integrates f over [a, b] with a fixed Gauss rule.
template <class F>
double gauss_integrate(F&& f, double a, double b, int order) {
    const GaussRule& rule = gauss_rule(order);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        sum += rule.weights[k] * f(mid + half * rule.nodes[k]);
    return half * sum;
}

/// Adaptive bisection quadrature. Error is estimated by comparing a single
/// Gauss panel against its two halves; intervals are split until the local
/// estimate is below the pro-rated tolerance. Throws if max_depth is reached
/// with the tolerance still unmet.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 60, int order = 10);

} // namespace fracident
