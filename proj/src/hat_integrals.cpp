#include "fracident/hat_integrals.hpp"

#include "fracident/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracident {

double power_integral(double e, double t0, double t1) {
    if (t0 < 0.0 || t1 < t0) throw std::invalid_argument("power_integral: bad interval");
    if (t0 == t1) return 0.0;
    const double eps = e + 1.0;
    if (t0 == 0.0) {
        if (eps <= 0.0) throw std::invalid_argument("power_integral: divergent at 0");
        return std::pow(t1, eps) / eps;
    }
    const double L = std::log(t1 / t0);
    const double scaled = eps == 0.0 ? L : std::expm1(eps * L) / eps;
    return std::pow(t0, eps) * scaled;
}

double hat_value(double x, double h) {
    const double t = 1.0 - std::abs(x) / h;
    return t > 0.0 ? t : 0.0;
}

double hat_overlap(double tau, double h) {
    tau = std::abs(tau);
    if (tau >= 2.0 * h) return 0.0;
    const double lo = std::max(-h, -h - tau);
    const double hi = std::min(h, h - tau);
    double pts[6] = {-h, 0.0, h, -h - tau, -tau, h - tau};
    std::sort(pts, pts + 6);
    double sum = 0.0;
    for (int k = 0; k < 5; ++k) {
        const double a = std::max(pts[k], lo);
        const double b = std::min(pts[k + 1], hi);
        if (b <= a) continue;
        sum += gauss_integrate(
            [&](double x) { return hat_value(x, h) * hat_value(x + tau, h); }, a, b, 2);
    }
    return sum;
}

} // namespace fracident
