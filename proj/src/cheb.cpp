#include "fracident/cheb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fracident {

namespace {

void require_range(double s_min, double s_max) {
    if (!(0.0 < s_min && s_min < s_max && s_max < 1.0))
        throw std::invalid_argument("schedule range must satisfy 0 < s_min < s_max < 1");
}

void require_xi(double xi) {
    if (!(xi > 0.1 && xi < 0.5))
        throw std::invalid_argument("xi must lie strictly inside (1/10, 1/2)");
}

double interval_length(double lo, double xi) {
    return (0.5 - xi) * std::min(1.0 - lo, 0.5 - ChebSchedule::eps_reg);
}

double interval_constant(double lo, double delta_eff) {
    const double g = std::min(1.0 - lo, 0.5 - ChebSchedule::eps_reg);
    if (delta_eff > 1.0) return 4.0 * (std::exp(-1.0) + std::pow(delta_eff, g + 1.0));
    return 4.0 * std::exp(-1.0);
}

std::vector<double> lobatto_nodes(double lo, double hi, int order) {
    std::vector<double> nodes(order + 1);
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    if (order == 0) {
        nodes[0] = mid;
        return nodes;
    }
    for (int j = 0; j <= order; ++j)
        nodes[j] = mid - half * std::cos(std::numbers::pi * j / order);
    nodes.front() = lo;
    nodes.back() = hi;
    return nodes;
}

/// Tiling of [s_min, s_max]; orders filled in by the caller.
std::vector<ChebInterval> tile(double s_min, double s_max, double xi) {
    std::vector<ChebInterval> out;
    double lo = s_min;
    for (;;) {
        const double len = interval_length(lo, xi);
        double hi = lo + len;
        ChebInterval iv;
        iv.lo = lo;
        if (hi >= s_max - 1e-14 * (s_max - s_min)) {
            iv.hi = s_max;
            out.push_back(iv);
            break;
        }
        iv.hi = hi;
        out.push_back(iv);
        lo = hi;
    }
    return out;
}

int order_from_tolerance(double lo, double xi, double eta, double delta_eff) {
    const double sigma = (1.0 / xi - 2.0) / 8.0;
    const double ck = interval_constant(lo, delta_eff);
    const double raw = std::log(eta / ck) / std::log(sigma);
    const int m = static_cast<int>(std::ceil(raw)) - 1;
    return std::max(1, m);
}

/// Barycentric weights of the Chebyshev-Lobatto points: (-1)^j, halved at
/// both endpoints.
std::vector<double> lobatto_bary_weights(int order) {
    std::vector<double> w(order + 1);
    for (int j = 0; j <= order; ++j) {
        double v = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == order) v *= 0.5;
        w[j] = v;
    }
    if (order == 0) w[0] = 1.0;
    return w;
}

} // namespace

int ChebSchedule::total_nodes() const {
    int n = 0;
    for (const auto& iv : intervals) n += iv.order + 1;
    return n;
}

int ChebSchedule::interval_of(double s) const {
    if (!contains(s)) throw std::out_of_range("s outside the schedule range");
    int lo = 0, hi = static_cast<int>(intervals.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (s <= intervals[mid].hi)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

ChebSchedule build_schedule(double s_min, double s_max, double delta, double eta, double xi,
                            double domain_diam) {
    require_range(s_min, s_max);
    require_xi(xi);
    if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
    ChebSchedule sched;
    sched.s_min = s_min;
    sched.s_max = s_max;
    sched.xi = xi;
    sched.eta = eta;
    sched.delta_eff = std::isfinite(delta) ? delta : domain_diam;
    sched.intervals = tile(s_min, s_max, xi);
    for (auto& iv : sched.intervals) {
        iv.order = order_from_tolerance(iv.lo, xi, eta, sched.delta_eff);
        iv.nodes = lobatto_nodes(iv.lo, iv.hi, iv.order);
    }
    return sched;
}

ChebSchedule build_schedule_forced(double s_min, double s_max, double xi, int forced_order,
                                   double domain_diam) {
    require_range(s_min, s_max);
    require_xi(xi);
    if (forced_order < 0) throw std::invalid_argument("forced order must be >= 0");
    ChebSchedule sched;
    sched.s_min = s_min;
    sched.s_max = s_max;
    sched.xi = xi;
    sched.eta = std::numeric_limits<double>::quiet_NaN();
    sched.delta_eff = domain_diam;
    sched.intervals = tile(s_min, s_max, xi);
    for (auto& iv : sched.intervals) {
        iv.order = forced_order;
        iv.nodes = lobatto_nodes(iv.lo, iv.hi, iv.order);
    }
    return sched;
}

double optimize_xi(double s_min, double s_max, double delta, double eta, int grid_points,
                   double domain_diam) {
    require_range(s_min, s_max);
    if (grid_points < 2) throw std::invalid_argument("grid must have at least 2 points");
    const double margin = 0.004;
    const double lo = 0.1 + margin, hi = 0.5 - margin;
    double best_xi = lo;
    int best_count = -1;
    for (int i = 0; i < grid_points; ++i) {
        const double xi = lo + (hi - lo) * i / (grid_points - 1);
        const int count = build_schedule(s_min, s_max, delta, eta, xi, domain_diam).total_nodes();
        if (best_count < 0 || count <= best_count) {
            best_count = count;
            best_xi = xi;
        }
    }
    return best_xi;
}

LagrangeWeights lagrange_eval(const ChebSchedule& schedule, double s) {
    LagrangeWeights out;
    out.interval = schedule.interval_of(s);
    const ChebInterval& iv = schedule.intervals[out.interval];
    const int m = iv.order;
    out.w.assign(m + 1, 0.0);
    if (m == 0) {
        out.w[0] = 1.0;
        return out;
    }
    for (int j = 0; j <= m; ++j) {
        if (s == iv.nodes[j]) {
            out.w[j] = 1.0;
            return out;
        }
    }
    const std::vector<double> bw = lobatto_bary_weights(m);
    double denom = 0.0;
    for (int j = 0; j <= m; ++j) {
        out.w[j] = bw[j] / (s - iv.nodes[j]);
        denom += out.w[j];
    }
    for (double& v : out.w) v /= denom;
    return out;
}

LagrangeWeights lagrange_deriv(const ChebSchedule& schedule, double s) {
    LagrangeWeights out;
    out.interval = schedule.interval_of(s);
    const ChebInterval& iv = schedule.intervals[out.interval];
    const int m = iv.order;
    out.w.assign(m + 1, 0.0);
    if (m == 0) return out;
    const std::vector<double> bw = lobatto_bary_weights(m);
    for (int i = 0; i <= m; ++i) {
        if (s != iv.nodes[i]) continue;
        // differentiation-matrix row at a node
        double diag = 0.0;
        for (int j = 0; j <= m; ++j) {
            if (j == i) continue;
            const double d = (bw[j] / bw[i]) / (iv.nodes[i] - iv.nodes[j]);
            out.w[j] = d;
            diag -= d;
        }
        out.w[i] = diag;
        return out;
    }
    const LagrangeWeights theta = lagrange_eval(schedule, s);
    double weighted = 0.0;
    for (int j = 0; j <= m; ++j) weighted += theta.w[j] / (s - iv.nodes[j]);
    for (int j = 0; j <= m; ++j)
        out.w[j] = theta.w[j] * (weighted - 1.0 / (s - iv.nodes[j]));
    return out;
}

void write_schedule_csv(const ChebSchedule& schedule, std::ostream& os) {
    os << "interval,lo,hi,order\n";
    for (std::size_t k = 0; k < schedule.intervals.size(); ++k) {
        const auto& iv = schedule.intervals[k];
        os << k << ',' << iv.lo << ',' << iv.hi << ',' << iv.order << '\n';
    }
}

} // namespace fracident
