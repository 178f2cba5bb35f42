#pragma once

#include <iosfwd>
#include <vector>

namespace fracident {

/// One interpolation interval with its Chebyshev-Lobatto nodes.
struct ChebInterval {
    double lo = 0.0;
    double hi = 0.0;
    int order = 0;               // M_k; order+1 nodes
    std::vector<double> nodes;   // ascending, endpoints included for order >= 1
};

/// Subdivision of [s_min, s_max] with per-interval interpolation orders. The
/// interval lengths follow (1/2 - xi) * min(1 - lo, 1/2 - eps_reg); orders
/// satisfy the tolerance eta through the contraction factor
/// sigma = (1/xi - 2)/8.
struct ChebSchedule {
    double s_min = 0.0;
    double s_max = 0.0;
    double xi = 0.3;
    double eta = 0.0;
    double delta_eff = 2.0;      // horizon used in the interval constants
    std::vector<ChebInterval> intervals;

    static constexpr double eps_reg = 1e-3;

    int total_nodes() const;
    bool contains(double s) const { return s >= s_min && s <= s_max; }
    /// Index of the interval containing s; throws outside [s_min, s_max].
    int interval_of(double s) const;
};

/// Builds the schedule for tolerance eta. A non-finite delta falls back to
/// the domain diameter in the interval constants.
ChebSchedule build_schedule(double s_min, double s_max, double delta, double eta, double xi,
                            double domain_diam = 2.0);

/// Same subdivision but every interval forced to the given order (>= 0);
/// used by the interpolation-order studies.
ChebSchedule build_schedule_forced(double s_min, double s_max, double xi, int forced_order,
                                   double domain_diam = 2.0);

/// Brute-force minimizer of the total node count over a xi grid; ties break
/// toward larger xi.
double optimize_xi(double s_min, double s_max, double delta, double eta, int grid_points = 64,
                   double domain_diam = 2.0);

struct LagrangeWeights {
    int interval = 0;
    std::vector<double> w;   // one weight per node of the interval
};

/// Barycentric Lagrange basis values at s (sum to one).
LagrangeWeights lagrange_eval(const ChebSchedule& schedule, double s);

/// Derivatives of the Lagrange basis at s (sum to zero).
LagrangeWeights lagrange_deriv(const ChebSchedule& schedule, double s);

/// CSV rows (interval, lo, hi, order) with a header line.
void write_schedule_csv(const ChebSchedule& schedule, std::ostream& os);

} // namespace fracident
