#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fracident {

/// Control point q = (s, delta). delta may be infinite (untruncated kernel).
struct ParamPoint {
    double s = 0.5;
    double delta = std::numeric_limits<double>::infinity();

    ParamPoint() = default;
    ParamPoint(double s_, double delta_) : s(s_), delta(delta_) {}

    static ParamPoint infinite_horizon(double s_) {
        return ParamPoint(s_, std::numeric_limits<double>::infinity());
    }

    bool has_finite_horizon() const { return std::isfinite(delta); }

    bool feasible() const {
        return s > 0.0 && s < 1.0 && delta > 0.0 && !std::isnan(delta);
    }

    void require_feasible() const {
        if (!feasible()) throw std::invalid_argument("parameter point outside admissible set");
    }
};

inline bool operator==(const ParamPoint& a, const ParamPoint& b) {
    return a.s == b.s && a.delta == b.delta;
}

/// Quadrature orders for the element-pair assembly loops.
struct QuadratureConfig {
    int singular_order = 10;      // Gauss points for touching element pairs
    int regular_order_base = 6;   // base order for disjoint pairs
    bool distance_decay = true;   // reduce order with pair distance
    int decay_floor = 3;

    void validate() const {
        if (singular_order < 2 || regular_order_base < 2 || decay_floor < 2)
            throw std::invalid_argument("quadrature orders must be >= 2");
    }

    int order_for_gap(int gap_elems) const {
        if (!distance_decay || gap_elems <= 1) return regular_order_base;
        int reduction = 0;
        int g = gap_elems;
        while (g > 1) { g /= 2; ++reduction; }
        int order = regular_order_base - reduction;
        return order < decay_floor ? decay_floor : order;
    }
};

} // namespace fracident
