#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fracident/cheb.hpp"

#include <cmath>
#include <random>

using namespace fracident;

namespace {
const double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("schedule tiles the range contiguously") {
    ChebSchedule sched = build_schedule(0.1, 0.9, kInf, 1e-6, 0.3);
    REQUIRE(!sched.intervals.empty());
    CHECK(sched.intervals.front().lo == 0.1);
    CHECK(sched.intervals.back().hi == 0.9);
    for (std::size_t k = 1; k < sched.intervals.size(); ++k)
        CHECK(sched.intervals[k].lo == sched.intervals[k - 1].hi);
    for (const auto& iv : sched.intervals) {
        CHECK(iv.order >= 1);
        CHECK(iv.nodes.size() == std::size_t(iv.order + 1));
        CHECK(iv.nodes.front() == iv.lo);
        CHECK(iv.nodes.back() == iv.hi);
    }
}

TEST_CASE("interval count grows as xi approaches 1/2") {
    int last = 0;
    for (double xi : {0.2, 0.3, 0.4, 0.45, 0.49}) {
        ChebSchedule sched = build_schedule(0.1, 0.9, kInf, 1e-4, xi);
        const int count = static_cast<int>(sched.intervals.size());
        CHECK(count >= last);
        last = count;
    }
    CHECK(last > static_cast<int>(build_schedule(0.1, 0.9, kInf, 1e-4, 0.2).intervals.size()));
}

TEST_CASE("halving eta adds O(1) nodes per interval") {
    const ChebSchedule coarse = build_schedule(0.1, 0.9, kInf, 1e-4, 0.3);
    const ChebSchedule fine = build_schedule(0.1, 0.9, kInf, 5e-5, 0.3);
    const int k = static_cast<int>(coarse.intervals.size());
    CHECK(fine.total_nodes() >= coarse.total_nodes());
    CHECK(fine.total_nodes() - coarse.total_nodes() <= 2 * k);
}

TEST_CASE("a short range yields a single interval") {
    ChebSchedule sched = build_schedule(0.45, 0.5, kInf, 1e-6, 0.3);
    CHECK(sched.intervals.size() == 1);
}

TEST_CASE("schedule rejects bad parameters") {
    CHECK_THROWS_AS(build_schedule(0.1, 0.9, kInf, 1e-6, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(0.1, 0.9, kInf, 1e-6, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(0.1, 0.9, kInf, -1.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(build_schedule(0.9, 0.1, kInf, 1e-6, 0.3), std::invalid_argument);
}

TEST_CASE("optimize_xi returns an interior minimizer") {
    const double xi_star = optimize_xi(0.1, 0.9, kInf, 1e-6);
    CHECK(xi_star > 0.1);
    CHECK(xi_star < 0.5);
    const int at_star = build_schedule(0.1, 0.9, kInf, 1e-6, xi_star).total_nodes();
    const int at_03 = build_schedule(0.1, 0.9, kInf, 1e-6, 0.3).total_nodes();
    CHECK(at_star <= at_03);
}

TEST_CASE("lagrange weights interpolate and sum to one") {
    ChebSchedule sched = build_schedule(0.1, 0.9, kInf, 1e-6, 0.3);
    // exact node hit: a unit vector at the node matching s (interval
    // endpoints belong to both neighbors, either one is fine)
    const ChebInterval& iv = sched.intervals[1];
    for (std::size_t j = 0; j < iv.nodes.size(); ++j) {
        const double s = iv.nodes[j];
        LagrangeWeights w = lagrange_eval(sched, s);
        const ChebInterval& hit = sched.intervals[w.interval];
        for (std::size_t m = 0; m < w.w.size(); ++m)
            CHECK(w.w[m] == (hit.nodes[m] == s ? 1.0 : 0.0));
    }
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> draw(0.1, 0.9);
    for (int t = 0; t < 100; ++t) {
        LagrangeWeights w = lagrange_eval(sched, draw(rng));
        double sum = 0.0;
        for (double v : w.w) sum += v;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("interpolation reproduces low-degree polynomials") {
    ChebSchedule sched = build_schedule(0.1, 0.9, kInf, 1e-8, 0.3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> draw(0.1, 0.9);
    for (int t = 0; t < 50; ++t) {
        const double s = draw(rng);
        LagrangeWeights w = lagrange_eval(sched, s);
        const ChebInterval& iv = sched.intervals[w.interval];
        REQUIRE(iv.order >= 3);
        double sq = 0.0, cu_deriv = 0.0;
        const LagrangeWeights dw = lagrange_deriv(sched, s);
        for (std::size_t m = 0; m < w.w.size(); ++m) {
            sq += w.w[m] * iv.nodes[m] * iv.nodes[m];
            cu_deriv += dw.w[m] * iv.nodes[m] * iv.nodes[m] * iv.nodes[m];
        }
        CHECK(sq == doctest::Approx(s * s).epsilon(1e-12));
        CHECK(cu_deriv == doctest::Approx(3.0 * s * s).epsilon(1e-10));
    }
}

TEST_CASE("derivative weights sum to zero and match finite differences") {
    ChebSchedule sched = build_schedule(0.1, 0.9, kInf, 1e-6, 0.35);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> draw(0.12, 0.88);
    for (int t = 0; t < 100; ++t) {
        const double s = draw(rng);
        LagrangeWeights dw = lagrange_deriv(sched, s);
        double sum = 0.0;
        for (double v : dw.w) sum += v;
        CHECK(std::abs(sum) <= 1e-11);
    }
    // centered FD of the weights themselves
    for (int t = 0; t < 20; ++t) {
        const double s = draw(rng);
        const double eps = 1e-7;
        LagrangeWeights lo = lagrange_eval(sched, s - eps);
        LagrangeWeights hi = lagrange_eval(sched, s + eps);
        LagrangeWeights dw = lagrange_deriv(sched, s);
        if (lo.interval != hi.interval || lo.interval != dw.interval) continue;
        for (std::size_t m = 0; m < dw.w.size(); ++m) {
            const double fd = (hi.w[m] - lo.w[m]) / (2.0 * eps);
            CHECK(dw.w[m] == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("node hit derivative uses the differentiation matrix row") {
    ChebSchedule sched = build_schedule(0.2, 0.8, kInf, 1e-6, 0.3);
    const ChebInterval& iv = sched.intervals[0];
    const double s = iv.nodes[1];
    const LagrangeWeights dw = lagrange_deriv(sched, s);
    // derivative of g(x) = x interpolant is 1
    double deriv = 0.0;
    for (std::size_t m = 0; m < dw.w.size(); ++m) deriv += dw.w[m] * iv.nodes[m];
    CHECK(deriv == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("chebyshev interpolation of exp decays geometrically") {
    ChebSchedule s4 = build_schedule_forced(0.3, 0.5, 0.3, 4);
    ChebSchedule s8 = build_schedule_forced(0.3, 0.5, 0.3, 8);
    auto max_err = [&](const ChebSchedule& sched) {
        double err = 0.0;
        for (int t = 0; t <= 50; ++t) {
            const double s = 0.3 + 0.2 * t / 50.0;
            const LagrangeWeights w = lagrange_eval(sched, s);
            const ChebInterval& iv = sched.intervals[w.interval];
            double val = 0.0;
            for (std::size_t m = 0; m < w.w.size(); ++m) val += w.w[m] * std::exp(iv.nodes[m]);
            err = std::max(err, std::abs(val - std::exp(s)));
        }
        return err;
    };
    const double e4 = max_err(s4), e8 = max_err(s8);
    CHECK(e8 < e4 / 16.0);
}

TEST_CASE("out of range queries are rejected") {
    ChebSchedule sched = build_schedule(0.2, 0.8, kInf, 1e-6, 0.3);
    CHECK_THROWS_AS(lagrange_eval(sched, 0.05), std::out_of_range);
    CHECK_THROWS_AS(lagrange_deriv(sched, 0.95), std::out_of_range);
}
