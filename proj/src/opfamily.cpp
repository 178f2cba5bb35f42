#include "fracident/opfamily.hpp"

#include "fracident/oracle.hpp"

#include <Eigen/Cholesky>

#include <bit>
#include <cmath>
#include <stdexcept>

namespace fracident {

OperatorFamily::OperatorFamily(Mesh1D mesh, ChebSchedule schedule, QuadratureConfig quad,
                               bool scale_by_fl_constant)
    : mesh_(std::move(mesh)),
      schedule_(std::move(schedule)),
      quad_(quad),
      scaled_(scale_by_fl_constant),
      mass_(mass_matrix(mesh_)) {
    quad_.validate();
    node_profiles_.resize(schedule_.intervals.size());
    for (std::size_t k = 0; k < schedule_.intervals.size(); ++k) {
        const ChebInterval& iv = schedule_.intervals[k];
        node_profiles_[k].reserve(iv.nodes.size());
        for (double sm : iv.nodes) {
            ToeplitzProfile prof = profile_infinite(mesh_, sm);
            if (scaled_) prof.col *= weak_scaling_constant(1, sm);
            node_profiles_[k].push_back(std::move(prof));
        }
    }
}

int OperatorFamily::node_count() const {
    int n = 0;
    for (const auto& iv : node_profiles_) n += static_cast<int>(iv.size());
    return n;
}

std::size_t OperatorFamily::CacheKeyHash::operator()(const CacheKey& k) const {
    std::size_t h = std::hash<std::uint64_t>()(k.s_bits);
    h ^= std::hash<std::uint64_t>()(k.d_bits) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<int>()(k.kind) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::shared_ptr<const ToeplitzProfile> OperatorFamily::cached_correction(CacheKind kind,
                                                                         ParamPoint q) const {
    const CacheKey key{static_cast<int>(kind), std::bit_cast<std::uint64_t>(q.s),
                       std::bit_cast<std::uint64_t>(q.delta)};
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            cache_lru_.splice(cache_lru_.begin(), cache_lru_, it->second.lru_pos);
            return it->second.profile;
        }
    }
    std::shared_ptr<const ToeplitzProfile> prof;
    switch (kind) {
        case CacheKind::correction:
            prof = std::make_shared<ToeplitzProfile>(profile_correction(mesh_, q.s, q.delta));
            break;
        case CacheKind::s_derivative:
            prof = std::make_shared<ToeplitzProfile>(profile_s_derivative_correction(mesh_, q));
            break;
        case CacheKind::delta_derivative:
            prof = std::make_shared<ToeplitzProfile>(profile_delta_derivative(mesh_, q));
            break;
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
        cache_lru_.splice(cache_lru_.begin(), cache_lru_, it->second.lru_pos);
        return it->second.profile;
    }
    ++correction_assemblies_;
    cache_lru_.push_front(key);
    cache_.emplace(key, CacheEntry{prof, cache_lru_.begin()});
    if (cache_.size() > kCacheCapacity) {
        cache_.erase(cache_lru_.back());
        cache_lru_.pop_back();
    }
    return prof;
}

int OperatorFamily::correction_assemblies() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return correction_assemblies_;
}

ToeplitzProfile OperatorFamily::combine_nodes(double s, bool derivative) const {
    const LagrangeWeights w = derivative ? lagrange_deriv(schedule_, s) : lagrange_eval(schedule_, s);
    const auto& nodes = node_profiles_[w.interval];
    ToeplitzProfile out;
    out.col = Eigen::VectorXd::Zero(mesh_.n_dofs());
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        if (w.w[m] == 0.0) continue;
        out.col += w.w[m] * nodes[m].col;
    }
    return out;
}

std::shared_ptr<const ToeplitzProfile> OperatorFamily::evaluate_profile(ParamPoint q) const {
    q.require_feasible();
    if (!contains(q.s)) throw std::out_of_range("s outside the interpolation schedule");
    ToeplitzProfile prof = combine_nodes(q.s, false);
    if (q.has_finite_horizon()) {
        if (scaled_)
            throw std::invalid_argument("finite horizon unsupported with the scaled operator");
        prof.col += cached_correction(CacheKind::correction, q)->col;
    }
    return std::make_shared<ToeplitzProfile>(std::move(prof));
}

std::shared_ptr<const ToeplitzProfile> OperatorFamily::evaluate_ds_profile(ParamPoint q) const {
    q.require_feasible();
    if (!contains(q.s)) throw std::out_of_range("s outside the interpolation schedule");
    ToeplitzProfile prof = combine_nodes(q.s, true);
    if (q.has_finite_horizon()) {
        if (scaled_)
            throw std::invalid_argument("finite horizon unsupported with the scaled operator");
        prof.col += cached_correction(CacheKind::s_derivative, q)->col;
    }
    return std::make_shared<ToeplitzProfile>(std::move(prof));
}

std::shared_ptr<const ToeplitzProfile> OperatorFamily::evaluate_ddelta_profile(ParamPoint q) const {
    q.require_feasible();
    if (!q.has_finite_horizon())
        throw std::invalid_argument("horizon derivative undefined at delta = infinity");
    if (!contains(q.s)) throw std::out_of_range("s outside the interpolation schedule");
    return cached_correction(CacheKind::delta_derivative, q);
}

StiffnessMatrix OperatorFamily::evaluate(ParamPoint q) const {
    StiffnessMatrix A;
    A.entries = evaluate_profile(q)->to_dense();
    A.param = q;
    A.kind = q.has_finite_horizon() ? MatrixKind::full : MatrixKind::infinite_horizon;
    return A;
}

StiffnessMatrix OperatorFamily::evaluate_ds(ParamPoint q) const {
    StiffnessMatrix A;
    A.entries = evaluate_ds_profile(q)->to_dense();
    A.param = q;
    A.kind = MatrixKind::s_derivative;
    return A;
}

StiffnessMatrix OperatorFamily::evaluate_ddelta(ParamPoint q) const {
    StiffnessMatrix A;
    A.entries = evaluate_ddelta_profile(q)->to_dense();
    A.param = q;
    A.kind = MatrixKind::delta_derivative;
    return A;
}

double default_eta(const Mesh1D& mesh, double s_min) {
    // Coercivity proxy: smallest eigenvalue of the pencil (A(s_min, inf), M),
    // estimated on a capped probe mesh by inverse power iteration.
    const int probe_elems = std::min(mesh.n_elem, 512);
    const Mesh1D probe = build_mesh(mesh.a, mesh.b, probe_elems);
    const Eigen::MatrixXd A = profile_infinite(probe, s_min).to_dense();
    const Eigen::MatrixXd M(mass_matrix(probe));
    Eigen::LLT<Eigen::MatrixXd> llt(A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("default_eta: probe stiffness not SPD");
    Eigen::VectorXd x = Eigen::VectorXd::Ones(probe.n_dofs());
    double lambda = 1.0;
    for (int it = 0; it < 50; ++it) {
        Eigen::VectorXd y = llt.solve(M * x);
        y /= y.norm();
        lambda = y.dot(A * y) / y.dot(M * y);
        x = y;
    }
    return 0.5 * std::sqrt(mesh.h) * lambda;
}

} // namespace fracident
