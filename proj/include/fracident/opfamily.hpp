#pragma once

#include "fracident/assembly.hpp"
#include "fracident/cheb.hpp"
#include "fracident/mesh.hpp"

#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

namespace fracident {

/// Affine operator family: the infinite-horizon stiffness is precomputed at
/// every Chebyshev node of the schedule, so evaluating
///   A(s, delta) = sum_m Theta_m(s) A(s_m, inf) + C(s, delta)
/// and its parameter derivatives costs one weight evaluation plus a cheap
/// correction assembly. Node matrices are held in Toeplitz-compressed form;
/// evaluate() materializes dense on demand.
class OperatorFamily {
  public:
    /// Assembles all node matrices. With scale_by_fl_constant the node
    /// matrices absorb the fractional Laplacian constant C_{1,s_m}
    /// (infinite-horizon test problems); finite horizons are then rejected.
    OperatorFamily(Mesh1D mesh, ChebSchedule schedule, QuadratureConfig quad = {},
                   bool scale_by_fl_constant = false);

    const Mesh1D& mesh() const { return mesh_; }
    const ChebSchedule& schedule() const { return schedule_; }
    const QuadratureConfig& quadrature() const { return quad_; }
    const Eigen::SparseMatrix<double>& mass() const { return mass_; }
    bool scaled() const { return scaled_; }

    int node_count() const;
    const ToeplitzProfile& node_profile(int interval, int node) const {
        return node_profiles_[interval][node];
    }

    bool contains(double s) const { return schedule_.contains(s); }

    std::shared_ptr<const ToeplitzProfile> evaluate_profile(ParamPoint q) const;
    std::shared_ptr<const ToeplitzProfile> evaluate_ds_profile(ParamPoint q) const;
    std::shared_ptr<const ToeplitzProfile> evaluate_ddelta_profile(ParamPoint q) const;

    StiffnessMatrix evaluate(ParamPoint q) const;
    StiffnessMatrix evaluate_ds(ParamPoint q) const;
    StiffnessMatrix evaluate_ddelta(ParamPoint q) const;

    /// Correction assemblies actually performed (cache misses).
    int correction_assemblies() const;

  private:
    enum class CacheKind { correction, s_derivative, delta_derivative };

    std::shared_ptr<const ToeplitzProfile> cached_correction(CacheKind kind, ParamPoint q) const;
    ToeplitzProfile combine_nodes(double s, bool derivative) const;

    Mesh1D mesh_;
    ChebSchedule schedule_;
    QuadratureConfig quad_;
    bool scaled_ = false;
    Eigen::SparseMatrix<double> mass_;
    std::vector<std::vector<ToeplitzProfile>> node_profiles_;

    struct CacheKey {
        int kind;
        std::uint64_t s_bits;
        std::uint64_t d_bits;
        bool operator==(const CacheKey&) const = default;
    };
    struct CacheKeyHash {
        std::size_t operator()(const CacheKey& k) const;
    };
    struct CacheEntry {
        std::shared_ptr<const ToeplitzProfile> profile;
        std::list<CacheKey>::iterator lru_pos;
    };
    static constexpr std::size_t kCacheCapacity = 64;
    mutable std::mutex cache_mutex_;
    mutable std::list<CacheKey> cache_lru_;
    mutable std::unordered_map<CacheKey, CacheEntry, CacheKeyHash> cache_;
    mutable int correction_assemblies_ = 0;
};

/// Interpolation tolerance tied to the mesh: 0.5 h^{1/2} times a computable
/// coercivity proxy (smallest Rayleigh quotient of A(s_min, inf) against the
/// mass matrix, evaluated on a capped probe mesh).
double default_eta(const Mesh1D& mesh, double s_min);

} // namespace fracident
