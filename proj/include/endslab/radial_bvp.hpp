#pragma once

#include "endslab/exterior.hpp"
#include "endslab/geometry.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

namespace endslab {

/// Graded radial grid: uniform in the neck, geometric toward r_max.
struct RadialGrid {
    std::vector<double> nodes;

    /// `points` is the total node count; `grading` the ratio between the
    /// largest and smallest spacing on each end.
    static RadialGrid graded(const ModelManifold& model, int points = 2001, double grading = 0.0);
    std::size_t size() const { return nodes.size(); }
};

struct SolverOptions {
    double tolerance = 1e-12;   // relative local error of the neck integrator
    double min_wronskian = 1e-12;
};

/// Value and r-derivative of a homogeneous solution.
struct SolutionPoint {
    Scaled value;
    Scaled derivative;
};

/// Solution of L_{j,k} psi = 0 integrated across the neck [-R, R] from one
/// side, with the accepted steps stored so that values anywhere in the neck
/// can be recovered by a short integration from the nearest stored node.
class NeckTrajectory {
public:
    NeckTrajectory() = default;
    NeckTrajectory(const ModelManifold& model, int j, cplx k, double r_start,
                   SolutionPoint start, double r_end, double tolerance);

    SolutionPoint at(double r) const;
    const SolutionPoint& end_point() const { return end_; }
    std::size_t steps() const { return nodes_.size(); }

private:
    struct Node {
        double r;
        cplx psi;
        cplx dpsi;
        cplx log_scale;
    };
    const ModelManifold* model_ = nullptr;
    int j_ = 0;
    cplx k_{};
    double tolerance_ = 1e-12;
    std::vector<Node> nodes_;  // ordered along the integration direction
    SolutionPoint end_;
};

/// Mode-j radial Green function of Delta + k^2:
///   u_j(r, r') = psi_-(min) psi_+(max) / W,  W = -f^{n-1} (psi_- psi_+' - psi_-' psi_+),
/// so that L_{j,k} u_j(., r') = delta_{r'} / f(r')^{n-1}.
/// psi_+ decays at the + end (equals the exterior decaying solution there);
/// psi_- decays at the - end or, on one-end models, is regular at r = 0.
class ModeGreen {
public:
    ModeGreen(const ModelManifold& model, int j, cplx k, SolverOptions options = {});

    int mode() const { return j_; }
    cplx k() const { return k_; }
    const ModelManifold& model() const { return *model_; }

    SolutionPoint psi_plus(double r) const;
    SolutionPoint psi_minus(double r) const;
    const Scaled& wronskian() const { return w_; }

    /// W evaluated from psi_+/psi_- at r (constant in exact arithmetic).
    Scaled wronskian_at(double r) const;

    Scaled green(double r, double rp) const;
    /// d/dr of u_j(r, r') (first argument), r != r'.
    Scaled green_dr(double r, double rp) const;

    /// max relative deviation of wronskian_at over the given nodes.
    double wronskian_variation(const std::vector<double>& nodes) const;

private:
    const ModelManifold* model_;
    int j_;
    cplx k_;
    SolverOptions options_;
    bool symmetric_ = false;
    NeckTrajectory plus_traj_;   // psi_+ integrated from +R to -R
    NeckTrajectory minus_traj_;  // psi_- integrated from -R to +R
    Scaled alpha_plus_, beta_plus_;    // psi_+ = alpha d + beta g on the - end
    Scaled alpha_minus_, beta_minus_;  // psi_- = alpha d + beta g on the + end
    Scaled w_;
};

/// Concurrent cache of ModeGreen keyed by (j, k); insertion is
/// last-write-wins (entries for equal keys are value-identical).
class ModeGreenCache {
public:
    explicit ModeGreenCache(const ModelManifold& model, SolverOptions options = {})
        : model_(&model), options_(options) {}

    std::shared_ptr<const ModeGreen> get(int j, cplx k);
    std::size_t size() const;

private:
    struct Key {
        int j;
        double re, im;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const;
    };
    const ModelManifold* model_;
    SolverOptions options_;
    mutable std::shared_mutex mutex_;
    std::unordered_map<Key, std::shared_ptr<const ModeGreen>, KeyHash> entries_;
};

/// Decaying exterior solution at r in an exact region of `side`, normalized
/// to 1 at r = r_max of that end.  Errors on Re k < 0 or r outside the
/// exact region.
ExteriorValue exterior_solution(const ModelManifold& model, int j, cplx k, double r);

/// psi_+ (end = plus) or psi_- sampled on the grid, normalized to 1 at the
/// far boundary of the chosen end.
std::vector<SolutionPoint> solve_homogeneous(const ModelManifold& model, int j, cplx k,
                                             EndSide end, const RadialGrid& grid,
                                             SolverOptions options = {});

ModeGreen mode_green(const ModelManifold& model, int j, cplx k, SolverOptions options = {});

using RadialSource = std::function<double(double)>;

/// u(r) = integral of u_j(r, r') v(r') f(r')^{n-1} dr' at the requested
/// (sorted) nodes; `support` bounds the source.  Optionally returns u'(r).
struct ResolventOutput {
    std::vector<cplx> value;
    std::vector<cplx> derivative;
};
ResolventOutput apply_resolvent(const ModeGreen& green, const RadialSource& v,
                                const std::vector<double>& nodes, double support_lo,
                                double support_hi, int order = 8);

}  // namespace endslab
