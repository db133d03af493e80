#pragma once

#include "endslab/harmonic.hpp"
#include "endslab/modes.hpp"
#include "endslab/radial_bvp.hpp"
#include "endslab/report.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <vector>

namespace endslab {

/// Nodes for integral_0^infty F(k) dk: one Gauss panel on [0, k_split 10^-decades],
/// log-graded panels up to k_split and on to k_max.  The part beyond k_max
/// is handled analytically by the callers through remainder_weight =
/// integral_{k_max}^infty dk / k^2.
struct QuadratureSpec {
    double k_split = 1.0;
    double k_max = 1e3;
    int decades_below = 8;
    int panels_per_decade = 2;
    int order = 10;

    std::vector<double> nodes;
    std::vector<double> weights;

    static QuadratureSpec make(double k_split = 1.0, double k_max = 1e3, int decades_below = 8,
                               int panels_per_decade = 2, int order = 10);
    /// Same layout with half the panels per decade (self-consistency checks).
    QuadratureSpec coarser() const;
    double remainder_weight() const { return 1.0 / k_max; }
};

/// Angular factor of mode j: C_j^a(c) / C_j^a(1), a = (n-2)/2 (P_j for n = 3).
double zonal_harmonic(int j, int n, double c);
double zonal_harmonic_derivative(int j, int n, double c);

/// Function on M: sum_j g_j(r) Y_j(omega . e_0), with g_j supported in [lo, hi].
struct FieldMode {
    int j = 0;
    std::function<double(double)> profile;
    double lo = 0.0;
    double hi = 0.0;
};

struct FieldOnM {
    std::vector<FieldMode> modes;
    double value(const ModelManifold& model, const PointM& z) const;
};

/// Mode-wise radial samples of an operator output: value and d/dr at nodes.
struct RadialSamples {
    std::vector<double> r;
    std::vector<double> value;
    std::vector<double> derivative;
};

/// One-form at a point: dr component and the unit angular component along
/// the meridian through e_0.
struct OneFormSample {
    double dr = 0.0;
    double angular = 0.0;
    double norm() const;
};

/// Shares ModeGreen solutions across calls (k nodes are fixed by the spec).
class RieszEngine {
public:
    RieszEngine(const ModelManifold& model, QuadratureSpec spec = QuadratureSpec::make(),
                ModeSumOptions modes = {}, SolverOptions solver = {});
    RieszEngine(const RieszEngine&) = delete;
    RieszEngine& operator=(const RieszEngine&) = delete;

    const ModelManifold& model() const { return model_; }
    const QuadratureSpec& spec() const { return spec_; }
    std::shared_ptr<const ModeGreen> green(int j, double k) { return cache_.get(j, k); }

    /// Delta^{-1/2} applied to the mode-j profile g (supported in [lo, hi]).
    /// g must vary on scales >= scale * max(1, |r|); above k ~ 20 / that
    /// scale a two-term local expansion replaces the k-sweep.
    RadialSamples inverse_sqrt(int j, const std::function<double(double)>& g, double lo, double hi,
                               const std::vector<double>& nodes, double scale = 0.2);
    /// Delta^{1/2} g_j = (2/pi) int (Delta + k^2)^{-1} L_j g dk.
    RadialSamples sqrt_laplacian(int j, const std::function<double(double)>& g, double lo, double hi,
                                 const std::vector<double>& nodes);

    /// T g = d Delta^{-1/2} g at the given points.
    std::vector<OneFormSample> riesz_apply(const FieldOnM& g, const std::vector<PointM>& points);

    /// Mode-j radial Riesz kernel d/dr_z (2/pi) int u_j(r_z, s; k) dk at each s.
    std::vector<double> radial_kernel(int j, double r_z, const std::vector<double>& s);

    /// Full Riesz kernel T(z, z') (derivative in z) by mode synthesis.
    OneFormSample kernel(const PointM& z, const PointM& zp);

    /// T F_K sampled on a whole-model quadrature grid plus (T F_K)(z0) by
    /// the sweep and by the kernel pairing; memoized per (rho0, K, r_z0).
    struct ThresholdField {
        std::vector<double> r, w, tf;
        double t_sweep = 0.0;
        double t_pairing = 0.0;
    };
    const ThresholdField& threshold_field(double rho0, double K, double r_z0);

private:
    ModelManifold model_;
    QuadratureSpec spec_;
    ModeSumOptions modes_;
    ModeGreenCache cache_;
    std::map<std::array<double, 3>, ThresholdField> threshold_memo_;
};

/// Delta^{1/2} by the k-quadrature (fresh engine; single mode field).
RadialSamples sqrt_laplacian_apply(const ModelManifold& model, const FieldMode& g,
                                   const std::vector<double>& nodes,
                                   QuadratureSpec spec = QuadratureSpec::make());

struct RieszRow {
    std::vector<double> r_prime;
    std::vector<double> dr;
    std::vector<double> angular;
    std::vector<double> magnitude;
    LogLogFit fit;           // log |T| against log r'
    double coefficient = 0;  // |T| r'^{n-1} at the largest r'
    double dphi = 0;         // |Phi'(r_z)| (0 on one-end models)
    bool flagged = false;
};

/// Riesz kernel T(z, z') with z' = r' on the pole of the given end.
RieszRow riesz_kernel_row(RieszEngine& engine, const HarmonicProfile& profile, const PointM& z,
                          EndSide end, const std::vector<double>& r_prime);

struct LpNorm {
    double value = 0.0;
    bool diverging = false;  // the outermost decade still contributes > 1% of norm^p
};

/// L^p norm of a radial function on [lo, hi] with volume f^{n-1} dr d omega.
LpNorm lp_norm(const ModelManifold& model, const std::function<double(double)>& g, double p,
               double lo, double hi);

/// F_K = cutoff * 1 / (rho log rho) on [rho0, K] of the + end (end radius rho).
struct ThresholdFamily {
    double rho0 = 2.0;
    double K = 1e3;
    double operator()(const ModelManifold& model, double r) const;
    double lo(const ModelManifold& model) const;
    double hi(const ModelManifold& model) const;
};

/// ||F_K||_p, (T F_K)(z0) by two paths, ||T F_K||_p and their ratio per K.
ExperimentReport threshold_experiment(RieszEngine& engine, double p, const std::vector<double>& K_list,
                                      const PointM& z0, double rho0 = 2.0);

}  // namespace endslab
