#pragma once

#include "endslab/harmonic.hpp"
#include "endslab/modes.hpp"
#include "endslab/radial_bvp.hpp"
#include "endslab/report.hpp"

#include <memory>
#include <vector>

namespace endslab {

struct KernelOptions {
    ModeSumOptions modes;
    SolverOptions solver;
};

/// e^{-kd} d^{2-n} f_n(kd), the resolvent kernel of R^n (odd n).
double euclidean_resolvent(int n, double k, double d);

/// Smooth cutoff equal to 0 for |r| <= R and 1 for |r| >= 2R on the given
/// end (0 on the other end).
double end_cutoff(const ModelManifold& model, EndSide end, double r);

struct KernelSample {
    cplx value;
    SynthesisResult diagnostic;
};

/// Two-point resolvent kernel of (Delta + k^2)^{-1} by mode synthesis over a
/// shared ModeGreen cache (one cache per k value is built lazily).
class ResolventEngine {
public:
    explicit ResolventEngine(const ModelManifold& model, KernelOptions options = {});
    ResolventEngine(const ResolventEngine&) = delete;
    ResolventEngine& operator=(const ResolventEngine&) = delete;

    const ModelManifold& model() const { return model_; }
    const KernelOptions& options() const { return options_; }

    KernelSample kernel(cplx k, const PointM& z, const PointM& zp);
    /// d/dr_z of the kernel (radial derivative in the first point).
    KernelSample kernel_dr(cplx k, const PointM& z, const PointM& zp);
    std::shared_ptr<const ModeGreen> green(int j, cplx k) { return cache_.get(j, k); }

private:
    ModelManifold model_;
    KernelOptions options_;
    ModeGreenCache cache_;
};

/// Convenience wrapper (fresh engine).
double resolvent(const ModelManifold& model, double k, const PointM& z, const PointM& zp,
                 KernelOptions options = {});

struct Rb0Row {
    double r_prime;  // end radius |z'|
    double k;
    double raw;
    double scaled;  // raw * |z'|^{n-2} e^{kappa} / f_n(kappa)
};

struct Rb0Result {
    std::vector<Rb0Row> rows;
    double limit = 0.0;         // two-level Richardson extrapolant
    double first_level = 0.0;   // one-level extrapolant from the last two samples
    bool levels_disagree = false;  // |limit - first_level| > 1% of limit
    bool monotone = true;
};

/// z' = (end radius r', pole direction) on the chosen end, k = kappa / r'.
Rb0Result rb0_leading_coefficient(ResolventEngine& engine, const PointM& z, EndSide end,
                                  double kappa, const std::vector<double>& r_prime);

struct ParametrixResult {
    std::vector<double> r_prime;
    std::vector<double> error;   // |R - G1 - G3| (or |R - G1| without correction)
    std::vector<double> kernel;  // R
    LogLogFit fit;               // log |error| against log (1 / r')
    bool flagged = false;        // R^2 < 0.98 or error at round-off floor
    std::string flag_reason;
};

/// Fitted order of vanishing of the parametrix error at rb0 with
/// G1 = [same end] phi(z) e^{-k|z-z'|}|z-z'|^{2-n} f_n(k|z-z'|) and
/// G3 = e^{-k r'} r'^{2-n} f_n(k r') (Phi(z) - phi(z)).
ParametrixResult parametrix_error_order(ResolventEngine& engine, const HarmonicProfile& profile,
                                        double kappa, const PointM& z, EndSide end,
                                        const std::vector<double>& r_prime, bool with_correction);

/// Point on the given end at end radius rho and direction omega.
PointM point_on_end(const ModelManifold& model, EndSide end, double rho, std::vector<double> omega);

/// Euclidean distance between two points of the same exact end.
double end_distance(const ModelManifold& model, const PointM& a, const PointM& b);

}  // namespace endslab
