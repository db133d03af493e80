#pragma once

#include "endslab/geometry.hpp"
#include "endslab/harmonic.hpp"
#include "endslab/report.hpp"

#include <vector>

namespace endslab {

/// chi_k = 1 on dist <= k, 0 on dist >= k^2, log(k^2 / dist) / log k between;
/// dist = |r|.
struct CutoffSample {
    double value = 0.0;
    double gradient = 0.0;  // |grad chi_k|
};

CutoffSample log_cutoff(double k, double r);

/// ||grad chi_k||_{L^n}^n; the exact ends are integrated in closed-form
/// volume at any radius, so k^2 may exceed r_max.
double grad_cutoff_Ln_norm(const ModelManifold& model, double k);

/// n-th power norms and their (log k)^{n-1} products over k_list.
ExperimentReport cutoff_norm_experiment(const ModelManifold& model, const std::vector<double>& k_list);

enum class DecayProfile {
    harmonic,  // phi = 1 - Phi_+ on the + end
    bound,     // |phi|^p = rho^{-((p-1)n - p)}, the decay bound itself
};

/// k^{-p} int_{k <= rho <= 2k} |phi|^p dvol against k; fitted exponent vs
/// (2-p)n for the bound profile or n - p(n-1) for the harmonic one.
ExperimentReport linear_cutoff_check(const HarmonicProfile& profile, double p, const std::vector<double>& k_list,
                                     DecayProfile kind = DecayProfile::harmonic);

/// ||dh||_2^2 with dh = 2 Phi_+' dr, by log-graded quadrature over the ends.
double dh_energy(const HarmonicProfile& profile);

/// int_{k <= |r| <= k^2} |r|^{-p} dvol (direct) and its integration-by-parts
/// pieces V(k^2)/k^{2p}, V(k)/k^p, p int V(r) r^{-p-1} dr.
struct PartsTerms {
    double term1 = 0.0;
    double term2 = 0.0;
    double term3 = 0.0;
    double direct = 0.0;
    double recombined() const { return term1 - term2 + term3; }
};

PartsTerms parts_terms(const ModelManifold& model, double p, double k);

/// ||h dchi_k||_p and ||dh - d(chi_k h)||_p per k with the parts terms.
ExperimentReport vanishing_experiment(const HarmonicProfile& profile, double p, const std::vector<double>& k_list);

}  // namespace endslab
