#pragma once

#include "endslab/harmonic.hpp"
#include "endslab/modes.hpp"
#include "endslab/radial_bvp.hpp"
#include "endslab/report.hpp"

#include <vector>

namespace endslab {

/// Contour lambda = i c + s e^{i angle}, s in (0, s_max], and its conjugate.
/// c is the vertex shift (negative: choose |r - r'| / (2t) automatically).
struct ContourSpec {
    double angle = 3.14159265358979323846 / 12.0;
    int nodes = 200;
    double s_max = 0.0;  // 0: sqrt(36 / (t cos(2 angle)))
    double shift = -1.0;
    bool check_conjugate = false;  // also solve on the conjugate ray
};

struct ContourNode {
    cplx lambda;
    cplx weight;  // d lambda quadrature weight
};

std::vector<ContourNode> contour_nodes(const ContourSpec& spec, double t, double shift);

struct HeatSample {
    double value = 0.0;
    double imaginary = 0.0;  // |Im| relative to |Re| (conjugate-ray check only)
    SynthesisResult diagnostic;
};

class HeatEngine {
public:
    HeatEngine(const ModelManifold& model, ContourSpec spec = {}, ModeSumOptions modes = {},
               SolverOptions solver = {});

    const ModelManifold& model() const { return model_; }
    const ContourSpec& spec() const { return spec_; }

    /// Mode-j heat kernel h_j(t, r, s) for every s, on a single contour.
    std::vector<double> mode_heat(double t, int j, double r, const std::vector<double>& s,
                                  double shift, bool derivative = false) const;

    HeatSample kernel(double t, const PointM& z, const PointM& zp) const;
    /// d/dr_z H(t, z, z').
    HeatSample kernel_dr(double t, const PointM& z, const PointM& zp) const;

private:
    HeatSample synthesize(double t, const PointM& z, const PointM& zp, bool derivative) const;

    ModelManifold model_;
    ContourSpec spec_;
    ModeSumOptions modes_;
    SolverOptions solver_;
};

double heat_kernel(const ModelManifold& model, double t, const PointM& z, const PointM& zp,
                   ContourSpec spec = {});

/// (4 pi t)^{-n/2} e^{-d^2 / 4t}.
double euclidean_heat(int n, double t, double d);

struct ContourIdentity {
    double lhs = 0.0;
    double rhs = 0.0;
    double relative_error = 0.0;
};

/// (1/(pi i)) int_Gamma e^{-sigma^2 L^2} e^{iL} f_n(-iL) L dL against
/// (4 pi)^{-n/2} sigma^{-n} e^{-1/(4 sigma^2)}.
ContourIdentity contour_identity_check(int n, double sigma, ContourSpec spec = {});

/// t^{n/2} d^l H(t, z, r' omega) with r' = sqrt(t) / sigma on the + end.
ExperimentReport heat_limit_experiment(const HeatEngine& engine, const HarmonicProfile& profile,
                                       const PointM& z, double sigma, int l,
                                       const std::vector<double>& t_list);

/// z on the - end at radius sqrt(t)/sigma, z' on the + end (or on the -
/// end when same_end) at radius sqrt(t)/sigma_p.
ExperimentReport offdiagonal_decay_experiment(const HeatEngine& engine, double sigma, double sigma_p,
                                              const std::vector<double>& t_list, bool same_end);

/// Integral of H(t, z, w) over w (only j = 0 contributes).
double heat_mass(const HeatEngine& engine, double t, double r_z);

/// Mode-j semigroup defect |int h_j(t) h_j(s) - h_j(t+s)| / |h_j(t+s)|.
double semigroup_defect(const HeatEngine& engine, int j, double t, double s, double r, double rp);

}  // namespace endslab
