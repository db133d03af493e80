#pragma once

#include "endslab/geometry.hpp"

#include <vector>

namespace endslab {

/// The bounded harmonic function Phi_+ equal to 1 at the + end and 0 at the
/// - end:
///   Phi_+(r) = (1/I) int_{-inf}^r f^{1-n},   I = int_{-inf}^{inf} f^{1-n}.
/// On one-end models Phi_+ is the constant 1.
class HarmonicProfile {
public:
    explicit HarmonicProfile(const ModelManifold& model);

    const ModelManifold& model() const { return model_; }
    bool trivial() const { return !model_.two_ended(); }

    double phi(double r) const;
    double dphi(double r) const;
    /// Phi_- = 1 - Phi_+ (decays at the + end).
    double phi_minus(double r) const;
    double phi_end(EndSide end, double r) const { return end == EndSide::plus ? phi(r) : phi_minus(r); }
    double dphi_end(EndSide end, double r) const { return end == EndSide::plus ? dphi(r) : -dphi(r); }

    /// Total flux integral I.
    double flux_integral() const { return flux_; }

private:
    double neck_primitive(double r) const;  // int_{-R}^r f^{1-n}

    ModelManifold model_;
    double flux_ = 0.0;
    double tail_minus_ = 0.0;
    double tail_plus_ = 0.0;
    double neck_total_ = 0.0;
    std::vector<double> breaks_;
    std::vector<double> cumulative_;
};

HarmonicProfile phi_plus(const ModelManifold& model);

struct ExpansionCoefficient {
    double limit;        // extrapolated lim rho^{n-2} (1 - Phi_+) or rho^{n-2} Phi_+
    double closed_form;  // 1 / ((n-2) I)
};

/// A' of Phi_+ = 1 - A' rho^{2-n} (+ end) or Phi_+ = A' rho^{2-n} (- end).
/// The limit is computed from the zero-energy homogeneous solution of the
/// mode ODE, independently of the flux quadrature.
ExpansionCoefficient phi_expansion_coefficient(const HarmonicProfile& profile, EndSide end);

/// h = 2 Phi_+ - 1.
double bounded_harmonic_h(const HarmonicProfile& profile, double r);

/// Dirichlet energy of h, int |dh|^2 dvol, by quadrature of (2 Phi')^2 f^{n-1}.
double dirichlet_energy_h(const HarmonicProfile& profile);

struct HarmonicResidual {
    double max_absolute = 0.0;  // max |L_{0,0} Phi|
    double max_relative = 0.0;  // max |L_{0,0} Phi| / (size of the operator's terms)
    std::vector<double> r;
    std::vector<double> residual;
};

/// Harmonicity residual of Phi_+ by a sixth-order pointwise stencil with
/// spacing h * f(r) (applied to 1 - Phi_+ on r > 0 to avoid cancellation).
HarmonicResidual harmonic_residual(const HarmonicProfile& profile, const std::vector<double>& nodes,
                                   double h = 2e-3);

}  // namespace endslab
