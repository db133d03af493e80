#include "endslab/harmonic.hpp"

#include "endslab/modes.hpp"
#include "endslab/quadrature.hpp"
#include "endslab/radial_bvp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace endslab {

namespace {

constexpr int kPanels = 64;
constexpr int kOrder = 20;

}  // namespace

HarmonicProfile::HarmonicProfile(const ModelManifold& model) : model_(model) {
    if (!model.two_ended()) return;
    const int n = model.dimension();
    const double R = model.neck_radius();
    const double cp = model.profile().end_offset(EndSide::plus);
    const double cm = model.profile().end_offset(EndSide::minus);
    auto integrand = [&](double s) { return std::pow(model_.warp(s).f, 1.0 - n); };

    breaks_.resize(kPanels + 1);
    cumulative_.assign(kPanels + 1, 0.0);
    for (int p = 0; p <= kPanels; ++p) breaks_[p] = -R + 2.0 * R * p / kPanels;
    for (int p = 0; p < kPanels; ++p) {
        cumulative_[p + 1] = cumulative_[p] + integrate_gauss(integrand, breaks_[p], breaks_[p + 1], kOrder);
    }
    tail_minus_ = std::pow(R - cm, 2.0 - n) / (n - 2.0);
    tail_plus_ = std::pow(R - cp, 2.0 - n) / (n - 2.0);
    neck_total_ = integrate_adaptive(integrand, -R, R, 1e-15).value;
    flux_ = tail_minus_ + neck_total_ + tail_plus_;
}

double HarmonicProfile::neck_primitive(double r) const {
    const int n = model_.dimension();
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), r);
    const std::size_t p = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - breaks_.begin() - 1, 0), kPanels - 1);
    const double part = integrate_gauss([&](double s) { return std::pow(model_.warp(s).f, 1.0 - n); },
                                        breaks_[p], r, kOrder);
    return cumulative_[p] + part;
}

double HarmonicProfile::phi(double r) const {
    if (trivial()) return 1.0;
    const int n = model_.dimension();
    const double R = model_.neck_radius();
    if (r >= R) {
        const double rho = model_.end_radius(r);
        return 1.0 - std::pow(rho, 2.0 - n) / ((n - 2.0) * flux_);
    }
    if (r <= -R) {
        const double rho = model_.end_radius(r);
        return std::pow(rho, 2.0 - n) / ((n - 2.0) * flux_);
    }
    return (tail_minus_ + neck_primitive(r)) / flux_;
}

double HarmonicProfile::phi_minus(double r) const {
    if (trivial()) return 0.0;
    const int n = model_.dimension();
    const double R = model_.neck_radius();
    if (r >= R) return std::pow(model_.end_radius(r), 2.0 - n) / ((n - 2.0) * flux_);
    if (r <= -R) return 1.0 - phi(r);
    return (neck_total_ - neck_primitive(r) + tail_plus_) / flux_;
}

double HarmonicProfile::dphi(double r) const {
    if (trivial()) return 0.0;
    return std::pow(model_.warp(r).f, 1.0 - model_.dimension()) / flux_;
}

HarmonicProfile phi_plus(const ModelManifold& model) { return HarmonicProfile(model); }

ExpansionCoefficient phi_expansion_coefficient(const HarmonicProfile& profile, EndSide end) {
    const ModelManifold& model = profile.model();
    if (!model.two_ended()) {
        throw std::invalid_argument("phi_expansion_coefficient: needs a two-end model");
    }
    const int n = model.dimension();
    ExpansionCoefficient out{};
    out.closed_form = 1.0 / ((n - 2.0) * profile.flux_integral());

    // psi_- at k = 0 is proportional to Phi_+: it decays at the - end and
    // tends to a constant X at the + end, psi_- = X + Y rho^{2-n} there.
    const ModeGreen green(model, 0, 0.0);
    const double cp = model.profile().end_offset(EndSide::plus);
    const double cm = model.profile().end_offset(EndSide::minus);
    const double rho1 = 2.0 * (model.neck_radius() - cp);
    const double rho2 = 2.0 * rho1;
    const double p1 = green.psi_minus(rho1 + cp).value.value().real();
    const double p2 = green.psi_minus(rho2 + cp).value.value().real();
    const double t1 = std::pow(rho1, 2.0 - n);
    const double t2 = std::pow(rho2, 2.0 - n);
    const double Y = (p1 - p2) / (t1 - t2);
    const double X = p1 - Y * t1;
    if (end == EndSide::plus) {
        out.limit = -Y / X;
    } else {
        const double rho = 1e4;
        out.limit = std::pow(rho, n - 2.0) * green.psi_minus(-rho - cm).value.value().real() / X;
    }
    return out;
}

double bounded_harmonic_h(const HarmonicProfile& profile, double r) {
    if (!profile.model().two_ended()) {
        throw std::invalid_argument("bounded_harmonic_h: needs a two-end model");
    }
    return 2.0 * profile.phi(r) - 1.0;
}

double dirichlet_energy_h(const HarmonicProfile& profile) {
    const ModelManifold& model = profile.model();
    if (!model.two_ended()) return 0.0;
    const int n = model.dimension();
    const double R = model.neck_radius();
    auto density = [&](double r) {
        const double d = 2.0 * profile.dphi(r);
        return d * d * std::pow(model.warp(r).f, n - 1);
    };
    const double inf = std::numeric_limits<double>::infinity();
    const double total = integrate_adaptive(density, -inf, -R, 1e-14).value +
                         integrate_adaptive(density, -R, R, 1e-14).value +
                         integrate_adaptive(density, R, inf, 1e-14).value;
    return sphere_volume(n) * total;
}

HarmonicResidual harmonic_residual(const HarmonicProfile& profile, const std::vector<double>& nodes,
                                   double h) {
    const ModelManifold& model = profile.model();
    const RadialOperator op{&model, 0, 0.0};
    HarmonicResidual out{};
    const int n = model.dimension();
    for (double r : nodes) {
        const double f = model.warp(r).f;
        const double hr = h * std::min(f, std::max(1.0, std::abs(r)));
        const bool right = r > 0.0;
        // keep the stencil inside one smooth piece of f
        const double R = model.neck_radius();
        int shift = 0;
        for (double edge : {-R, R}) {
            if (r < edge && r + 3 * hr > edge) shift = -3;
            if (r >= edge && r - 3 * hr < edge) shift = 3;
        }
        const cplx res = radial_apply_at(
            op, [&](double x) { return cplx(right ? profile.phi_minus(x) : profile.phi(x)); }, r, hr,
            shift);
        const double d1 = profile.dphi(r);
        // |Phi''| = (n-1)|f'/f| Phi' for a harmonic profile; use the first-order term as scale
        const double scale = std::max((n - 1.0) * std::abs(model.warp(r).df / f) * d1, d1 / f);
        const double rel = scale > 0.0 ? std::abs(res) / scale : std::abs(res);
        out.r.push_back(r);
        out.residual.push_back(std::abs(res));
        out.max_absolute = std::max(out.max_absolute, std::abs(res));
        out.max_relative = std::max(out.max_relative, rel);
    }
    return out;
}

}  // namespace endslab
