#include "endslab/heat.hpp"

#include "endslab/parallel.hpp"
#include "endslab/quadrature.hpp"
#include "endslab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace endslab {

namespace {

constexpr cplx I{0.0, 1.0};

std::vector<double> pole(int n, double gamma = 0.0) {
    std::vector<double> w(n, 0.0);
    w[0] = std::cos(gamma);
    if (n > 1) w[1] = std::sin(gamma);
    return w;
}

// (X_up - X_down) / (2 pi i) per sample; X_down solved on the conjugate ray
// when `conjugate`, otherwise replaced by conj(X_up).
std::vector<cplx> contour_sum(const ModelManifold& model, const SolverOptions& solver,
                              const std::vector<ContourNode>& nodes, double t, int j, double r,
                              const std::vector<double>& s, bool derivative, bool conjugate) {
    const std::size_t m = nodes.size();
    const std::size_t rays = conjugate ? 2 : 1;
    std::vector<std::vector<cplx>> parts(m * rays, std::vector<cplx>(s.size()));
    parallel_for(m * rays, [&](std::size_t idx) {
        const std::size_t i = idx % m;
        const bool down = idx >= m;
        const cplx lambda = down ? std::conj(nodes[i].lambda) : nodes[i].lambda;
        const cplx weight = down ? std::conj(nodes[i].weight) : nodes[i].weight;
        const cplx k = down ? I * lambda : -I * lambda;
        const ModeGreen g(model, j, k, solver);
        const Scaled factor(2.0 * lambda * weight, -t * lambda * lambda);
        for (std::size_t q = 0; q < s.size(); ++q) {
            const Scaled u = derivative ? g.green_dr(r, s[q]) : g.green(r, s[q]);
            parts[idx][q] = (u * factor).value();
        }
    });
    std::vector<cplx> out(s.size());
    for (std::size_t q = 0; q < s.size(); ++q) {
        cplx up{}, dn{};
        for (std::size_t i = 0; i < m; ++i) up += parts[i][q];
        if (conjugate) {
            for (std::size_t i = 0; i < m; ++i) dn += parts[m + i][q];
        } else {
            dn = std::conj(up);
        }
        out[q] = (up - dn) / (2.0 * std::numbers::pi * I);
    }
    return out;
}

double auto_shift(const ContourSpec& spec, double t, double r, double rp) {
    return spec.shift >= 0.0 ? spec.shift : std::abs(r - rp) / (2.0 * t);
}

}  // namespace

std::vector<ContourNode> contour_nodes(const ContourSpec& spec, double t, double shift) {
    if (!(t > 0.0)) throw std::domain_error("contour: t must be > 0");
    if (spec.nodes < 2) throw std::invalid_argument("contour: need at least two nodes");
    const double smax = spec.s_max > 0.0 ? spec.s_max : std::sqrt(36.0 / (t * std::cos(2.0 * spec.angle)));
    const GaussRule& rule = gauss_legendre(spec.nodes);
    const cplx dir = std::polar(1.0, spec.angle);
    std::vector<ContourNode> out(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double s = 0.5 * smax * (rule.nodes[i] + 1.0);
        out[i] = {I * shift + s * dir, 0.5 * smax * rule.weights[i] * dir};
    }
    return out;
}

HeatEngine::HeatEngine(const ModelManifold& model, ContourSpec spec, ModeSumOptions modes,
                       SolverOptions solver)
    : model_(model), spec_(spec), modes_(modes), solver_(solver) {}

std::vector<double> HeatEngine::mode_heat(double t, int j, double r, const std::vector<double>& s,
                                          double shift, bool derivative) const {
    const auto nodes = contour_nodes(spec_, t, shift);
    const auto full = contour_sum(model_, solver_, nodes, t, j, r, s, derivative, false);
    std::vector<double> out(full.size());
    for (std::size_t q = 0; q < full.size(); ++q) out[q] = full[q].real();
    return out;
}

HeatSample HeatEngine::synthesize(double t, const PointM& z, const PointM& zp, bool derivative) const {
    const double shift = auto_shift(spec_, t, z.r, zp.r);
    const auto nodes = contour_nodes(spec_, t, shift);
    const double c = angle_cosine(z, zp);
    double worst_im = 0.0;
    HeatSample out;
    out.diagnostic = sum_modes(
        [&](int j) {
            const cplx v = contour_sum(model_, solver_, nodes, t, j, z.r, {zp.r}, derivative,
                                       spec_.check_conjugate)[0];
            if (v.real() != 0.0) worst_im = std::max(worst_im, std::abs(v.imag() / v.real()));
            return cplx(v.real(), 0.0);
        },
        c, model_.dimension(), modes_);
    out.value = out.diagnostic.value.real();
    out.imaginary = worst_im;
    return out;
}

HeatSample HeatEngine::kernel(double t, const PointM& z, const PointM& zp) const {
    return synthesize(t, z, zp, false);
}

HeatSample HeatEngine::kernel_dr(double t, const PointM& z, const PointM& zp) const {
    return synthesize(t, z, zp, true);
}

double heat_kernel(const ModelManifold& model, double t, const PointM& z, const PointM& zp,
                   ContourSpec spec) {
    return HeatEngine(model, spec).kernel(t, z, zp).value;
}

double euclidean_heat(int n, double t, double d) {
    return std::pow(4.0 * std::numbers::pi * t, -0.5 * n) * std::exp(-d * d / (4.0 * t));
}

ContourIdentity contour_identity_check(int n, double sigma, ContourSpec spec) {
    if (!(sigma > 0.0)) throw std::domain_error("contour identity: sigma must be > 0");
    const auto nodes = contour_nodes(spec, sigma * sigma, spec.shift > 0.0 ? spec.shift : 0.0);
    cplx up{};
    for (const auto& nd : nodes) {
        const cplx L = nd.lambda;
        up += std::exp(-sigma * sigma * L * L + I * L) * resolvent_profile(n, -I * L) * L * nd.weight;
    }
    ContourIdentity out;
    out.lhs = ((up - std::conj(up)) / (std::numbers::pi * I)).real();
    out.rhs = std::pow(4.0 * std::numbers::pi, -0.5 * n) * std::pow(sigma, -n) *
              std::exp(-1.0 / (4.0 * sigma * sigma));
    out.relative_error = std::abs(out.lhs / out.rhs - 1.0);
    return out;
}

ExperimentReport heat_limit_experiment(const HeatEngine& engine, const HarmonicProfile& profile,
                                       const PointM& z, double sigma, int l,
                                       const std::vector<double>& t_list) {
    if (l != 0 && l != 1) throw std::invalid_argument("heat-limit: l must be 0 or 1");
    if (t_list.size() < 2) throw std::invalid_argument("heat-limit: need at least two times");
    const ModelManifold& model = engine.model();
    const int n = model.dimension();
    const bool two = model.two_ended();
    const double grad = two ? profile.dphi(z.r) : 0.0;
    const double target = std::pow(4.0 * std::numbers::pi, -0.5 * n) * std::exp(-1.0 / (4.0 * sigma * sigma)) *
                          (l == 0 ? (two ? profile.phi(z.r) : 1.0) : grad);
    ExperimentReport rep;
    rep.experiment = "heat-limit";
    rep.columns = {"t", "r_prime", "value", "scaled_value", "target", "rel_error", "cauchy"};
    std::vector<double> scaled;
    for (double t : t_list) {
        const double rp = std::sqrt(t) / sigma;
        const PointM zp = point_on_end(model, EndSide::plus, rp, pole(n));
        if (!model.in_exact_region(zp.r) || zp.r > model.r_max()) {
            throw std::invalid_argument("heat-limit: r' leaves the exact end for t = " + format_double(t));
        }
        const HeatSample h = l == 0 ? engine.kernel(t, z, zp) : engine.kernel_dr(t, z, zp);
        const double sv = std::pow(t, 0.5 * n) * h.value;
        const double cauchy = scaled.empty() ? 0.0 : std::abs(sv / scaled.back() - 1.0);
        scaled.push_back(sv);
        rep.add_row({t, rp, h.value, sv, target, target != 0.0 ? std::abs(sv / target - 1.0) : std::abs(sv), cauchy});
    }
    const double last = scaled.back();
    if (target != 0.0) {
        rep.check_close("limit_rel_error", std::abs(last / target - 1.0), 0.0, l == 0 ? 0.03 : 0.05,
                        "t^{n/2} d^l H at the largest t against (4 pi)^{-n/2} e^{-1/(4 sigma^2)} d^l Phi(z)");
    }
    std::vector<double> ts(t_list), mag;
    for (double v : scaled) mag.push_back(std::abs(v));
    bool positive = true;
    for (double v : mag) positive = positive && v > 0.0;
    if (positive) {
        const LogLogFit fit = fit_loglog(ts, mag, 2);
        rep.add_fit("scaled_vs_t", fit);
        if (l == 1 && two) {
            rep.check_true("gradient_non_vanishing", std::abs(fit.slope) < 0.1 && std::abs(last) > 0.5 * std::abs(target),
                           "scaled gradient sequence has no t^{-1/2} decay");
        }
        if (l == 1 && !two) {
            rep.check_close("flat_gradient_decay_slope", fit.slope, -0.5, 0.1,
                            "flat comparison: the gradient gains a factor t^{-1/2}");
        }
    }
    return rep;
}

ExperimentReport offdiagonal_decay_experiment(const HeatEngine& engine, double sigma, double sigma_p,
                                              const std::vector<double>& t_list, bool same_end) {
    const ModelManifold& model = engine.model();
    if (!model.two_ended()) throw std::invalid_argument("heat-offdiag: needs a two-end model");
    if (t_list.size() < 5) throw std::invalid_argument("heat-offdiag: need at least five times");
    const int n = model.dimension();
    const double power = same_end ? 0.5 * n : n - 1.0;
    ExperimentReport rep;
    rep.experiment = same_end ? "heat-offdiag-same-end" : "heat-offdiag";
    rep.columns = {"t", "r", "r_prime", "value", "scaled_value", "cauchy"};
    auto points = [&](double t, double s1, double s2) {
        const PointM z = point_on_end(model, EndSide::minus, std::sqrt(t) / s1, pole(n));
        const PointM zp = same_end ? point_on_end(model, EndSide::minus, std::sqrt(t) / s2, pole(n, 0.5 * std::numbers::pi))
                                   : point_on_end(model, EndSide::plus, std::sqrt(t) / s2, pole(n));
        for (double r : {z.r, zp.r}) {
            if (!model.in_exact_region(r) || std::abs(r) > model.r_max()) {
                throw std::invalid_argument("heat-offdiag: point leaves the exact end for t = " + format_double(t));
            }
        }
        return std::pair{z, zp};
    };
    std::vector<double> values, scaled;
    for (double t : t_list) {
        auto [z, zp] = points(t, sigma, sigma_p);
        const double v = engine.kernel(t, z, zp).value;
        const double sv = std::pow(t, power) * v;
        const double cauchy = scaled.empty() ? 0.0 : std::abs(sv / scaled.back() - 1.0);
        values.push_back(v);
        scaled.push_back(sv);
        rep.add_row({t, model.end_radius(z.r), model.end_radius(zp.r), v, sv, cauchy});
    }
    const LogLogFit fit = fit_loglog(t_list, values);
    rep.add_fit("H_vs_t", fit);
    rep.check_close("slope", fit.slope, -power, 0.1, same_end ? "usual t^{-n/2} rate" : "cross-end t^{-(n-1)} rate");
    if (!same_end) {
        // top half-decade: last sample against the sample closest to t_max / sqrt(10)
        const double tmax = t_list.back();
        std::size_t ref = 0;
        for (std::size_t i = 0; i < t_list.size(); ++i) {
            if (std::abs(std::log(t_list[i] / (tmax / std::sqrt(10.0)))) <
                std::abs(std::log(t_list[ref] / (tmax / std::sqrt(10.0))))) {
                ref = i;
            }
        }
        rep.check_close("q_cauchy", std::abs(scaled.back() / scaled[ref] - 1.0), 0.0, 0.02,
                        "t^{n-1} H over the top half-decade");
        auto [z, zp] = points(tmax, sigma_p, sigma);
        const double swapped = std::pow(tmax, power) * engine.kernel(tmax, z, zp).value;
        rep.fits["q"] = {scaled.back(), 0.0, 0.0};
        rep.fits["q_swapped"] = {swapped, 0.0, 0.0};
        rep.check_close("q_symmetry", std::abs(swapped / scaled.back() - 1.0), 0.0, 0.02, "q(sigma, sigma') vs q(sigma', sigma)");
    }
    return rep;
}

namespace {

std::vector<double> window(const ModelManifold& model, double a, double b, double step) {
    const double lo = std::max(a, model.r_min());
    const double hi = std::min(b, model.r_max());
    std::vector<double> br;
    const int m = std::max(1, int(std::ceil((hi - lo) / step)));
    for (int i = 0; i <= m; ++i) br.push_back(lo + (hi - lo) * i / m);
    if (model.two_ended()) {
        for (double x : {-model.neck_radius(), model.neck_radius()}) {
            if (x > lo && x < hi) br.push_back(x);
        }
        std::sort(br.begin(), br.end());
    }
    return br;
}

}  // namespace

double heat_mass(const HeatEngine& engine, double t, double r_z) {
    const ModelManifold& model = engine.model();
    const int n = model.dimension();
    const double w = 14.0 * std::sqrt(t);
    const PanelRule rule = composite_gauss(window(model, r_z - w, r_z + w, 0.25 * std::sqrt(t)), 16);
    const auto h = engine.mode_heat(t, 0, r_z, rule.nodes, 0.0);
    double mass = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        mass += rule.weights[i] * h[i] * std::pow(model.warp(rule.nodes[i]).f, n - 1);
    }
    return mass;
}

double semigroup_defect(const HeatEngine& engine, int j, double t, double s, double r, double rp) {
    const ModelManifold& model = engine.model();
    const int n = model.dimension();
    const double w = 14.0 * std::sqrt(std::max(t, s));
    const PanelRule rule =
        composite_gauss(window(model, std::min(r, rp) - w, std::max(r, rp) + w, 0.25 * std::sqrt(std::min(t, s))), 16);
    const auto a = engine.mode_heat(t, j, r, rule.nodes, 0.0);
    const auto b = engine.mode_heat(s, j, rp, rule.nodes, 0.0);
    double lhs = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        lhs += rule.weights[i] * a[i] * b[i] * std::pow(model.warp(rule.nodes[i]).f, n - 1);
    }
    const double rhs = engine.mode_heat(t + s, j, r, {rp}, 0.0)[0];
    return std::abs(lhs - rhs) / std::abs(rhs);
}

}  // namespace endslab
