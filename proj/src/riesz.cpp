#include "endslab/riesz.hpp"

#include "endslab/parallel.hpp"
#include "endslab/quadrature.hpp"
#include "endslab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace endslab {

namespace {

constexpr double kWindow = 40.0;   // contributions beyond |x - s| > 40 / k are dropped
constexpr double kLocal = 20.0;    // local expansion above k = kLocal / scale(x)

void add_panels(std::vector<double>& nodes, std::vector<double>& weights, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        nodes.push_back(mid + half * rule.nodes[i]);
        weights.push_back(half * rule.weights[i]);
    }
}

// breakpoints on [lo, hi] with widths <= ratio * |x| + floor, split at the
// neck and at `extra`.
std::vector<double> radial_breaks(const ModelManifold& model, double lo, double hi, double ratio,
                                  double floor, const std::vector<double>& extra = {}) {
    std::vector<double> fixed{lo, hi};
    for (double x : extra) fixed.push_back(x);
    if (model.two_ended()) {
        for (double x : {-model.neck_radius(), 0.0, model.neck_radius()}) fixed.push_back(x);
    }
    std::vector<double> br;
    for (double x : fixed) {
        if (x >= lo && x <= hi) br.push_back(x);
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    std::vector<double> out{br.front()};
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double a = br[i], b = br[i + 1];
        double x = a;
        while (x < b) {
            const double h = floor + ratio * std::abs(x);
            const double next = (b - x) <= 1.5 * h ? b : x + h;
            out.push_back(next);
            x = next;
        }
    }
    return out;
}

double fd_derivative(const std::function<double(double)>& g, double x) {
    const double h = 1e-4 * std::max(1.0, std::abs(x));
    return (g(x - 2 * h) - 8 * g(x - h) + 8 * g(x + h) - g(x + 2 * h)) / (12 * h);
}

double apply_operator(const ModelManifold& model, int j, const std::function<double(double)>& g, double x) {
    double h = 1e-3 * std::max(1.0, std::abs(x));
    if (!model.two_ended() && x - 3 * h <= 0.0) h = std::min(h, 0.25 * x);
    if (!(h > 0.0)) throw std::domain_error("operator: r must be > 0 on a one-end model");
    const RadialOperator op{&model, j, 0.0};
    return radial_apply_at(op, [&](double r) { return cplx(g(r), 0.0); }, x, h).real();
}

}  // namespace

QuadratureSpec QuadratureSpec::make(double k_split, double k_max, int decades_below, int panels_per_decade,
                                    int order) {
    if (!(k_split > 0.0 && k_max > k_split) || decades_below < 1 || panels_per_decade < 1 || order < 2) {
        throw std::invalid_argument("QuadratureSpec: bad parameters");
    }
    QuadratureSpec q;
    q.k_split = k_split;
    q.k_max = k_max;
    q.decades_below = decades_below;
    q.panels_per_decade = panels_per_decade;
    q.order = order;
    const double k0 = k_split * std::pow(10.0, -decades_below);
    add_panels(q.nodes, q.weights, 0.0, k0, order);
    const int below = decades_below * panels_per_decade;
    for (int i = 0; i < below; ++i) {
        const double a = k0 * std::pow(10.0, double(i) / panels_per_decade);
        const double b = k0 * std::pow(10.0, double(i + 1) / panels_per_decade);
        add_panels(q.nodes, q.weights, a, b, order);
    }
    const int above = std::max(1, int(std::ceil(std::log10(k_max / k_split) * panels_per_decade)));
    for (int i = 0; i < above; ++i) {
        const double a = k_split * std::pow(k_max / k_split, double(i) / above);
        const double b = k_split * std::pow(k_max / k_split, double(i + 1) / above);
        add_panels(q.nodes, q.weights, a, b, order);
    }
    return q;
}

QuadratureSpec QuadratureSpec::coarser() const {
    if (panels_per_decade < 2) throw std::logic_error("QuadratureSpec: cannot coarsen further");
    return make(k_split, k_max, decades_below, panels_per_decade / 2, order);
}

double zonal_harmonic(int j, int n, double c) {
    const double a = 0.5 * (n - 2);
    return gegenbauer(j, a, c) / gegenbauer(j, a, 1.0);
}

double zonal_harmonic_derivative(int j, int n, double c) {
    if (j == 0) return 0.0;
    const double a = 0.5 * (n - 2);
    return 2.0 * a * gegenbauer(j - 1, a + 1.0, c) / gegenbauer(j, a, 1.0);
}

double FieldOnM::value(const ModelManifold& model, const PointM& z) const {
    const double c = z.omega[0];
    double v = 0.0;
    for (const auto& m : modes) {
        if (z.r >= m.lo && z.r <= m.hi) v += m.profile(z.r) * zonal_harmonic(m.j, model.dimension(), c);
    }
    return v;
}

double OneFormSample::norm() const { return std::hypot(dr, angular); }

RieszEngine::RieszEngine(const ModelManifold& model, QuadratureSpec spec, ModeSumOptions modes,
                         SolverOptions solver)
    : model_(model), spec_(std::move(spec)), modes_(modes), cache_(model_, solver) {
    if (spec_.nodes.empty()) spec_ = QuadratureSpec::make();
}

namespace {

struct SweepRequest {
    int j;
    std::function<double(double)> source;  // resolvent applied to this
    double lo, hi;
    std::vector<double> nodes;             // sorted
    std::vector<double> k_cut;             // per node: k nodes >= k_cut are left to the remainder
};

}  // namespace

// (2/pi) sum_k w_k (Delta + k^2)^{-1} source at each node, k < k_cut(node).
static RadialSamples k_sweep(ModeGreenCache& cache, const QuadratureSpec& spec, const SweepRequest& rq) {
    const std::size_t nk = spec.nodes.size();
    const std::size_t m = rq.nodes.size();
    std::vector<std::vector<double>> val(nk), der(nk);
    parallel_for(nk, [&](std::size_t i) {
        const double k = spec.nodes[i];
        std::vector<std::size_t> active;
        for (std::size_t q = 0; q < m; ++q) {
            if (k >= rq.k_cut[q]) continue;
            const double x = rq.nodes[q];
            if (std::min(rq.hi, x + kWindow / k) <= std::max(rq.lo, x - kWindow / k)) continue;
            active.push_back(q);
        }
        val[i].assign(m, 0.0);
        der[i].assign(m, 0.0);
        if (active.empty()) return;
        const auto green = cache.get(rq.j, k);
        // one sweep over the whole support unless per-node windows are cheaper
        if (k * (rq.hi - rq.lo) <= 2.0 * kWindow * double(active.size())) {
            std::vector<double> xs;
            for (auto q : active) xs.push_back(rq.nodes[q]);
            const ResolventOutput out = apply_resolvent(*green, rq.source, xs, rq.lo, rq.hi);
            for (std::size_t a = 0; a < active.size(); ++a) {
                val[i][active[a]] = out.value[a].real();
                der[i][active[a]] = out.derivative[a].real();
            }
        } else {
            for (auto q : active) {
                const double x = rq.nodes[q];
                const double a = std::max(rq.lo, x - kWindow / k);
                const double b = std::min(rq.hi, x + kWindow / k);
                const ResolventOutput out = apply_resolvent(*green, rq.source, {x}, a, b);
                val[i][q] = out.value[0].real();
                der[i][q] = out.derivative[0].real();
            }
        }
    });
    RadialSamples s;
    s.r = rq.nodes;
    s.value.assign(m, 0.0);
    s.derivative.assign(m, 0.0);
    const double c = 2.0 / std::numbers::pi;
    for (std::size_t i = 0; i < nk; ++i) {
        for (std::size_t q = 0; q < m; ++q) {
            s.value[q] += c * spec.weights[i] * val[i][q];
            s.derivative[q] += c * spec.weights[i] * der[i][q];
        }
    }
    return s;
}

namespace {

// smallest k-panel breakpoint >= target, capped at k_max (nodes below it are summed exactly)
double panel_cut(const QuadratureSpec& spec, double target) {
    if (target >= spec.k_max) return spec.k_max;
    const double k0 = spec.k_split * std::pow(10.0, -spec.decades_below);
    if (target <= k0) return k0;
    double b = k0;
    const double step = std::pow(10.0, 1.0 / spec.panels_per_decade);
    while (b < target && b < spec.k_split) b *= step;
    if (b >= spec.k_split && b < target) {
        const int above = std::max(1, int(std::ceil(std::log10(spec.k_max / spec.k_split) * spec.panels_per_decade)));
        const double s2 = std::pow(spec.k_max / spec.k_split, 1.0 / above);
        b = spec.k_split;
        while (b < target) b *= s2;
    }
    return std::min(b * (1.0 + 1e-12), spec.k_max);
}

}  // namespace

RadialSamples RieszEngine::inverse_sqrt(int j, const std::function<double(double)>& g, double lo, double hi,
                                        const std::vector<double>& nodes, double scale) {
    if (!std::is_sorted(nodes.begin(), nodes.end())) throw std::invalid_argument("inverse_sqrt: nodes must be sorted");
    SweepRequest rq{j, [&](double r) { return r < lo || r > hi ? 0.0 : g(r); }, lo, hi, nodes, {}};
    for (double x : nodes) rq.k_cut.push_back(panel_cut(spec_, kLocal / (scale * std::max(1.0, std::abs(x)))));
    RadialSamples s = k_sweep(cache_, spec_, rq);
    const double c = 2.0 / std::numbers::pi;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double x = nodes[q];
        if (x <= lo || x >= hi) continue;
        const double kc = rq.k_cut[q] * (1.0 - 1e-12);
        // int_{kc}^infty (L + k^2)^{-1} g dk = g/kc - Lg/(3 kc^3) + ...
        auto rem = [&](double r) { return rq.source(r) / kc - apply_operator(model_, j, rq.source, r) / (3 * kc * kc * kc); };
        s.value[q] += c * rem(x);
        s.derivative[q] += c * fd_derivative(rem, x);
    }
    return s;
}

RadialSamples RieszEngine::sqrt_laplacian(int j, const std::function<double(double)>& g, double lo, double hi,
                                          const std::vector<double>& nodes) {
    auto gs = [&](double r) { return r < lo || r > hi ? 0.0 : g(r); };
    auto lg = [&](double r) { return r <= lo || r >= hi ? 0.0 : apply_operator(model_, j, gs, r); };
    SweepRequest rq{j, lg, lo, hi, nodes, std::vector<double>(nodes.size(), spec_.k_max)};
    RadialSamples s = k_sweep(cache_, spec_, rq);
    const double c = 2.0 / std::numbers::pi;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double x = nodes[q];
        if (x <= lo || x >= hi) continue;
        auto rem = [&](double r) { return lg(r) / spec_.k_max; };
        s.value[q] += c * rem(x);
        s.derivative[q] += c * fd_derivative(rem, x);
    }
    return s;
}

std::vector<OneFormSample> RieszEngine::riesz_apply(const FieldOnM& g, const std::vector<PointM>& points) {
    const int n = model_.dimension();
    std::vector<double> rs;
    for (const auto& p : points) rs.push_back(p.r);
    std::sort(rs.begin(), rs.end());
    rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
    std::vector<OneFormSample> out(points.size());
    for (const auto& mode : g.modes) {
        const RadialSamples s = inverse_sqrt(mode.j, mode.profile, mode.lo, mode.hi, rs);
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto it = std::lower_bound(rs.begin(), rs.end(), points[i].r);
            const std::size_t q = it - rs.begin();
            const double c = std::clamp(points[i].omega[0], -1.0, 1.0);
            const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
            out[i].dr += s.derivative[q] * zonal_harmonic(mode.j, n, c);
            out[i].angular += -sn * zonal_harmonic_derivative(mode.j, n, c) * s.value[q] / model_.warp(points[i].r).f;
        }
    }
    return out;
}

std::vector<double> RieszEngine::radial_kernel(int j, double r_z, const std::vector<double>& s) {
    const std::size_t nk = spec_.nodes.size();
    std::vector<std::vector<double>> part(nk, std::vector<double>(s.size(), 0.0));
    parallel_for(nk, [&](std::size_t i) {
        const double k = spec_.nodes[i];
        std::shared_ptr<const ModeGreen> green;
        for (std::size_t q = 0; q < s.size(); ++q) {
            if (s[q] == r_z) throw std::domain_error("radial_kernel: s = r_z");
            if (k * std::abs(s[q] - r_z) > kWindow) continue;
            if (!green) green = cache_.get(j, k);
            part[i][q] = green->green_dr(r_z, s[q]).value().real();
        }
    });
    std::vector<double> out(s.size(), 0.0);
    for (std::size_t i = 0; i < nk; ++i) {
        for (std::size_t q = 0; q < s.size(); ++q) out[q] += 2.0 / std::numbers::pi * spec_.weights[i] * part[i][q];
    }
    return out;
}

OneFormSample RieszEngine::kernel(const PointM& z, const PointM& zp) {
    const int n = model_.dimension();
    const double c = angle_cosine(z, zp);
    if (z.r == zp.r && c >= 1.0 - 1e-15) throw std::domain_error("riesz kernel: z = z'");
    const double sn = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double f = model_.warp(z.r).f;
    // lower bound for the distance: chord length when both points lie on one exact end
    double dist = std::abs(z.r - zp.r);
    if (model_.in_exact_region(z.r) && model_.in_exact_region(zp.r) &&
        (!model_.two_ended() || model_.side_of(z.r) == model_.side_of(zp.r))) {
        dist = std::max(dist, end_distance(model_, z, zp));
    }
    const double fmax = std::max(f, model_.warp(zp.r).f);
    const std::size_t nk = spec_.nodes.size();
    std::vector<double> dr(nk, 0.0), ang(nk, 0.0);
    parallel_for(nk, [&](std::size_t i) {
        const double k = spec_.nodes[i];
        if (k * dist > kWindow) return;
        // modes stay O(1) up to j ~ k f before the sum starts to converge
        ModeSumOptions opt = modes_;
        opt.j_max = std::max(opt.j_max, std::min(512, int(2.0 * k * fmax) + 16));
        dr[i] = sum_modes([&](int j) { return cache_.get(j, k)->green_dr(z.r, zp.r).value(); }, c, n, opt)
                    .value.real();
        if (sn > 0.0) {
            ang[i] = sum_weighted([&](int j) { return cache_.get(j, k)->green(z.r, zp.r).value(); },
                                  [&](int j) { return -sn * zonal_kernel_derivative(j, c, n) / f; }, opt)
                         .value.real();
        }
    });
    OneFormSample out;
    for (std::size_t i = 0; i < nk; ++i) {
        out.dr += 2.0 / std::numbers::pi * spec_.weights[i] * dr[i];
        out.angular += 2.0 / std::numbers::pi * spec_.weights[i] * ang[i];
    }
    return out;
}

RadialSamples sqrt_laplacian_apply(const ModelManifold& model, const FieldMode& g, const std::vector<double>& nodes,
                                   QuadratureSpec spec) {
    RieszEngine engine(model, std::move(spec));
    return engine.sqrt_laplacian(g.j, g.profile, g.lo, g.hi, nodes);
}

RieszRow riesz_kernel_row(RieszEngine& engine, const HarmonicProfile& profile, const PointM& z, EndSide end,
                          const std::vector<double>& r_prime) {
    const ModelManifold& model = engine.model();
    const int n = model.dimension();
    RieszRow row;
    row.r_prime = r_prime;
    std::vector<double> pole(n, 0.0);
    pole[0] = 1.0;
    for (double rho : r_prime) {
        const PointM zp = point_on_end(model, end, rho, pole);
        if (!model.in_exact_region(zp.r)) throw std::invalid_argument("riesz row: r' outside the exact end");
        const OneFormSample t = engine.kernel(z, zp);
        row.dr.push_back(t.dr);
        row.angular.push_back(t.angular);
        row.magnitude.push_back(t.norm());
    }
    row.fit = fit_loglog(r_prime, row.magnitude);
    row.coefficient = row.magnitude.back() * std::pow(r_prime.back(), n - 1.0);
    row.dphi = model.two_ended() ? std::abs(profile.dphi(z.r)) : 0.0;
    row.flagged = row.fit.r2 < 0.98;
    return row;
}

LpNorm lp_norm(const ModelManifold& model, const std::function<double(double)>& g, double p, double lo,
               double hi) {
    if (!(p >= 1.0)) throw std::domain_error("lp_norm: p must be >= 1");
    if (!(hi > lo)) return {};
    const int n = model.dimension();
    const double omega = sphere_volume(n);
    const auto br = radial_breaks(model, lo, hi, 0.1, 0.02);
    double total = 0.0;
    const GaussRule& rule = gauss_legendre(10);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double a = br[i], b = br[i + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = mid + half * rule.nodes[q];
            total += half * rule.weights[q] * std::pow(std::abs(g(x)), p) * omega * std::pow(model.warp(x).f, n - 1);
        }
    }
    LpNorm out;
    out.value = std::pow(total, 1.0 / p);
    auto density = [&](double x) { return std::abs(x) * std::pow(std::abs(g(x)), p) * omega * std::pow(model.warp(x).f, n - 1); };
    // only the far edge(s) can signal growth with the support
    const double far = std::max(std::abs(lo), std::abs(hi));
    double edge = 0.0;
    if (std::abs(hi) >= 0.5 * far) edge = std::max(edge, density(hi - 1e-9 * std::max(1.0, std::abs(hi))));
    if (std::abs(lo) >= 0.5 * far) edge = std::max(edge, density(lo + 1e-9 * std::max(1.0, std::abs(lo))));
    out.diverging = total > 0.0 && edge > 0.01 * total;
    return out;
}

double ThresholdFamily::operator()(const ModelManifold& model, double r) const {
    if (r < lo(model) || r > hi(model)) return 0.0;
    const double rho = model.end_radius(r);
    auto step = [](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= 1.0) return 1.0;
        const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
        return a / (a + b);
    };
    const double chi = step((rho - rho0) / rho0) * (1.0 - step((rho - 0.5 * K) / (0.5 * K)));
    return chi / (rho * std::log(rho));
}

double ThresholdFamily::lo(const ModelManifold& model) const {
    std::vector<double> pole(model.dimension(), 0.0);
    pole[0] = 1.0;
    return point_on_end(model, EndSide::plus, rho0, pole).r;
}

double ThresholdFamily::hi(const ModelManifold& model) const {
    return lo(model) + (K - rho0);
}

const RieszEngine::ThresholdField& RieszEngine::threshold_field(double rho0, double K, double r_z0) {
    const std::array<double, 3> key{rho0, K, r_z0};
    if (auto it = threshold_memo_.find(key); it != threshold_memo_.end()) return it->second;
    const int n = model_.dimension();
    ThresholdFamily F{rho0, K};
    const double lo = F.lo(model_), hi = F.hi(model_);
    auto f = [&](double r) { return F(model_, r); };
    ThresholdField out;

    // sweep path: Delta^{-1/2} F by resolvent sweeps, differentiated at z0
    out.t_sweep = inverse_sqrt(0, f, lo, hi, {r_z0}).derivative[0];

    // pairing path: j = 0 radial Riesz kernel against F
    const auto br = radial_breaks(model_, lo, hi, 0.1, 0.02, {lo + rho0, hi - 0.5 * K});
    std::vector<double> xs, ws;
    for (std::size_t i = 0; i + 1 < br.size(); ++i) add_panels(xs, ws, br[i], br[i + 1], 10);
    const auto kern = radial_kernel(0, r_z0, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out.t_pairing += ws[i] * kern[i] * f(xs[i]) * std::pow(model_.warp(xs[i]).f, n - 1);
    }

    // T F on the whole model
    const auto nb = radial_breaks(model_, model_.r_min(), model_.r_max(), 0.5, 0.1, {lo, lo + rho0, hi - 0.5 * K, hi});
    for (std::size_t i = 0; i + 1 < nb.size(); ++i) add_panels(out.r, out.w, nb[i], nb[i + 1], 6);
    out.tf = inverse_sqrt(0, f, lo, hi, out.r).derivative;
    return threshold_memo_.emplace(key, std::move(out)).first->second;
}

ExperimentReport threshold_experiment(RieszEngine& engine, double p, const std::vector<double>& K_list,
                                      const PointM& z0, double rho0) {
    const ModelManifold& model = engine.model();
    const int n = model.dimension();
    if (K_list.size() < 3) throw std::invalid_argument("threshold: need at least three K values");
    const double kmax = *std::max_element(K_list.begin(), K_list.end());
    if (model.r_max() < 10.0 * kmax) throw std::invalid_argument("threshold: model r_max must be >= 10 max(K)");
    if (!(rho0 > 1.0)) throw std::invalid_argument("threshold: rho0 must exceed 1");
    ExperimentReport rep;
    rep.experiment = "riesz-threshold";
    rep.columns = {"K", "norm_p", "T_at_z0", "T_at_z0_pairing", "norm_TF_p", "ratio"};
    rep.notes.push_back("divergence/stability evidence on a finite family; not an operator-norm proof");
    std::vector<double> norms, tz, ratios, loglog;
    for (double K : K_list) {
        ThresholdFamily F{rho0, K};
        const double lo = F.lo(model), hi = F.hi(model);
        auto f = [&](double r) { return F(model, r); };
        const LpNorm nf = lp_norm(model, f, p, lo, hi);
        const auto& field = engine.threshold_field(rho0, K, z0.r);
        const double ta = field.t_sweep, tb = field.t_pairing;
        const double omega = sphere_volume(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < field.r.size(); ++i) {
            acc += field.w[i] * std::pow(std::abs(field.tf[i]), p) * omega * std::pow(model.warp(field.r[i]).f, n - 1);
        }
        const double ntf = std::pow(acc, 1.0 / p);
        rep.add_row({K, nf.value, ta, tb, ntf, ntf / nf.value});
        norms.push_back(nf.value);
        tz.push_back(ta);
        ratios.push_back(ntf / nf.value);
        loglog.push_back(std::log(std::log(K)));
        rep.check_close("pairing_K" + format_double(K), std::abs(tb / ta - 1.0), 0.0, 1e-3,
                        "(T F)(z0) by resolvent sweep vs kernel pairing");
    }
    const auto [mn, mx] = std::minmax_element(norms.begin(), norms.end());
    const double norm_var = (*mx - *mn) / *mx;
    bool increasing = true;
    for (std::size_t i = 1; i < tz.size(); ++i) increasing = increasing && std::abs(tz[i]) > std::abs(tz[i - 1]);
    std::vector<double> atz;
    for (double v : tz) atz.push_back(std::abs(v));
    const LogLogFit lin = fit_linear(loglog, atz);
    rep.fits["T_vs_loglogK.slope"] = {lin.slope, lin.slope_stderr, lin.residual};
    rep.fits["T_vs_loglogK.r2"] = {lin.r2, 0.0, lin.residual};
    rep.fits["norm_p_variation"] = {norm_var, 0.0, 0.0};
    // top decade of K: samples with K >= K_max / 10
    double rlo = 1e300, rhi = -1e300;
    for (std::size_t i = 0; i < K_list.size(); ++i) {
        if (K_list[i] >= kmax / 10.0 * (1 - 1e-12)) {
            rlo = std::min(rlo, ratios[i]);
            rhi = std::max(rhi, ratios[i]);
        }
    }
    rep.fits["ratio_top_decade_variation"] = {(rhi - rlo) / rhi, 0.0, 0.0};
    const double first_inc = atz[1] - atz[0], last_inc = atz.back() - atz[atz.size() - 2];
    rep.fits["T_last_increment"] = {last_inc, 0.0, 0.0};
    if (model.two_ended() && p >= n) {
        rep.check_close("norm_p_variation", norm_var, 0.0, 0.01, "||F_K||_p stabilizes for p >= n");
        rep.check_true("T_at_z0_increasing", increasing, "(T F_K)(z0) strictly increasing in K");
        rep.check_true("T_loglog_r2", lin.r2 > 0.99, "linear in log log K, R^2 = " + format_double(lin.r2));
    } else if (model.two_ended()) {
        rep.check_close("ratio_top_decade_variation", (rhi - rlo) / rhi, 0.0, 0.05,
                        "||T F_K||_p / ||F_K||_p over the top decade of K");
    } else {
        rep.check_true("T_at_z0_converges", std::abs(last_inc) < 0.1 * std::abs(first_inc),
                       "increments of (T F_K)(z0) shrink on the one-end model");
    }
    return rep;
}

}  // namespace endslab
