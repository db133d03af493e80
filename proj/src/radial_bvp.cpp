#include "endslab/radial_bvp.hpp"

#include "endslab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace endslab {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

using State = std::array<cplx, 2>;

struct Rhs {
    const ModelManifold* model;
    double lambda;  // j(j+n-2)
    cplx k2;
    double nm1;

    State operator()(double r, const State& y) const {
        const WarpValue w = model->warp(r);
        const cplx pot = lambda / (w.f * w.f) + k2;
        return {y[1], -nm1 * (w.df / w.f) * y[1] + pot * y[0]};
    }
    double rate(double r) const {
        const WarpValue w = model->warp(r);
        return std::sqrt(lambda) / w.f + std::sqrt(std::abs(k2)) + 1.0 / w.f;
    }
};

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State out = y;
    for (const auto& [c, kv] : terms) {
        out[0] += h * c * (*kv)[0];
        out[1] += h * c * (*kv)[1];
    }
    return out;
}

// Adaptive integration of the linear system from r0 to r1; `on_step` sees
// every accepted (r, y).  Linear in y, so the caller may rescale freely.
template <class OnStep>
State integrate(const Rhs& rhs, double r0, State y, double r1, double tol, OnStep&& on_step) {
    const double span = r1 - r0;
    if (span == 0.0) return y;
    const double dir = span > 0 ? 1.0 : -1.0;
    double r = r0;
    double h = dir * std::min(std::abs(span), 0.05 / rhs.rate(r0));
    State k1 = rhs(r, y);
    for (int iter = 0; iter < 2000000; ++iter) {
        if (dir * (r + h - r1) > 0.0) h = r1 - r;
        const State y2 = axpy(y, h, {{a21, &k1}});
        const State k2 = rhs(r + c2 * h, y2);
        const State y3 = axpy(y, h, {{a31, &k1}, {a32, &k2}});
        const State k3 = rhs(r + c3 * h, y3);
        const State y4 = axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        const State k4 = rhs(r + c4 * h, y4);
        const State y5 = axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        const State k5 = rhs(r + c5 * h, y5);
        const State y6 = axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        const State k6 = rhs(r + h, y6);
        const State yn = axpy(y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
        const State k7 = rhs(r + h, yn);
        State err{};
        for (int i = 0; i < 2; ++i) {
            err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                          e7 * k7[i]);
        }
        const double kap = rhs.rate(r + h);
        const double scale = tol * (std::max(std::abs(y[0]), std::abs(yn[0])) * kap +
                                    std::max(std::abs(y[1]), std::abs(yn[1])));
        const double en = (std::abs(err[0]) * kap + std::abs(err[1])) / scale;
        if (!std::isfinite(en)) throw NumericalError("neck integrator: non-finite state");
        if (en <= 1.0) {
            r += h;
            y = yn;
            k1 = k7;
            on_step(r, y);
            if (r == r1) return y;
        }
        const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < 1e-14 * (1.0 + std::abs(r))) {
            throw NumericalError("neck integrator: step size underflow");
        }
    }
    throw NumericalError("neck integrator: too many steps");
}

SolutionPoint make_point(const State& y, cplx log_scale) {
    return {Scaled(y[0], log_scale), Scaled(y[1], log_scale)};
}

Scaled pow_real(double base, double p) { return Scaled(1.0, p * std::log(base)); }

}  // namespace

RadialGrid RadialGrid::graded(const ModelManifold& model, int points, double grading) {
    if (points < 8) throw std::invalid_argument("RadialGrid: need at least 8 points");
    const double R = model.neck_radius();
    const double rmax = model.r_max();
    const bool two = model.two_ended();
    const int n_neck = std::max(4, points / 5);
    const int n_end = two ? (points - n_neck - 1) / 2 : points - n_neck - 1;
    const double h0 = (two ? 2.0 * R : R) / n_neck;
    const double len = rmax - R;
    double q;
    if (grading > 1.0) {
        q = std::pow(grading, 1.0 / std::max(1, n_end - 1));
    } else {
        // ratio such that the first end spacing matches the neck spacing
        double lo = 1.0 + 1e-12, hi = 2.0;
        auto total = [&](double qq) { return h0 * (std::pow(qq, n_end) - 1.0) / (qq - 1.0); };
        if (total(lo) >= len) {
            q = 1.0;
        } else {
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (total(mid) < len ? lo : hi) = mid;
            }
            q = 0.5 * (lo + hi);
        }
    }
    std::vector<double> end_offsets(n_end + 1, 0.0);
    double acc = 0.0;
    double h = 1.0;
    for (int i = 1; i <= n_end; ++i) {
        acc += h;
        end_offsets[i] = acc;
        h *= q;
    }
    for (double& v : end_offsets) v = v / acc * len;

    RadialGrid grid;
    if (two) {
        for (int i = n_end; i >= 1; --i) grid.nodes.push_back(-R - end_offsets[i]);
        for (int i = 0; i <= n_neck; ++i) grid.nodes.push_back(-R + 2.0 * R * i / n_neck);
        for (int i = 1; i <= n_end; ++i) grid.nodes.push_back(R + end_offsets[i]);
    } else {
        for (int i = 0; i <= n_neck; ++i) grid.nodes.push_back(R * i / n_neck);
        for (int i = 1; i <= n_end; ++i) grid.nodes.push_back(R + end_offsets[i]);
    }
    grid.nodes.front() = two ? -rmax : 0.0;
    grid.nodes.back() = rmax;
    return grid;
}

NeckTrajectory::NeckTrajectory(const ModelManifold& model, int j, cplx k, double r_start,
                               SolutionPoint start, double r_end, double tolerance)
    : model_(&model), j_(j), k_(k), tolerance_(tolerance) {
    const Scaled& base = start.value.log_abs() >= start.derivative.log_abs() ? start.value
                                                                             : start.derivative;
    cplx log_scale = base.expo;
    State y{start.value.mant * std::exp(start.value.expo - log_scale),
            start.derivative.mant * std::exp(start.derivative.expo - log_scale)};
    const Rhs rhs{model_, static_cast<double>(j) * (j + model.dimension() - 2), k * k,
                  model.dimension() - 1.0};
    nodes_.push_back({r_start, y[0], y[1], log_scale});
    State cur = y;
    cplx cur_scale = log_scale;
    // The integrator's state is rescaled between calls; integrate one
    // segment at a time so that the stored scale stays consistent.
    double r = r_start;
    const double dir = r_end > r_start ? 1.0 : -1.0;
    const double seg = 0.125 * std::abs(r_end - r_start);
    while (dir * (r_end - r) > 0.0) {
        const double target = dir * (r_end - r) <= seg * 1.0000001 ? r_end : r + dir * seg;
        cur = integrate(rhs, r, cur, target, tolerance_, [&](double rr, const State& yy) {
            if (rr != target) nodes_.push_back({rr, yy[0], yy[1], cur_scale});
        });
        r = target;
        const double a = std::max(std::abs(cur[0]), std::abs(cur[1]));
        if (a > 0.0) {
            cur[0] /= a;
            cur[1] /= a;
            cur_scale += std::log(a);
        }
        nodes_.push_back({r, cur[0], cur[1], cur_scale});
    }
    end_ = make_point(cur, cur_scale);
}

SolutionPoint NeckTrajectory::at(double r) const {
    if (nodes_.empty()) throw std::logic_error("NeckTrajectory: empty");
    // nodes_ are monotone in r (either direction); locate nearest
    const bool increasing = nodes_.back().r >= nodes_.front().r;
    auto cmp = [&](const Node& a, double x) { return increasing ? a.r < x : a.r > x; };
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), r, cmp);
    std::size_t idx;
    if (it == nodes_.end()) {
        idx = nodes_.size() - 1;
    } else if (it == nodes_.begin()) {
        idx = 0;
    } else {
        const std::size_t i1 = static_cast<std::size_t>(it - nodes_.begin());
        idx = std::abs(nodes_[i1].r - r) < std::abs(nodes_[i1 - 1].r - r) ? i1 : i1 - 1;
    }
    const Node& nd = nodes_[idx];
    if (nd.r == r) return make_point({nd.psi, nd.dpsi}, nd.log_scale);
    const Rhs rhs{model_, static_cast<double>(j_) * (j_ + model_->dimension() - 2), k_ * k_,
                  model_->dimension() - 1.0};
    const State y = integrate(rhs, nd.r, {nd.psi, nd.dpsi}, r, tolerance_, [](double, const State&) {});
    return make_point(y, nd.log_scale);
}

ModeGreen::ModeGreen(const ModelManifold& model, int j, cplx k, SolverOptions options)
    : model_(&model), j_(j), k_(k), options_(options) {
    if (j < 0) throw std::invalid_argument("ModeGreen: negative mode");
    if (k.real() < 0.0) throw std::domain_error("ModeGreen: Re k must be >= 0");
    const int n = model.dimension();
    if (!model.two_ended()) {
        w_ = Scaled(1.0);
        return;
    }
    const double R = model.neck_radius();
    const double cp = model.profile().end_offset(EndSide::plus);
    const double cm = model.profile().end_offset(EndSide::minus);
    symmetric_ = cp == cm;

    {
        Scaled d, dd;
        exterior_decaying(n, j, k, R - cp, d, dd);
        plus_traj_ = NeckTrajectory(model, j, k, R, {d, dd}, -R, options.tolerance);
        const SolutionPoint e = plus_traj_.end_point();
        const double rho = R - cm;
        const ExteriorPair p = exterior_pair(n, j, k, rho);
        const Scaled psi = e.value;
        const Scaled psi_rho = e.derivative * cplx(-1.0);
        const Scaled w = pow_real(rho, n - 1.0);
        alpha_plus_ = w * (psi * p.dg - psi_rho * p.g);
        beta_plus_ = w * (p.d * psi_rho - p.dd * psi);
    }
    if (symmetric_) {
        alpha_minus_ = alpha_plus_;
        beta_minus_ = beta_plus_;
    } else {
        Scaled d, dd;
        exterior_decaying(n, j, k, R - cm, d, dd);
        minus_traj_ = NeckTrajectory(model, j, k, -R, {d, dd * cplx(-1.0)}, R, options.tolerance);
        const SolutionPoint e = minus_traj_.end_point();
        const double rho = R - cp;
        const ExteriorPair p = exterior_pair(n, j, k, rho);
        const Scaled w = pow_real(rho, n - 1.0);
        alpha_minus_ = w * (e.value * p.dg - e.derivative * p.g);
        beta_minus_ = w * (p.d * e.derivative - p.dd * e.value);
    }
    w_ = beta_minus_;
    // dimensionless size test of W against the terms it is formed from
    const SolutionPoint a = psi_minus(0.0);
    const SolutionPoint b = psi_plus(0.0);
    const double f0 = std::pow(model.warp(0.0).f, n - 1);
    const double scale = std::log(f0) +
                         std::max((a.value * b.derivative).log_abs(), (a.derivative * b.value).log_abs());
    if (w_.is_zero() || w_.log_abs() - scale < std::log(options.min_wronskian)) {
        throw NumericalError("ModeGreen: Wronskian below threshold (resonance)");
    }
}

SolutionPoint ModeGreen::psi_plus(double r) const {
    const int n = model_->dimension();
    if (!model_->two_ended()) {
        SolutionPoint s;
        exterior_decaying(n, j_, k_, std::max(r, 1e-200), s.value, s.derivative);
        return s;
    }
    const double R = model_->neck_radius();
    if (r >= R) {
        SolutionPoint s;
        exterior_decaying(n, j_, k_, model_->end_radius(r), s.value, s.derivative);
        return s;
    }
    if (r > -R) return plus_traj_.at(r);
    const ExteriorPair p = exterior_pair(n, j_, k_, model_->end_radius(r));
    return {alpha_plus_ * p.d + beta_plus_ * p.g,
            (alpha_plus_ * p.dd + beta_plus_ * p.dg) * cplx(-1.0)};
}

SolutionPoint ModeGreen::psi_minus(double r) const {
    const int n = model_->dimension();
    if (!model_->two_ended()) {
        const ExteriorPair p = exterior_pair(n, j_, k_, std::max(r, 1e-200));
        return {p.g, p.dg};
    }
    if (symmetric_) {
        const SolutionPoint s = psi_plus(-r);
        return {s.value, s.derivative * cplx(-1.0)};
    }
    const double R = model_->neck_radius();
    if (r <= -R) {
        SolutionPoint s;
        exterior_decaying(n, j_, k_, model_->end_radius(r), s.value, s.derivative);
        s.derivative = s.derivative * cplx(-1.0);
        return s;
    }
    if (r < R) return minus_traj_.at(r);
    const ExteriorPair p = exterior_pair(n, j_, k_, model_->end_radius(r));
    return {alpha_minus_ * p.d + beta_minus_ * p.g, alpha_minus_ * p.dd + beta_minus_ * p.dg};
}

Scaled ModeGreen::wronskian_at(double r) const {
    const SolutionPoint a = psi_minus(r);
    const SolutionPoint b = psi_plus(r);
    const double f = model_->warp(r).f;
    return (a.value * b.derivative - a.derivative * b.value) *
           cplx(-std::pow(f, model_->dimension() - 1));
}

Scaled ModeGreen::green(double r, double rp) const {
    const double lo = std::min(r, rp);
    const double hi = std::max(r, rp);
    return psi_minus(lo).value * psi_plus(hi).value / w_;
}

Scaled ModeGreen::green_dr(double r, double rp) const {
    if (r < rp) return psi_minus(r).derivative * psi_plus(rp).value / w_;
    if (r > rp) return psi_minus(rp).value * psi_plus(r).derivative / w_;
    const Scaled left = psi_minus(r).derivative * psi_plus(rp).value / w_;
    const Scaled right = psi_minus(rp).value * psi_plus(r).derivative / w_;
    return (left + right) * cplx(0.5);
}

double ModeGreen::wronskian_variation(const std::vector<double>& nodes) const {
    double worst = 0.0;
    for (double r : nodes) {
        if (!model_->two_ended() && r <= 0.0) continue;
        const Scaled dev = (wronskian_at(r) - w_) / w_;
        worst = std::max(worst, std::abs(dev.value()));
    }
    return worst;
}

std::size_t ModeGreenCache::KeyHash::operator()(const Key& key) const {
    const std::size_t h1 = std::hash<int>{}(key.j);
    const std::size_t h2 = std::hash<double>{}(key.re);
    const std::size_t h3 = std::hash<double>{}(key.im);
    return h1 ^ (h2 * 0x9e3779b97f4a7c15ULL) ^ (h3 * 0xc2b2ae3d27d4eb4fULL);
}

std::shared_ptr<const ModeGreen> ModeGreenCache::get(int j, cplx k) {
    const Key key{j, k.real(), k.imag()};
    {
        std::shared_lock lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    auto built = std::make_shared<const ModeGreen>(*model_, j, k, options_);
    std::unique_lock lock(mutex_);
    entries_[key] = built;
    return built;
}

std::size_t ModeGreenCache::size() const {
    std::shared_lock lock(mutex_);
    return entries_.size();
}

ExteriorValue exterior_solution(const ModelManifold& model, int j, cplx k, double r) {
    if (!model.in_exact_region(r) || std::abs(r) > model.r_max() || r < model.r_min()) {
        throw std::domain_error("exterior_solution: r outside the exact region");
    }
    const EndSide side = model.side_of(r);
    const double rho_norm = model.r_max() - model.profile().end_offset(side);
    ExteriorValue v = exterior_solution(model.dimension(), j, k, model.end_radius(r), rho_norm);
    if (side == EndSide::minus && model.two_ended()) v.derivative = -v.derivative;
    return v;
}

std::vector<SolutionPoint> solve_homogeneous(const ModelManifold& model, int j, cplx k,
                                             EndSide end, const RadialGrid& grid,
                                             SolverOptions options) {
    const ModeGreen g(model, j, k, options);
    const bool plus = end == EndSide::plus;
    const double r_norm = plus || !model.two_ended() ? model.r_max() : model.r_min();
    const Scaled norm = (plus ? g.psi_plus(r_norm) : g.psi_minus(r_norm)).value;
    std::vector<SolutionPoint> out;
    out.reserve(grid.size());
    for (double r : grid.nodes) {
        const SolutionPoint s = plus ? g.psi_plus(r) : g.psi_minus(r);
        out.push_back({s.value / norm, s.derivative / norm});
    }
    return out;
}

ModeGreen mode_green(const ModelManifold& model, int j, cplx k, SolverOptions options) {
    return ModeGreen(model, j, k, options);
}

ResolventOutput apply_resolvent(const ModeGreen& green, const RadialSource& v,
                                const std::vector<double>& nodes, double support_lo,
                                double support_hi, int order) {
    const ModelManifold& model = green.model();
    const int n = model.dimension();
    ResolventOutput out;
    out.value.assign(nodes.size(), cplx{});
    out.derivative.assign(nodes.size(), cplx{});
    if (!(support_hi > support_lo)) return out;
    if (!std::is_sorted(nodes.begin(), nodes.end())) {
        throw std::invalid_argument("apply_resolvent: nodes must be sorted");
    }

    std::vector<double> br{support_lo, support_hi};
    for (double r : nodes) {
        if (r > support_lo && r < support_hi) br.push_back(r);
    }
    if (model.two_ended()) {
        for (double r : {-model.neck_radius(), 0.0, model.neck_radius()}) {
            if (r > support_lo && r < support_hi) br.push_back(r);
        }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());

    // refine panels: bounded by the local scale, the oscillation/decay length
    // of the homogeneous solutions, and a fraction of the support
    const double kabs = std::abs(green.k());
    const double cap = (support_hi - support_lo) / 32.0;
    std::vector<double> fine{br.front()};
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        const double a = br[i];
        const double b = br[i + 1];
        double x = a;
        while (x < b) {
            double hmax = std::min(cap, 0.05 + 0.1 * std::abs(x));
            if (kabs > 0.0) hmax = std::min(hmax, 1.0 / kabs);
            const double next = (b - x) <= hmax * 1.5 ? b : x + hmax;
            fine.push_back(next);
            x = next;
        }
    }

    const GaussRule& rule = gauss_legendre(order);
    const std::size_t panels = fine.size() - 1;
    std::vector<Scaled> a_part(panels), b_part(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = fine[p];
        const double hi = fine[p + 1];
        const double half = 0.5 * (hi - lo);
        const double mid = 0.5 * (hi + lo);
        Scaled sa, sb;
        for (int q = 0; q < order; ++q) {
            const double x = mid + half * rule.nodes[q];
            const double vx = v(x);
            if (vx == 0.0) continue;
            const double wt = half * rule.weights[q] * vx * std::pow(model.warp(x).f, n - 1);
            sa = sa + green.psi_minus(x).value * cplx(wt);
            sb = sb + green.psi_plus(x).value * cplx(wt);
        }
        a_part[p] = sa;
        b_part[p] = sb;
    }
    // cumulative sums: A_i = int_{lo}^{fine_i}, B_i = int_{fine_i}^{hi}
    std::vector<Scaled> A(fine.size()), B(fine.size());
    for (std::size_t p = 0; p < panels; ++p) A[p + 1] = A[p] + a_part[p];
    for (std::size_t p = panels; p-- > 0;) B[p] = B[p + 1] + b_part[p];

    const Scaled& w = green.wronskian();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double r = nodes[i];
        Scaled ai, bi;
        if (r <= support_lo) {
            bi = B.front();
        } else if (r >= support_hi) {
            ai = A.back();
        } else {
            const auto it = std::lower_bound(fine.begin(), fine.end(), r);
            const std::size_t idx = static_cast<std::size_t>(it - fine.begin());
            ai = A[idx];
            bi = B[idx];
        }
        const SolutionPoint pm = green.psi_minus(r);
        const SolutionPoint pp = green.psi_plus(r);
        out.value[i] = ((pp.value * ai + pm.value * bi) / w).value();
        out.derivative[i] = ((pp.derivative * ai + pm.derivative * bi) / w).value();
    }
    return out;
}

}  // namespace endslab
