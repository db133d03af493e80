#include "endslab/resolvent.hpp"

#include "endslab/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace endslab {

double euclidean_resolvent(int n, double k, double d) {
    if (!(k >= 0.0)) throw std::domain_error("euclidean_resolvent: k must be >= 0");
    return euclidean_resolvent_kernel(n, k, d).real();
}

double end_cutoff(const ModelManifold& model, EndSide end, double r) {
    const double R = model.neck_radius();
    const double s = end == EndSide::plus ? r : -r;
    if (s <= R) return 0.0;
    if (s >= 2.0 * R) return 1.0;
    const double t = (s - R) / R;
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

ResolventEngine::ResolventEngine(const ModelManifold& model, KernelOptions options)
    : model_(model), options_(options), cache_(model_, options.solver) {}

KernelSample ResolventEngine::kernel(cplx k, const PointM& z, const PointM& zp) {
    const double c = angle_cosine(z, zp);
    if (z.r == zp.r && c >= 1.0 - 1e-15) throw std::domain_error("resolvent: z = z'");
    const int n = model_.dimension();
    KernelSample s;
    s.diagnostic = sum_modes([&](int j) { return cache_.get(j, k)->green(z.r, zp.r).value(); }, c, n,
                             options_.modes);
    s.value = s.diagnostic.value;
    return s;
}

KernelSample ResolventEngine::kernel_dr(cplx k, const PointM& z, const PointM& zp) {
    const double c = angle_cosine(z, zp);
    if (z.r == zp.r && c >= 1.0 - 1e-15) throw std::domain_error("resolvent: z = z'");
    const int n = model_.dimension();
    KernelSample s;
    s.diagnostic = sum_modes([&](int j) { return cache_.get(j, k)->green_dr(z.r, zp.r).value(); }, c,
                             n, options_.modes);
    s.value = s.diagnostic.value;
    return s;
}

double resolvent(const ModelManifold& model, double k, const PointM& z, const PointM& zp,
                 KernelOptions options) {
    if (!(k >= 0.0)) throw std::domain_error("resolvent: k must be >= 0");
    ResolventEngine engine(model, options);
    return engine.kernel(k, z, zp).value.real();
}

PointM point_on_end(const ModelManifold& model, EndSide end, double rho, std::vector<double> omega) {
    if (!model.two_ended()) return PointM(rho, std::move(omega));
    const double c = model.profile().end_offset(end);
    return PointM(end == EndSide::plus ? rho + c : -rho - c, std::move(omega));
}

double end_distance(const ModelManifold& model, const PointM& a, const PointM& b) {
    if (model.two_ended() && model.side_of(a.r) != model.side_of(b.r)) {
        throw std::invalid_argument("end_distance: points on different ends");
    }
    const double ra = model.end_radius(a.r);
    const double rb = model.end_radius(b.r);
    const double c = angle_cosine(a, b);
    return std::sqrt(std::max(0.0, ra * ra + rb * rb - 2.0 * ra * rb * c));
}

namespace {

std::vector<double> pole(int n) {
    std::vector<double> w(n, 0.0);
    w[0] = 1.0;
    return w;
}

}  // namespace

Rb0Result rb0_leading_coefficient(ResolventEngine& engine, const PointM& z, EndSide end,
                                  double kappa, const std::vector<double>& r_prime) {
    const ModelManifold& model = engine.model();
    const int n = model.dimension();
    if (r_prime.size() < 3) throw std::invalid_argument("rb0: need at least three radii");
    Rb0Result out;
    out.rows.resize(r_prime.size());
    const double fn = resolvent_profile(n, kappa).real();
    parallel_for(r_prime.size(), [&](std::size_t i) {
        const double rho = r_prime[i];
        const double k = kappa / rho;
        const PointM zp = point_on_end(model, end, rho, pole(n));
        const double raw = engine.kernel(k, z, zp).value.real();
        out.rows[i] = {rho, k, raw, raw * std::pow(rho, n - 2.0) * std::exp(kappa) / fn};
    });
    for (std::size_t i = 2; i < out.rows.size(); ++i) {
        const double d1 = out.rows[i].scaled - out.rows[i - 1].scaled;
        const double d0 = out.rows[i - 1].scaled - out.rows[i - 2].scaled;
        if (d1 * d0 < 0.0) out.monotone = false;
    }
    // S(rho) = a + b / rho (+ c / rho^2)
    const std::size_t m = out.rows.size();
    const auto& p1 = out.rows[m - 2];
    const auto& p2 = out.rows[m - 1];
    out.first_level = (p2.r_prime * p2.scaled - p1.r_prime * p1.scaled) / (p2.r_prime - p1.r_prime);
    const auto& p0 = out.rows[m - 3];
    const double x[3] = {1.0 / p0.r_prime, 1.0 / p1.r_prime, 1.0 / p2.r_prime};
    const double y[3] = {p0.scaled, p1.scaled, p2.scaled};
    // Lagrange interpolation in x evaluated at x = 0
    double a = 0.0;
    for (int i = 0; i < 3; ++i) {
        double l = 1.0;
        for (int j = 0; j < 3; ++j) {
            if (j != i) l *= (0.0 - x[j]) / (x[i] - x[j]);
        }
        a += l * y[i];
    }
    out.limit = a;
    out.levels_disagree = std::abs(out.limit - out.first_level) > 0.01 * std::abs(out.limit);
    return out;
}

ParametrixResult parametrix_error_order(ResolventEngine& engine, const HarmonicProfile& profile,
                                        double kappa, const PointM& z, EndSide end,
                                        const std::vector<double>& r_prime, bool with_correction) {
    const ModelManifold& model = engine.model();
    const int n = model.dimension();
    ParametrixResult out;
    out.r_prime = r_prime;
    out.error.resize(r_prime.size());
    out.kernel.resize(r_prime.size());
    const bool same_end = !model.two_ended() || model.side_of(z.r) == end;
    const double cut = model.two_ended() ? end_cutoff(model, end, z.r) : 1.0;
    const double phi = profile.phi_end(end, z.r);
    parallel_for(r_prime.size(), [&](std::size_t i) {
        const double rho = r_prime[i];
        const double k = kappa / rho;
        const PointM zp = point_on_end(model, end, rho, pole(n));
        const double value = engine.kernel(k, z, zp).value.real();
        double g1 = 0.0;
        if (same_end && cut > 0.0) g1 = cut * euclidean_resolvent(n, k, end_distance(model, z, zp));
        double g3 = 0.0;
        if (with_correction) g3 = euclidean_resolvent(n, k, rho) * (phi - cut);
        out.kernel[i] = value;
        out.error[i] = std::abs(value - g1 - g3);
    });
    double worst_rel = 0.0;
    for (std::size_t i = 0; i < r_prime.size(); ++i) {
        worst_rel = std::max(worst_rel, out.error[i] / std::abs(out.kernel[i]));
    }
    if (worst_rel < 1e-9) {
        out.flagged = true;
        out.flag_reason = "error at round-off floor; slope not meaningful";
        return out;
    }
    std::vector<double> inv(r_prime.size());
    for (std::size_t i = 0; i < r_prime.size(); ++i) inv[i] = 1.0 / r_prime[i];
    out.fit = fit_loglog(inv, out.error);
    if (out.fit.r2 < 0.98) {
        out.flagged = true;
        out.flag_reason = "fit R^2 below 0.98";
    }
    return out;
}

}  // namespace endslab
