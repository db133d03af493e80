#include "endslab/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace endslab {

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int l = 2; l <= n; ++l) {
                const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // refresh the derivative at the converged root
        double p0 = 1.0;
        double p1 = x;
        for (int l = 2; l <= n; ++l) {
            const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<GaussRule>(compute_rule(order));
    return *slot;
}

PanelRule composite_gauss(const std::vector<double>& breakpoints, int order) {
    const GaussRule& rule = gauss_legendre(order);
    PanelRule out;
    for (std::size_t p = 0; p + 1 < breakpoints.size(); ++p) {
        const double a = breakpoints[p];
        const double b = breakpoints[p + 1];
        if (b <= a) continue;
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        for (int i = 0; i < order; ++i) {
            out.nodes.push_back(mid + half * rule.nodes[i]);
            out.weights.push_back(half * rule.weights[i]);
        }
    }
    return out;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol, unsigned max_depth) {
    using boost::math::quadrature::gauss_kronrod;
    AdaptiveResult res;
    if (a == b) return res;
    double l1 = 0.0;
    res.value = gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, rel_tol, &res.error, &l1);
    return res;
}

std::vector<double> geometric_breaks(double a, double b, double ratio) {
    if (!(a > 0.0 && b > a && ratio > 1.0)) {
        throw std::invalid_argument("geometric_breaks: need 0 < a < b and ratio > 1");
    }
    std::vector<double> out{a};
    const int count = std::max(1, static_cast<int>(std::ceil(std::log(b / a) / std::log(ratio))));
    const double q = std::pow(b / a, 1.0 / count);
    for (int i = 1; i < count; ++i) out.push_back(a * std::pow(q, i));
    out.push_back(b);
    return out;
}

}  // namespace endslab
