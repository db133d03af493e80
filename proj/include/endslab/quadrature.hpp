#pragma once

#include <functional>
#include <vector>

namespace endslab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes and weights by Newton iteration on P_n; cached per order.
const GaussRule& gauss_legendre(int order);

/// Composite Gauss-Legendre rule over the given breakpoints.
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

PanelRule composite_gauss(const std::vector<double>& breakpoints, int order);

template <class F>
auto integrate_gauss(F&& f, double a, double b, int order) {
    const GaussRule& rule = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    decltype(f(a)) sum{};
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return sum * half;
}

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive Gauss-Kronrod (15-point) on [a, b]; either end may be infinite.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double rel_tol = 1e-12, unsigned max_depth = 12);

/// Geometric breakpoints a, a*q, a*q^2, ... ending exactly at b (a, b > 0).
std::vector<double> geometric_breaks(double a, double b, double ratio);

}  // namespace endslab
