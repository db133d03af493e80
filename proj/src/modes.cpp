#include "endslab/modes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace endslab {

namespace {

// Fornberg's algorithm: weights for derivatives 0..m at x0 from nodes x.
std::vector<std::vector<double>> fornberg(double x0, const std::vector<double>& x, int m) {
    const int np = static_cast<int>(x.size());
    std::vector<std::vector<double>> c(np, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c[0][0] = 1.0;
    for (int i = 1; i < np; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    return c;
}

void check_cos(double c) {
    if (!(std::abs(c) <= 1.0 + 1e-14)) throw std::domain_error("zonal kernel: |cos| > 1");
}

double zonal_prefactor(int j, int n) {
    return (2.0 * j + n - 2.0) / ((n - 2.0) * sphere_volume(n));
}

}  // namespace

double eigenvalue(int j, int n) {
    if (j < 0 || n < 3) throw std::invalid_argument("eigenvalue: need j >= 0, n >= 3");
    return static_cast<double>(j) * (j + n - 2);
}

double gegenbauer(int j, double alpha, double x) {
    if (j == 0) return 1.0;
    double c0 = 1.0;
    double c1 = 2.0 * alpha * x;
    for (int m = 1; m < j; ++m) {
        const double c2 = (2.0 * (m + alpha) * x * c1 - (m + 2.0 * alpha - 1.0) * c0) / (m + 1.0);
        c0 = c1;
        c1 = c2;
    }
    return c1;
}

double zonal_kernel(int j, double c, int n) {
    check_cos(c);
    return zonal_prefactor(j, n) * gegenbauer(j, 0.5 * (n - 2), std::clamp(c, -1.0, 1.0));
}

double zonal_kernel_derivative(int j, double c, int n) {
    check_cos(c);
    if (j == 0) return 0.0;
    const double alpha = 0.5 * (n - 2);
    return zonal_prefactor(j, n) * 2.0 * alpha * gegenbauer(j - 1, alpha + 1.0, std::clamp(c, -1.0, 1.0));
}

void zonal_kernels(int jmax, double c, int n, std::vector<double>& z, std::vector<double>* dz) {
    check_cos(c);
    c = std::clamp(c, -1.0, 1.0);
    const double alpha = 0.5 * (n - 2);
    z.assign(jmax + 1, 0.0);
    double c0 = 1.0, c1 = 2.0 * alpha * c;
    for (int j = 0; j <= jmax; ++j) {
        double cj;
        if (j == 0) {
            cj = c0;
        } else if (j == 1) {
            cj = c1;
        } else {
            const int m = j - 1;
            cj = (2.0 * (m + alpha) * c * c1 - (m + 2.0 * alpha - 1.0) * c0) / (m + 1.0);
            c0 = c1;
            c1 = cj;
        }
        z[j] = zonal_prefactor(j, n) * cj;
    }
    if (dz) {
        dz->assign(jmax + 1, 0.0);
        const double beta = alpha + 1.0;
        double d0 = 1.0, d1 = 2.0 * beta * c;
        for (int j = 1; j <= jmax; ++j) {
            const int i = j - 1;
            double ci;
            if (i == 0) {
                ci = d0;
            } else if (i == 1) {
                ci = d1;
            } else {
                const int m = i - 1;
                ci = (2.0 * (m + beta) * c * d1 - (m + 2.0 * beta - 1.0) * d0) / (m + 1.0);
                d0 = d1;
                d1 = ci;
            }
            (*dz)[j] = zonal_prefactor(j, n) * 2.0 * alpha * ci;
        }
    }
}

std::vector<cplx> radial_apply(const RadialOperator& op, const std::vector<double>& nodes,
                               const std::vector<cplx>& u) {
    const std::size_t N = nodes.size();
    if (N < 8) throw std::invalid_argument("radial_apply: grid too coarse (< 8 points)");
    if (u.size() != N) throw std::invalid_argument("radial_apply: size mismatch");
    const int n = op.model->dimension();
    const double lam = eigenvalue(op.j, n);
    const cplx k2 = op.k * op.k;
    std::vector<cplx> out(N);
    const int width = 5;
    for (std::size_t i = 0; i < N; ++i) {
        std::size_t start = i >= 2 ? i - 2 : 0;
        start = std::min(start, N - width);
        std::vector<double> xs(nodes.begin() + start, nodes.begin() + start + width);
        if (start != (i >= 2 ? i - 2 : 0) || i + 2 >= N || i < 2) {
            // one-sided: widen to 6 points to keep second order
            const std::size_t s6 = std::min(i >= 3 ? i - 3 : 0, N - 6);
            const std::size_t s = (i < 2) ? 0 : s6;
            xs.assign(nodes.begin() + s, nodes.begin() + s + 6);
            start = s;
        }
        const auto w = fornberg(nodes[i], xs, 2);
        cplx d1{}, d2{};
        for (std::size_t q = 0; q < xs.size(); ++q) {
            d1 += w[q][1] * u[start + q];
            d2 += w[q][2] * u[start + q];
        }
        const WarpValue wv = op.model->warp(nodes[i]);
        if (!(wv.f > 0.0)) {
            out[i] = cplx(std::nan(""), 0.0);
            continue;
        }
        out[i] = -d2 - (n - 1.0) * (wv.df / wv.f) * d1 + (lam / (wv.f * wv.f) + k2) * u[i];
    }
    return out;
}

cplx radial_apply_at(const RadialOperator& op, const std::function<cplx(double)>& u, double r,
                     double h, int shift) {
    cplx u0{}, d1{}, d2{};
    if (shift == 0) {
        // sixth-order central weights
        static constexpr double w1[4] = {0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
        static constexpr double w2[4] = {-49.0 / 18, 3.0 / 2, -3.0 / 20, 1.0 / 90};
        u0 = u(r);
        d2 = w2[0] * u0;
        for (int m = 1; m <= 3; ++m) {
            const cplx up = u(r + m * h);
            const cplx um = u(r - m * h);
            d1 += w1[m] * (up - um);
            d2 += w2[m] * (up + um);
        }
        d1 /= h;
        d2 /= h * h;
    } else {
        std::vector<double> xs;
        for (int m = -3; m <= 3; ++m) xs.push_back((m + shift) * h);
        const auto w = fornberg(0.0, xs, 2);
        for (std::size_t q = 0; q < xs.size(); ++q) {
            const cplx v = xs[q] == 0.0 ? (u0 = u(r)) : u(r + xs[q]);
            d1 += w[q][1] * v;
            d2 += w[q][2] * v;
        }
    }
    const int n = op.model->dimension();
    const WarpValue wv = op.model->warp(r);
    return -d2 - (n - 1.0) * (wv.df / wv.f) * d1 +
           (eigenvalue(op.j, n) / (wv.f * wv.f) + op.k * op.k) * u0;
}

SynthesisResult synthesize_kernel(const std::vector<cplx>& mode_values, double c, int n) {
    SynthesisResult res{};
    if (mode_values.empty()) return res;
    std::vector<double> z;
    zonal_kernels(static_cast<int>(mode_values.size()) - 1, c, n, z);
    cplx prev{};
    for (std::size_t j = 0; j < mode_values.size(); ++j) {
        const cplx t = mode_values[j] * z[j];
        res.value += t;
        res.last_ratio = std::abs(prev) > 0.0 ? std::abs(t) / std::abs(prev) : 0.0;
        res.last_term = t;
        prev = t;
    }
    res.modes = static_cast<int>(mode_values.size());
    return res;
}

SynthesisResult sum_weighted(const std::function<cplx(int)>& term,
                             const std::function<double(int)>& weight,
                             const ModeSumOptions& options) {
    SynthesisResult res{};
    cplx prev{};
    for (int j = 0; j <= options.j_max; ++j) {
        const double wj = weight(j);
        const cplx t = wj == 0.0 ? cplx{} : term(j) * wj;
        res.value += t;
        res.last_ratio = std::abs(prev) > 0.0 ? std::abs(t) / std::abs(prev) : 0.0;
        res.last_term = t;
        res.modes = j + 1;
        const double scale = options.tol * std::abs(res.value);
        if (j >= std::max(1, options.j_min) && std::abs(t) <= scale && std::abs(prev) <= scale) {
            return res;
        }
        if (j >= 1 && res.value == cplx{} && t == cplx{} && prev == cplx{}) return res;
        prev = t;
    }
    throw NumericalError("mode sum: truncation diagnostic above tolerance at j_max");
}

SynthesisResult sum_modes(const std::function<cplx(int)>& term, double c, int n,
                          const ModeSumOptions& options) {
    std::vector<double> z;
    zonal_kernels(options.j_max, c, n, z);
    return sum_weighted(term, [&](int j) { return z[j]; }, options);
}

}  // namespace endslab
