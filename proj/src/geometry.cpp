#include "endslab/geometry.hpp"

#include "endslab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace endslab {

namespace {

// Dense Gaussian elimination with partial pivoting; the systems here are 9x9.
template <std::size_t N>
std::array<double, N> solve_dense(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < N; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[piv][col])) piv = row;
        }
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        for (std::size_t row = col + 1; row < N; ++row) {
            const double m = a[row][col] / a[col][col];
            for (std::size_t k = col; k < N; ++k) a[row][k] -= m * a[col][k];
            b[row] -= m * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t i = N; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < N; ++k) s -= a[i][k] * x[k];
        x[i] = s / a[i][i];
    }
    return x;
}

constexpr int kCoeffs = 9;

WarpValue eval_poly(const std::array<double, kCoeffs>& c, double r) {
    WarpValue v;
    for (int i = kCoeffs - 1; i >= 0; --i) v.f = v.f * r + c[i];
    for (int i = kCoeffs - 1; i >= 1; --i) v.df = v.df * r + i * c[i];
    for (int i = kCoeffs - 1; i >= 2; --i) v.d2f = v.d2f * r + i * (i - 1) * c[i];
    return v;
}

// Row of d^m/dr^m r^i evaluated at r.
std::array<double, kCoeffs> derivative_row(double r, int m) {
    std::array<double, kCoeffs> row{};
    for (int i = m; i < kCoeffs; ++i) {
        double c = 1.0;
        for (int q = 0; q < m; ++q) c *= i - q;
        row[i] = c * std::pow(r, i - m);
    }
    return row;
}

}  // namespace

WarpProfile WarpProfile::two_end(double neck_radius, double neck_min, double c_plus,
                                 double c_minus) {
    if (!(neck_radius > 0.0 && neck_min > 0.0)) {
        throw std::invalid_argument("WarpProfile: neck radius and neck minimum must be positive");
    }
    if (!(neck_radius - c_plus > 0.0 && neck_radius - c_minus > 0.0)) {
        throw std::invalid_argument("WarpProfile: end offsets must leave f(+-R) > 0");
    }
    WarpProfile p;
    p.ends_ = Ends::two;
    p.neck_radius_ = neck_radius;
    p.neck_min_ = neck_min;
    p.c_plus_ = c_plus;
    p.c_minus_ = c_minus;

    const double R = neck_radius;
    std::array<std::array<double, kCoeffs>, kCoeffs> m{};
    std::array<double, kCoeffs> rhs{};
    // value, slope, curvature and third derivative at both ends, f(0) = a
    const double side_value[2] = {R - c_plus, R - c_minus};
    const double side_slope[2] = {1.0, -1.0};
    int row = 0;
    for (int s = 0; s < 2; ++s) {
        const double x = s == 0 ? R : -R;
        for (int d = 0; d < 4; ++d) {
            m[row] = derivative_row(x, d);
            rhs[row] = d == 0 ? side_value[s] : (d == 1 ? side_slope[s] : 0.0);
            ++row;
        }
    }
    m[row] = derivative_row(0.0, 0);
    rhs[row] = neck_min;
    p.coeffs_ = solve_dense<kCoeffs>(m, rhs);
    if (c_plus == c_minus) {
        // even profile: drop round-off in the odd coefficients so that the
        // mirror symmetry r -> -r holds exactly
        for (int i = 1; i < kCoeffs; i += 2) p.coeffs_[i] = 0.0;
    }

    double fmin = neck_min;
    for (int i = 0; i <= 4000; ++i) {
        const double r = -R + 2.0 * R * i / 4000.0;
        fmin = std::min(fmin, eval_poly(p.coeffs_, r).f);
    }
    if (fmin < 0.5 * neck_min) {
        throw std::invalid_argument("WarpProfile: neck polynomial dips below neck_min/2");
    }
    return p;
}

WarpProfile WarpProfile::flat_one_end(double neck_radius) {
    WarpProfile p;
    p.ends_ = Ends::one;
    p.neck_radius_ = neck_radius;
    p.neck_min_ = 0.0;
    p.coeffs_ = {0.0, 1.0};
    return p;
}

WarpValue WarpProfile::eval(double r) const {
    if (ends_ == Ends::one) return {r, 1.0, 0.0};
    if (r >= neck_radius_) return {r - c_plus_, 1.0, 0.0};
    if (r <= -neck_radius_) return {-r - c_minus_, -1.0, 0.0};
    return eval_poly(coeffs_, r);
}

ModelManifold::ModelManifold(int dimension, WarpProfile profile, double r_max)
    : n_(dimension), profile_(profile), r_max_(r_max) {
    if (n_ < 3) throw std::invalid_argument("ModelManifold: dimension must be >= 3");
    if (!(r_max_ > 10.0 * profile_.neck_radius())) {
        throw std::invalid_argument("ModelManifold: r_max must exceed 10 * neck_radius");
    }
}

ModelManifold ModelManifold::default_two_end(int dimension, double r_max) {
    return ModelManifold(dimension, WarpProfile::two_end(1.0, 0.5), r_max);
}

ModelManifold ModelManifold::flat_one_end(int dimension, double r_max) {
    return ModelManifold(dimension, WarpProfile::flat_one_end(1.0), r_max);
}

bool ModelManifold::in_exact_region(double r) const {
    if (!two_ended()) return true;
    return std::abs(r) >= neck_radius();
}

double ModelManifold::end_radius(double r) const {
    if (!two_ended()) return r;
    return r >= 0.0 ? r - profile_.end_offset(EndSide::plus)
                    : -r - profile_.end_offset(EndSide::minus);
}

PointM::PointM(double r_, std::vector<double> omega_) : r(r_), omega(std::move(omega_)) {
    double s = 0.0;
    for (double v : omega) s += v * v;
    if (omega.empty() || std::abs(std::sqrt(s) - 1.0) > 1e-12) {
        throw std::invalid_argument("PointM: omega must be a unit vector");
    }
}

PointM PointM::on_meridian(int dimension, double r, double gamma) {
    std::vector<double> w(dimension, 0.0);
    w[0] = std::cos(gamma);
    w[1] = std::sin(gamma);
    return PointM(r, std::move(w));
}

double angle_cosine(const PointM& a, const PointM& b) {
    if (a.omega.size() != b.omega.size()) {
        throw std::invalid_argument("angle_cosine: dimension mismatch");
    }
    double c = 0.0;
    for (std::size_t i = 0; i < a.omega.size(); ++i) c += a.omega[i] * b.omega[i];
    return std::clamp(c, -1.0, 1.0);
}

double sphere_volume(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

WarpValue warp_eval(const ModelManifold& model, double r) {
    if (r > model.r_max() || r < model.r_min()) {
        throw std::domain_error("warp_eval: r outside [r_min, r_max]");
    }
    return model.warp(r);
}

double radial_measure(const ModelManifold& model, double a, double b) {
    if (b <= a) return 0.0;
    const int n = model.dimension();
    if (!model.two_ended()) {
        a = std::max(a, 0.0);
        if (b <= a) return 0.0;
        return (std::pow(b, n) - std::pow(a, n)) / n;
    }
    const double R = model.neck_radius();
    const double cp = model.profile().end_offset(EndSide::plus);
    const double cm = model.profile().end_offset(EndSide::minus);
    double total = 0.0;
    // minus end: f = -s - cm
    if (a < -R) {
        const double hi = std::min(b, -R);
        total += (std::pow(-a - cm, n) - std::pow(-hi - cm, n)) / n;
    }
    // neck: polynomial of degree 8(n-1), integrated exactly by Gauss-Legendre
    const double lo = std::max(a, -R);
    const double hi = std::min(b, R);
    if (hi > lo) {
        const int order = 4 * (n - 1) + 4;
        total += integrate_gauss(
            [&](double s) { return std::pow(model.warp(s).f, n - 1); }, lo, hi, order);
    }
    if (b > R) {
        const double l = std::max(a, R);
        total += (std::pow(b - cp, n) - std::pow(l - cp, n)) / n;
    }
    return total;
}

double volume_ball(const ModelManifold& model, double center, double radius) {
    if (radius <= 0.0) return 0.0;
    return sphere_volume(model.dimension()) *
           radial_measure(model, center - radius, center + radius);
}

double one_form_norm(const ModelManifold& model, double radial_part, double angular_part_norm,
                     double r) {
    const double f = model.warp(r).f;
    if (!(f > 0.0)) {
        if (angular_part_norm == 0.0) return std::abs(radial_part);
        throw std::domain_error("one_form_norm: warp vanishes at r");
    }
    return std::hypot(radial_part, angular_part_norm / f);
}

}  // namespace endslab
