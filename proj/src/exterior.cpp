#include "endslab/exterior.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace endslab {

void Scaled::normalize() {
    if (mant == cplx{}) {
        expo = {};
        return;
    }
    const double a = std::abs(mant);
    if (a > 1e100 || a < 1e-100) {
        const double la = std::log(a);
        mant /= a;
        expo += la;
    }
}

Scaled operator*(const Scaled& a, const Scaled& b) { return Scaled(a.mant * b.mant, a.expo + b.expo); }

Scaled operator/(const Scaled& a, const Scaled& b) {
    if (b.is_zero()) throw std::domain_error("Scaled: division by zero");
    return Scaled(a.mant / b.mant, a.expo - b.expo);
}

Scaled operator+(const Scaled& a, const Scaled& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const double la = a.log_abs();
    const double lb = b.log_abs();
    if (la >= lb) {
        if (la - lb > 745.0) return a;
        return Scaled(a.mant + b.mant * std::exp(b.expo - a.expo), a.expo);
    }
    if (lb - la > 745.0) return b;
    return Scaled(b.mant + a.mant * std::exp(a.expo - b.expo), b.expo);
}

Scaled operator-(const Scaled& a, const Scaled& b) { return a + Scaled(-b.mant, b.expo); }

Scaled operator*(const Scaled& a, cplx s) { return Scaled(a.mant * s, a.expo); }

namespace {

void require_odd(int n) {
    if (n < 3 || n % 2 == 0) {
        throw std::invalid_argument("exterior solutions are implemented for odd n >= 3");
    }
}

// a_i = (m+i)! / (i! (m-i)!), the coefficients of K_{m+1/2}.
std::vector<double> bessel_poly_coefficients(int m) {
    std::vector<double> a(m + 1);
    a[0] = 1.0;
    for (int i = 0; i < m; ++i) a[i + 1] = a[i] * (m + i + 1.0) * (m - i) / (i + 1.0);
    return a;
}

// d = rho^{(1-n)/2} e^{-k rho} sqrt(pi/2) sum_i a_i 2^{-i} k^{m-i} rho^{-i}
void decaying(int n, int j, cplx k, double rho, Scaled& value, Scaled& deriv) {
    const int m = j + (n - 3) / 2;
    const std::vector<double> a = bessel_poly_coefficients(m);
    const double half_n = 0.5 * (n - 1);
    const cplx x2 = 2.0 * k * rho;
    cplx s0{}, s1{};
    cplx pre_log = std::log(std::sqrt(std::numbers::pi / 2.0)) - half_n * std::log(rho) - k * rho;
    if (std::abs(x2) >= 1.0) {
        // factor k^m, terms a_i (2 k rho)^{-i}
        const cplx inv = 1.0 / x2;
        cplx t = 1.0;
        for (int i = 0; i <= m; ++i) {
            s0 += a[i] * t;
            s1 += a[i] * (half_n + i) * t;
            t *= inv;
        }
        pre_log += static_cast<double>(m) * std::log(k);
    } else {
        // factor (2 rho)^{-m}, terms a_{m-l} (2 k rho)^{l}
        cplx t = 1.0;
        for (int l = 0; l <= m; ++l) {
            const int i = m - l;
            s0 += a[i] * t;
            s1 += a[i] * (half_n + i) * t;
            t *= x2;
        }
        pre_log -= static_cast<double>(m) * std::log(2.0 * rho);
    }
    value = Scaled(s0, pre_log);
    deriv = Scaled(-k * s0 - s1 / rho, pre_log);
}

// g = rho^{1-n/2} k^{-nu} I_nu(k rho) with nu = m + 1/2.
void growing(int n, int j, cplx k, double rho, Scaled& value, Scaled& deriv) {
    const double nu = j + 0.5 * n - 1.0;
    const double a = 1.0 - 0.5 * n;
    const cplx x = k * rho;
    const double ax = std::abs(x);
    if (ax < 4.0 || ax * ax < nu + 1.0) {
        const cplx q = 0.25 * x * x;
        cplx t = 1.0;
        cplx s0{}, s1{};
        for (int l = 0; l < 2000; ++l) {
            s0 += t;
            s1 += t / (nu + l + 1.0);
            if (l > ax && std::abs(t) < 1e-17 * std::abs(s0)) break;
            t *= q / ((l + 1.0) * (nu + l + 1.0));
        }
        const double pre_log = a * std::log(rho) + nu * std::log(0.5 * rho) - std::lgamma(nu + 1.0);
        value = Scaled(s0, pre_log);
        deriv = Scaled(((a + nu) / rho) * s0 + 0.5 * k * k * rho * s1, pre_log);
        return;
    }
    // Continued fraction for I_{nu+1}/I_nu (modified Lentz), then backward
    // recurrence down to I_{1/2} for normalization.
    const double tiny = 1e-300;
    cplx frac = tiny;
    cplx c = frac;
    cplx dd = 0.0;
    for (int i = 1; i < 100000; ++i) {
        const cplx b = 2.0 * (nu + i) / x;
        dd = b + dd;
        if (std::abs(dd) < tiny) dd = tiny;
        c = b + 1.0 / c;
        if (std::abs(c) < tiny) c = tiny;
        dd = 1.0 / dd;
        const cplx delta = c * dd;
        frac *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    const cplx ratio_top = frac;  // I_{nu+1}/I_nu
    cplx hi = ratio_top;          // J_{mu+1}
    cplx mid = 1.0;               // J_mu
    double log_shift = 0.0;
    for (double mu = nu; mu > 0.75; mu -= 1.0) {
        const cplx lo = hi + (2.0 * mu / x) * mid;
        hi = mid;
        mid = lo;
        const double am = std::abs(mid);
        if (am > 1e200) {
            hi /= am;
            mid /= am;
            log_shift += std::log(am);
        }
    }
    // mid = J_{1/2} * exp(-log_shift) with J_nu = 1, so I_nu = I_{1/2} / J_{1/2}.
    const cplx half_log = x - 0.5 * std::log(2.0 * std::numbers::pi * x);
    const cplx one_minus = 1.0 - std::exp(-2.0 * x);
    const cplx log_inu = half_log + std::log(one_minus) - std::log(mid) - log_shift;
    const cplx pre = a * std::log(rho) - nu * std::log(k) + log_inu;
    value = Scaled(1.0, pre);
    deriv = Scaled((a + nu) / rho + k * ratio_top, pre);
}

}  // namespace

ExteriorPair exterior_pair(int n, int j, cplx k, double rho) {
    require_odd(n);
    if (k.real() < 0.0) throw std::domain_error("exterior_pair: Re k must be >= 0");
    if (!(rho > 0.0)) throw std::domain_error("exterior_pair: rho must be positive");
    ExteriorPair p;
    decaying(n, j, k, rho, p.d, p.dd);
    growing(n, j, k, rho, p.g, p.dg);
    return p;
}

void exterior_decaying(int n, int j, cplx k, double rho, Scaled& value, Scaled& derivative) {
    require_odd(n);
    if (k.real() < 0.0) throw std::domain_error("exterior_decaying: Re k must be >= 0");
    if (!(rho > 0.0)) throw std::domain_error("exterior_decaying: rho must be positive");
    decaying(n, j, k, rho, value, derivative);
}

ExteriorValue exterior_solution(int n, int j, cplx k, double rho, double rho_norm) {
    Scaled v, dv, vn, dvn;
    exterior_decaying(n, j, k, rho, v, dv);
    exterior_decaying(n, j, k, rho_norm, vn, dvn);
    return {(v / vn).value(), (dv / vn).value()};
}

cplx resolvent_profile(int n, cplx x) {
    require_odd(n);
    const int m = (n - 3) / 2;
    const std::vector<double> a = bessel_poly_coefficients(m);
    cplx s{};
    cplx t = 1.0;  // x^{m-i} accumulated from i = m downward
    for (int i = m; i >= 0; --i) {
        s += a[i] * std::pow(0.5, i) * t;
        t *= x;
    }
    return std::sqrt(std::numbers::pi / 2.0) * std::pow(2.0 * std::numbers::pi, -0.5 * n) * s;
}

cplx euclidean_resolvent_kernel(int n, cplx k, double d) {
    if (!(d > 0.0)) throw std::domain_error("euclidean_resolvent: d must be positive");
    return std::exp(-k * d) * std::pow(d, 2.0 - n) * resolvent_profile(n, k * d);
}

}  // namespace endslab
