#pragma once

#include <complex>

namespace endslab {

using cplx = std::complex<double>;

/// A complex number stored as mant * exp(expo).  Exterior solutions grow or
/// decay like exp(+-k rho) and like rho^{+-j}; keeping the exponent apart
/// lets products of growing and decaying factors be formed without overflow.
struct Scaled {
    cplx mant{0.0, 0.0};
    cplx expo{0.0, 0.0};

    Scaled() = default;
    Scaled(cplx m, cplx e = {0.0, 0.0}) : mant(m), expo(e) { normalize(); }

    cplx value() const { return mant == cplx{} ? cplx{} : mant * std::exp(expo); }
    double log_abs() const { return std::log(std::abs(mant)) + expo.real(); }
    bool is_zero() const { return mant == cplx{}; }

    void normalize();
};

Scaled operator*(const Scaled& a, const Scaled& b);
Scaled operator/(const Scaled& a, const Scaled& b);
Scaled operator+(const Scaled& a, const Scaled& b);
Scaled operator-(const Scaled& a, const Scaled& b);
Scaled operator*(const Scaled& a, cplx s);

/// Decaying (d) and growing (g) exterior solutions of the mode-j radial
/// equation on an exact Euclidean end, in the end's radius rho = |z|:
///   d = rho^{1-n/2} k^{nu} K_nu(k rho),  g = rho^{1-n/2} k^{-nu} I_nu(k rho),
/// nu = j + n/2 - 1.  Both stay finite as k -> 0 (d -> c rho^{-(n-2+j)},
/// g -> c' rho^j) and rho^{n-1} (d g' - d' g) = 1 for every k.
/// Derivatives are with respect to rho.  Odd n only.
struct ExteriorPair {
    Scaled d, dd, g, dg;
};

ExteriorPair exterior_pair(int n, int j, cplx k, double rho);

/// Decaying solution only (cheaper).
void exterior_decaying(int n, int j, cplx k, double rho, Scaled& value, Scaled& derivative);

struct ExteriorValue {
    cplx value;
    cplx derivative;
};

/// Decaying exterior solution normalized to 1 at rho_norm.
ExteriorValue exterior_solution(int n, int j, cplx k, double rho, double rho_norm);

/// Profile factor of the Euclidean resolvent: (Delta + k^2)^{-1}(z, z') =
/// e^{-k d} d^{2-n} f_n(k d).  Polynomial of degree (n-3)/2 for odd n.
cplx resolvent_profile(int n, cplx x);

/// e^{-k d} d^{2-n} f_n(k d), the resolvent kernel of R^n.
cplx euclidean_resolvent_kernel(int n, cplx k, double d);

}  // namespace endslab
