#include "doctest.h"

#include "endslab/exterior.hpp"

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

using namespace endslab;

namespace {

double oracle_d(int n, int j, double k, double rho) {
    const double nu = j + 0.5 * n - 1.0;
    return std::pow(rho, 1.0 - 0.5 * n) * std::pow(k, nu) * boost::math::cyl_bessel_k(nu, k * rho);
}

double oracle_g(int n, int j, double k, double rho) {
    const double nu = j + 0.5 * n - 1.0;
    return std::pow(rho, 1.0 - 0.5 * n) * std::pow(k, -nu) * boost::math::cyl_bessel_i(nu, k * rho);
}

cplx wronskian(int n, int j, cplx k, double rho) {
    const ExteriorPair p = exterior_pair(n, j, k, rho);
    const Scaled w = (p.d * p.dg - p.dd * p.g) * cplx(std::pow(rho, n - 1));
    return w.value();
}

}  // namespace

TEST_CASE("exterior solutions match Bessel functions") {
    for (int n : {3, 5, 7}) {
        for (int j : {0, 1, 4, 12}) {
            for (double k : {0.3, 1.0, 7.5}) {
                for (double rho : {0.5, 2.0, 9.0}) {
                    const ExteriorPair p = exterior_pair(n, j, k, rho);
                    CHECK(p.d.value().real() == doctest::Approx(oracle_d(n, j, k, rho)).epsilon(1e-12));
                    CHECK(p.g.value().real() == doctest::Approx(oracle_g(n, j, k, rho)).epsilon(1e-12));
                    CHECK(std::abs(p.d.value().imag()) < 1e-14 * std::abs(p.d.value()));
                }
            }
        }
    }
}

TEST_CASE("Wronskian normalization holds for real and complex k") {
    const cplx ks[] = {0.0, 0.5, 3.0, std::polar(4.0, -5.0 * std::numbers::pi / 12.0),
                       std::polar(40.0, 5.0 * std::numbers::pi / 12.0), 200.0};
    for (int n : {3, 5}) {
        for (int j : {0, 2, 9, 40}) {
            for (cplx k : ks) {
                for (double rho : {0.5, 1.0, 30.0, 400.0}) {
                    const cplx w = wronskian(n, j, k, rho);
                    CHECK(std::abs(w - 1.0) < 5e-11);
                }
            }
        }
    }
}

TEST_CASE("k = 0 limits are the harmonic powers") {
    for (int n : {3, 5}) {
        for (int j : {0, 1, 3}) {
            const ExteriorPair a = exterior_pair(n, j, 0.0, 2.0);
            const ExteriorPair b = exterior_pair(n, j, 0.0, 4.0);
            const double ratio_d = (a.d / b.d).value().real();
            const double ratio_g = (a.g / b.g).value().real();
            CHECK(ratio_d == doctest::Approx(std::pow(2.0, n - 2 + j)).epsilon(1e-13));
            CHECK(ratio_g == doctest::Approx(std::pow(0.5, j)).epsilon(1e-13));
            // continuity in k at 0
            const ExteriorPair s = exterior_pair(n, j, 1e-7, 2.0);
            CHECK((s.d / a.d).value().real() == doctest::Approx(1.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("n = 3, j = 0, k = 1 decaying solution has log-derivative -1 - 1/r") {
    for (double r : {0.3, 1.0, 10.0, 250.0}) {
        const ExteriorValue v = exterior_solution(3, 0, 1.0, r, 400.0);
        CHECK((v.derivative / v.value).real() == doctest::Approx(-1.0 - 1.0 / r).epsilon(1e-13));
        // residual of -u'' - (2/r)u' + u = 0 by central differences
        const double h = 1e-3;
        auto u = [](double x) { return exterior_solution(3, 0, 1.0, x, 400.0).value.real(); };
        const double d2 = (u(r + h) - 2 * u(r) + u(r - h)) / (h * h);
        const double d1 = (u(r + h) - u(r - h)) / (2 * h);
        CHECK(std::abs(-d2 - 2.0 / r * d1 + u(r)) < 1e-5 * std::abs(u(r)) * (1 + 1 / (r * r)));
    }
    const ExteriorValue at_max = exterior_solution(3, 0, 1.0, 400.0, 400.0);
    CHECK(std::abs(at_max.value - 1.0) < 1e-15);
}

TEST_CASE("exterior solutions at k = 0 follow the decay law") {
    const ExteriorValue a = exterior_solution(3, 0, 0.0, 5.0, 400.0);
    CHECK(a.value.real() == doctest::Approx(400.0 / 5.0).epsilon(1e-13));
    const ExteriorValue b = exterior_solution(5, 1, 0.0, 5.0, 400.0);
    CHECK(b.value.real() == doctest::Approx(std::pow(80.0, 4)).epsilon(1e-12));
}

TEST_CASE("resolvent profile polynomials") {
    CHECK(resolvent_profile(3, 2.7).real() == doctest::Approx(1.0 / (4.0 * std::numbers::pi)));
    const double x = 1.7;
    CHECK(resolvent_profile(5, x).real() ==
          doctest::Approx((1.0 + x) / (8.0 * std::numbers::pi * std::numbers::pi)));
    // kernel against K_{nu} form: (2 pi)^{-n/2} (k/d)^{nu} K_nu(k d)
    for (int n : {3, 5, 7}) {
        const double nu = 0.5 * n - 1.0;
        for (double k : {0.2, 1.0, 3.0}) {
            for (double d : {0.5, 2.0}) {
                const double want = std::pow(2.0 * std::numbers::pi, -0.5 * n) * std::pow(k / d, nu) *
                                    boost::math::cyl_bessel_k(nu, k * d);
                CHECK(euclidean_resolvent_kernel(n, k, d).real() == doctest::Approx(want).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS(euclidean_resolvent_kernel(3, 1.0, 0.0));
    CHECK_THROWS(exterior_pair(4, 0, 1.0, 1.0));
    CHECK_THROWS(exterior_pair(3, 0, cplx(-1.0, 0.0), 1.0));
}
