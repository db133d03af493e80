#include "doctest.h"

#include "endslab/geometry.hpp"
#include "endslab/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace endslab;

TEST_CASE("warp values on exact regions and at the neck centre") {
    const ModelManifold m = ModelManifold::default_two_end();
    const WarpValue far = warp_eval(m, 2.0);
    CHECK(far.f == 2.0);
    CHECK(far.df == 1.0);
    CHECK(far.d2f == 0.0);
    const WarpValue mid = warp_eval(m, 0.0);
    CHECK(mid.f == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mid.df == 0.0);
    const double h = 1e-4;
    CHECK(mid.d2f == doctest::Approx((m.warp(h).f - 2 * mid.f + m.warp(-h).f) / (h * h)).epsilon(1e-6));
    const ModelManifold flat = ModelManifold::flat_one_end();
    const WarpValue w = warp_eval(flat, 0.5);
    CHECK(w.f == 0.5);
    CHECK(w.df == 1.0);
    CHECK_THROWS_AS(warp_eval(m, 401.0), std::domain_error);
    CHECK_THROWS_AS(warp_eval(flat, -0.1), std::domain_error);
}

TEST_CASE("neck polynomial is C2 across the matching points") {
    const ModelManifold m(3, WarpProfile::two_end(1.0, 0.5, 0.2, -0.1), 50.0);
    for (double R : {1.0, -1.0}) {
        const WarpValue in = m.warp(R * (1 - 1e-15));
        const WarpValue out = m.warp(R);
        CHECK(in.f == doctest::Approx(out.f).epsilon(1e-12));
        CHECK(in.df == doctest::Approx(out.df).epsilon(1e-12));
        CHECK(std::abs(in.d2f) < 1e-11);
    }
    // finite-difference curvature agrees with the analytic one at O(h^2)
    double prev = 0.0;
    for (double h : {1e-2, 5e-3}) {
        double worst = 0.0;
        for (double r : {-1.0, -0.4, 0.3, 1.0}) {
            const double fd = (m.warp(r + h).f - 2 * m.warp(r).f + m.warp(r - h).f) / (h * h);
            worst = std::max(worst, std::abs(fd - m.warp(r).d2f));
        }
        if (prev > 0.0) CHECK(worst < 0.3 * prev);
        prev = worst;
    }
    CHECK_THROWS(WarpProfile::two_end(1.0, 5.0));
    CHECK_THROWS(ModelManifold(2, WarpProfile::two_end(1.0, 0.5), 50.0));
    CHECK_THROWS(ModelManifold(3, WarpProfile::two_end(1.0, 0.5), 9.0));
}

TEST_CASE("volumes") {
    const ModelManifold flat = ModelManifold::flat_one_end();
    CHECK(volume_ball(flat, 0.0, 1.0) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
    const ModelManifold m = ModelManifold::default_two_end();
    CHECK(volume_ball(m, 0.0, 0.0) == 0.0);
    // neck part against adaptive quadrature
    const double neck = radial_measure(m, -1.0, 1.0);
    const double ref = integrate_adaptive([&](double r) { return std::pow(m.warp(r).f, 2); }, -1.0, 1.0).value;
    CHECK(neck == doctest::Approx(ref).epsilon(1e-13));
    double last = 0.0;
    for (double rho : {0.5, 1.0, 5.0, 50.0}) {
        const double v = volume_ball(m, 0.0, rho);
        CHECK(v > last);
        last = v;
    }
    CHECK(sphere_volume(3) == doctest::Approx(4.0 * std::numbers::pi));
    CHECK(sphere_volume(5) == doctest::Approx(8.0 * std::numbers::pi * std::numbers::pi / 3.0));
}

TEST_CASE("one-form norm") {
    const ModelManifold m = ModelManifold::default_two_end();
    const ModelManifold flat = ModelManifold::flat_one_end();
    CHECK(one_form_norm(m, 1.0, 0.0, 0.3) == 1.0);
    CHECK(one_form_norm(flat, 0.0, 1.0, 2.0) == 0.5);
    CHECK(one_form_norm(m, 3.0, 4.0, -1.0) == doctest::Approx(5.0));
}

TEST_CASE("points") {
    CHECK_THROWS(PointM(1.0, {1.0, 1.0, 0.0}));
    const PointM a = PointM::on_meridian(3, 1.0, 0.0);
    const PointM b = PointM::on_meridian(3, 2.0, std::numbers::pi / 3);
    CHECK(angle_cosine(a, b) == doctest::Approx(0.5));
}

TEST_CASE("Gauss-Legendre rules integrate polynomials exactly") {
    for (int order : {1, 4, 17, 64}) {
        const GaussRule& r = gauss_legendre(order);
        for (int deg = 0; deg < 2 * order; ++deg) {
            double s = 0.0;
            for (int i = 0; i < order; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
            const double want = deg % 2 ? 0.0 : 2.0 / (deg + 1);
            CHECK(s == doctest::Approx(want).epsilon(1e-13));
        }
    }
    const auto br = geometric_breaks(1.0, 1000.0, 2.0);
    CHECK(br.front() == 1.0);
    CHECK(br.back() == 1000.0);
}
