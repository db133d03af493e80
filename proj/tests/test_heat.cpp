#include "doctest.h"

#include "endslab/heat.hpp"
#include "endslab/resolvent.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace endslab;

TEST_CASE("contour identity against the closed form") {
    for (int n : {3, 5}) {
        for (double sigma : {0.5, 1.0, 2.0}) {
            const ContourIdentity c = contour_identity_check(n, sigma);
            CHECK(c.relative_error < 1e-10);
        }
    }
    const double s = 0.5;
    CHECK(contour_identity_check(3, s).rhs == doctest::Approx(std::pow(4 * std::numbers::pi, -1.5) * 8 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(contour_identity_check(3, 2.0).rhs == doctest::Approx(std::pow(4 * std::numbers::pi, -1.5) / 8 * std::exp(-1.0 / 16)).epsilon(1e-14));
}

TEST_CASE("flat heat kernel by the contour matches the Gaussian") {
    // Independent check of the Gaussian itself: the 3D heat kernel integrates to 1.
    auto g = [](double r) { return 4 * std::numbers::pi * r * r * euclidean_heat(3, 0.7, r); };
    CHECK(boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 30.0) == doctest::Approx(1.0).epsilon(1e-12));

    const ModelManifold f = ModelManifold::flat_one_end(3);
    ContourSpec spec;
    spec.check_conjugate = true;
    const HeatEngine engine(f, spec);
    const double r0 = 0.25, gamma = std::numbers::pi / 3;
    for (double t : {0.5, 5.0, 50.0}) {
        for (double d : {0.0, 1.0, 4.0, 10.0}) {
            const PointM z = PointM::on_meridian(3, r0, 0.0);
            const PointM zp = d == 0.0 ? z
                                       : PointM::on_meridian(3, r0 * std::cos(gamma) + std::sqrt(d * d - std::pow(r0 * std::sin(gamma), 2)), gamma);
            const HeatSample h = engine.kernel(t, z, zp);
            CHECK(h.value / euclidean_heat(3, t, d) == doctest::Approx(1.0).epsilon(1e-8));
            CHECK(h.imaginary < 1e-8);
        }
    }
    // literal contour (no vertex shift) agrees where there is no cancellation
    ContourSpec literal;
    literal.shift = 0.0;
    const HeatEngine le(f, literal);
    const PointM z = PointM::on_meridian(3, 0.5, 0.0), zp = PointM::on_meridian(3, 1.5, 0.3);
    CHECK(le.kernel(2.0, z, zp).value == doctest::Approx(engine.kernel(2.0, z, zp).value).epsilon(1e-9));
}

TEST_CASE("heat kernel symmetry, mass and semigroup on the two-end model") {
    const ModelManifold m(3, WarpProfile::two_end(1.0, 0.6, 0.3, -0.2), 400.0);
    const HeatEngine engine(m);
    const PointM a = PointM::on_meridian(3, 0.4, 0.2), b = PointM::on_meridian(3, -1.7, 1.0);
    for (double t : {0.5, 3.0}) {
        const double ab = engine.kernel(t, a, b).value;
        CHECK(ab > 0.0);
        CHECK(ab == doctest::Approx(engine.kernel(t, b, a).value).epsilon(1e-10));
    }
    for (double r : {-2.0, 0.3}) CHECK(heat_mass(engine, 1.0, r) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(semigroup_defect(engine, 0, 1.0, 2.0, 0.3, 1.5) < 1e-8);
    CHECK(semigroup_defect(engine, 2, 0.5, 1.5, -0.4, 0.8) < 1e-8);
}

TEST_CASE("radial derivative of the heat kernel against centered differences") {
    const ModelManifold m = ModelManifold::default_two_end();
    const HeatEngine engine(m);
    const double r = 0.3, h = 1e-3 * (1 + r);
    const PointM zp = PointM::on_meridian(3, 5.0, 0.6);
    auto H = [&](double rr) { return engine.kernel(4.0, PointM::on_meridian(3, rr, 0.0), zp).value; };
    const double d1 = (H(r + h) - H(r - h)) / (2 * h);
    const double d2 = (H(r + h / 2) - H(r - h / 2)) / h;
    const double rich = (4 * d2 - d1) / 3;
    CHECK(engine.kernel_dr(4.0, PointM::on_meridian(3, r, 0.0), zp).value == doctest::Approx(rich).epsilon(1e-7));
}

TEST_CASE("heat limit experiments") {
    const ModelManifold m = ModelManifold::default_two_end();
    const HarmonicProfile p(m);
    const HeatEngine engine(m);
    const std::vector<double> ts{100, 1000, 10000, 30000};
    const PointM z = PointM::on_meridian(3, 0.3, 0.4);
    for (int l : {0, 1}) CHECK(heat_limit_experiment(engine, p, z, 0.5, l, ts).passed());
    CHECK_THROWS(heat_limit_experiment(engine, p, z, 0.5, 0, {1e6, 2e6}));
    const auto off = offdiagonal_decay_experiment(engine, 0.5, 0.7, {100, 300, 1000, 3000, 10000, 30000}, false);
    CHECK(off.passed());
}
