#include "doctest.h"

#include "endslab/resolvent.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

using namespace endslab;

namespace {

// z at radius r0 on the pole, z' at angle gamma with |z - z'| = d.
std::pair<PointM, PointM> flat_pair(double r0, double gamma, double d) {
    const double rp = r0 * std::cos(gamma) + std::sqrt(d * d - r0 * r0 * std::sin(gamma) * std::sin(gamma));
    return {PointM::on_meridian(3, r0, 0.0), PointM::on_meridian(3, rp, gamma)};
}

std::vector<double> geometric(double a, double b, int count) {
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(a * std::pow(b / a, double(i) / (count - 1)));
    return v;
}

}  // namespace

TEST_CASE("euclidean kernel normalization from the distributional identity") {
    // int K(|x|) (-Delta phi)(x) dx = phi(0) for phi = exp(-|x|^2)
    for (int n : {3, 5}) {
        for (double k : {0.0, 0.7}) {
            boost::math::quadrature::tanh_sinh<double> ts;
            const double omega = sphere_volume(n);
            auto integrand = [&](double r) {
                if (r < 1e-60 || r > 30.0) return 0.0;
                const double lap = (4.0 * r * r - 2.0 * n) * std::exp(-r * r);
                return euclidean_resolvent(n, k, r) * (-lap + k * k * std::exp(-r * r)) * omega * std::pow(r, n - 1);
            };
            const double v = ts.integrate(integrand, 0.0, std::numeric_limits<double>::infinity());
            CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    CHECK(euclidean_resolvent(3, 1.3, 2.0) / euclidean_resolvent(3, 0.0, 2.0) ==
          doctest::Approx(std::exp(-2.6)).epsilon(1e-14));
    CHECK(euclidean_resolvent(5, 1e-9, 2.0) == doctest::Approx(euclidean_resolvent(5, 0.0, 2.0)).epsilon(1e-8));
    CHECK_THROWS(euclidean_resolvent(3, 1.0, 0.0));
}

TEST_CASE("flat one-end resolvent matches the closed form") {
    const ModelManifold m = ModelManifold::flat_one_end(3);
    ResolventEngine engine(m);
    double worst = 0.0;
    for (double k : {0.0, 0.25, 1.0, 2.0}) {
        for (double d : geometric(0.5, 50.0, 9)) {
            auto [z, zp] = flat_pair(0.25, std::numbers::pi / 3.0, d);
            const double v = engine.kernel(k, z, zp).value.real();
            const double e = euclidean_resolvent(3, k, d);
            worst = std::max(worst, std::abs(v / e - 1.0));
        }
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("resolvent symmetry, positivity and decay through the neck") {
    const ModelManifold m(3, WarpProfile::two_end(1.0, 0.6, 0.3, -0.2), 400.0);
    ResolventEngine engine(m);
    const PointM a = PointM::on_meridian(3, 0.4, 0.2);
    const PointM b = PointM::on_meridian(3, -2.5, 1.1);
    const PointM c = PointM::on_meridian(3, 3.5, 2.0);
    for (double k : {0.0, 0.5, 1.5}) {
        const double ab = engine.kernel(k, a, b).value.real();
        CHECK(ab > 0.0);
        CHECK(ab == engine.kernel(k, b, a).value.real());
        CHECK(engine.kernel(k, a, c).value.real() == engine.kernel(k, c, a).value.real());
    }
    // opposite ends, k = 1: value * e^{k(r + r' - 2R)} stays bounded as both move out
    double prev = 0.0;
    for (double s : {5.0, 10.0, 20.0, 40.0}) {
        const PointM p = PointM::on_meridian(3, s, 0.0);
        const PointM q = PointM::on_meridian(3, -s, 0.5);
        const double v = engine.kernel(1.0, p, q).value.real();
        const double scaled = v * std::exp(2.0 * s - 2.0);
        CHECK(scaled > 0.0);
        if (prev > 0.0) CHECK(scaled < prev);
        prev = scaled;
    }
    CHECK_THROWS(engine.kernel(1.0, a, a));
}

TEST_CASE("rb0 coefficient reproduces the harmonic profile") {
    const ModelManifold m = ModelManifold::default_two_end();
    const HarmonicProfile prof(m);
    ResolventEngine engine(m);
    const auto rp = geometric(30.0, 3000.0, 12);
    for (double rz : {0.0, 0.6, -1.4}) {
        const PointM z = PointM::on_meridian(3, rz, 0.9);
        for (double kappa : {0.5, 1.0, 2.0}) {
            for (EndSide end : {EndSide::plus, EndSide::minus}) {
                const auto res = rb0_leading_coefficient(engine, z, end, kappa, rp);
                const double target = prof.phi_end(end, rz);
                CHECK(res.limit == doctest::Approx(target).epsilon(0.02));
                CHECK_FALSE(res.levels_disagree);
            }
        }
    }
    const ModelManifold flat = ModelManifold::flat_one_end(3);
    ResolventEngine fe(flat);
    for (double kappa : {0.5, 2.0}) {
        const auto res = rb0_leading_coefficient(fe, PointM::on_meridian(3, 1.3, 0.4), EndSide::plus, kappa, rp);
        CHECK(res.limit == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("parametrix error order with and without the profile correction") {
    const ModelManifold m = ModelManifold::default_two_end();
    const HarmonicProfile prof(m);
    ResolventEngine engine(m);
    const auto rp = geometric(30.0, 3000.0, 12);
    const PointM z = PointM::on_meridian(3, 0.3, 0.7);
    const auto with = parametrix_error_order(engine, prof, 1.0, z, EndSide::plus, rp, true);
    const auto without = parametrix_error_order(engine, prof, 1.0, z, EndSide::plus, rp, false);
    CHECK_FALSE(with.flagged);
    CHECK(with.fit.slope == doctest::Approx(2.0).epsilon(0.075));
    CHECK(without.fit.slope == doctest::Approx(1.0).epsilon(0.15));

    const ModelManifold flat = ModelManifold::flat_one_end(3);
    ResolventEngine fe(flat);
    const HarmonicProfile fp(flat);
    const auto exact = parametrix_error_order(fe, fp, 1.0, PointM::on_meridian(3, 0.5, 0.7), EndSide::plus, rp, true);
    CHECK(exact.flagged);
}

TEST_CASE("log-log fit recovers a planted power law") {
    std::vector<double> x, y;
    for (int i = 0; i < 10; ++i) {
        x.push_back(std::pow(2.0, i));
        y.push_back(3.0 * std::pow(x.back(), -1.5));
    }
    const LogLogFit f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-13));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(f.r2 == doctest::Approx(1.0));
    y[3] = -1.0;
    CHECK_THROWS(fit_loglog(x, y));
    CHECK_THROWS(fit_loglog({1, 2}, {1, 2}));
}
