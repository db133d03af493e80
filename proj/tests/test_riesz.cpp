#include "doctest.h"

#include "endslab/resolvent.hpp"
#include "endslab/riesz.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>

using namespace endslab;

namespace {

constexpr double kPi = std::numbers::pi;

// Radial Fourier transform on R^3 of exp(-r^2).
double gaussian_hat(double xi) { return std::pow(kPi, 1.5) * std::exp(-0.25 * xi * xi); }

// (1/(2 pi^2 r)) int_0^inf xi^(1+a) sin(xi r) ghat(xi) dxi: the radial inverse transform of |xi|^a ghat.
double radial_multiplier(double r, double a) {
    auto f = [&](double xi) { return std::pow(xi, 1.0 + a) * std::sin(xi * r) * gaussian_hat(xi); };
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 20.0, 15, 1e-14);
    return v / (2 * kPi * kPi * r);
}

double bump(double r) {
    const double u = (r - 0.5) / 2.5;
    return std::abs(u) >= 1.0 ? 0.0 : std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace

TEST_CASE("k quadrature integrates 1/(k^2 + t)") {
    const QuadratureSpec spec = QuadratureSpec::make();
    for (double t : {1e-12, 1e-6, 1e-2, 1.0, 100.0}) {
        double s = spec.remainder_weight();
        for (std::size_t i = 0; i < spec.nodes.size(); ++i) s += spec.weights[i] / (spec.nodes[i] * spec.nodes[i] + t);
        CHECK(s / (0.5 * kPi / std::sqrt(t)) == doctest::Approx(1.0).epsilon(1e-6));
    }
    const QuadratureSpec c = spec.coarser();
    CHECK(c.nodes.size() < spec.nodes.size());
    CHECK_THROWS(c.coarser());
}

TEST_CASE("zonal harmonics") {
    CHECK(zonal_harmonic(2, 3, 0.3) == doctest::Approx(0.5 * (3 * 0.09 - 1)).epsilon(1e-14));
    CHECK(zonal_harmonic_derivative(2, 3, 0.3) == doctest::Approx(0.9).epsilon(1e-14));
    for (int j : {0, 1, 4}) CHECK(zonal_harmonic(j, 5, 1.0) == doctest::Approx(1.0));
    // n = 5: C_1^{3/2}(c) / C_1^{3/2}(1) = c
    CHECK(zonal_harmonic(1, 5, -0.4) == doctest::Approx(-0.4));
}

TEST_CASE("flat Riesz kernel matches the Euclidean closed form") {
    const ModelManifold f = ModelManifold::flat_one_end(3, 4000.0);
    RieszEngine engine(f);
    const PointM z = PointM::on_meridian(3, 0.7, 0.0);
    for (double rp : {0.3, 2.0, 15.0}) {
        for (double gamma : {0.0, 0.8, 2.5}) {
            if (gamma == 0.0 && rp == 0.7) continue;
            const PointM zp = PointM::on_meridian(3, rp, gamma);
            const double c = std::cos(gamma);
            const double d2 = 0.49 + rp * rp - 1.4 * rp * c;
            const OneFormSample t = engine.kernel(z, zp);
            CHECK(t.dr == doctest::Approx(-(0.7 - rp * c) / (kPi * kPi * d2 * d2)).epsilon(1e-6));
            CHECK(std::abs(t.angular) == doctest::Approx(rp * std::sin(gamma) / (kPi * kPi * d2 * d2)).epsilon(1e-6).scale(1e-12));
        }
    }
    // coarser k rule agrees
    RieszEngine coarse(f, QuadratureSpec::make().coarser());
    const PointM zp = PointM::on_meridian(3, 3.0, 1.0);
    CHECK(coarse.kernel(z, zp).dr == doctest::Approx(engine.kernel(z, zp).dr).epsilon(1e-5));
    CHECK_THROWS(engine.kernel(z, z));
}

TEST_CASE("Riesz kernel rows: r'^{1-n} through the neck, r'^{-n} on one end") {
    const ModelManifold m = ModelManifold::default_two_end(3, 4000.0);
    const HarmonicProfile prof(m);
    RieszEngine engine(m);
    std::vector<double> rp;
    for (double r = 20.0; r <= 2000.0; r *= 1.6) rp.push_back(r);
    std::vector<double> ratios;
    for (double rz : {-1.4, -0.6, 0.3}) {
        const RieszRow row = riesz_kernel_row(engine, prof, PointM::on_meridian(3, rz, 0.0), EndSide::plus, rp);
        CHECK(row.fit.slope == doctest::Approx(-2.0).epsilon(0.05));
        CHECK_FALSE(row.flagged);
        ratios.push_back(row.coefficient / row.dphi);
    }
    for (double q : ratios) {
        CHECK(q == doctest::Approx(ratios[0]).epsilon(0.05));
        CHECK(q == doctest::Approx(1.0 / (2 * kPi * kPi)).epsilon(0.02));
    }

    const ModelManifold f = ModelManifold::flat_one_end(3, 4000.0);
    const HarmonicProfile fp(f);
    RieszEngine fe(f);
    const RieszRow flat = riesz_kernel_row(fe, fp, PointM::on_meridian(3, 1.3, 0.4), EndSide::plus, rp);
    CHECK(flat.fit.slope == doctest::Approx(-3.0).epsilon(0.1 / 3));
    CHECK(flat.dphi == 0.0);
}

TEST_CASE("square root and inverse square root on a flat Gaussian") {
    const ModelManifold f = ModelManifold::flat_one_end(3, 400.0);
    RieszEngine engine(f);
    auto g = [](double r) { return std::exp(-r * r); };
    const std::vector<double> nodes{0.3, 0.8, 1.5, 2.5};
    const RadialSamples up = engine.sqrt_laplacian(0, g, 0.0, 8.0, nodes);
    const RadialSamples down = engine.inverse_sqrt(0, g, 0.0, 8.0, nodes);
    auto lg = [](double r) { return (6.0 - 4.0 * r * r) * std::exp(-r * r); };
    const RadialSamples mixed = engine.inverse_sqrt(0, lg, 0.0, 8.0, nodes);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        const double r = nodes[q];
        CHECK(up.value[q] == doctest::Approx(radial_multiplier(r, 1.0)).epsilon(1e-4).scale(1e-4));
        CHECK(down.value[q] == doctest::Approx(radial_multiplier(r, -1.0)).epsilon(1e-4));
        CHECK(mixed.value[q] == doctest::Approx(up.value[q]).epsilon(1e-4).scale(1e-4));
    }
}

TEST_CASE("Delta^{-1/2} Delta w = Delta^{1/2} w on the two-end model") {
    const ModelManifold m = ModelManifold::default_two_end(3, 400.0);
    RieszEngine engine(m);
    auto lw = [&](double r) {
        const double h = 1e-3;
        const double d1 = (bump(r - 2 * h) - 8 * bump(r - h) + 8 * bump(r + h) - bump(r + 2 * h)) / (12 * h);
        const double d2 = (-bump(r - 2 * h) + 16 * bump(r - h) - 30 * bump(r) + 16 * bump(r + h) - bump(r + 2 * h)) / (12 * h * h);
        const WarpValue w = m.warp(r);
        return -d2 - 2.0 * w.df / w.f * d1;
    };
    const std::vector<double> nodes{-1.0, 0.2, 1.1, 2.0};
    // Delta^{-1/2}(Delta w) and Delta^{1/2} w are the same function
    const RadialSamples a = engine.inverse_sqrt(0, lw, -2.0, 3.0, nodes);
    const RadialSamples b = engine.sqrt_laplacian(0, bump, -2.0, 3.0, nodes);
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        CHECK(a.value[q] == doctest::Approx(b.value[q]).epsilon(1e-4).scale(1e-4));
        CHECK(a.derivative[q] == doctest::Approx(b.derivative[q]).epsilon(1e-4).scale(1e-4));
    }
}

TEST_CASE("riesz_apply on a mode-1 field") {
    const ModelManifold f = ModelManifold::flat_one_end(3, 400.0);
    RieszEngine engine(f);
    // g = x_1 e^{-r^2} = r e^{-r^2} Y_1; Delta^{-1/2} g is checked at two points on a common radius
    FieldOnM g{{FieldMode{1, [](double r) { return r * std::exp(-r * r); }, 0.0, 8.0}}};
    const std::vector<PointM> pts{PointM::on_meridian(3, 1.0, 0.0), PointM::on_meridian(3, 1.0, kPi / 2)};
    const auto t = engine.riesz_apply(g, pts);
    // on the axis the angular part vanishes; on the equator the radial part vanishes
    CHECK(std::abs(t[0].angular) < 1e-12);
    CHECK(std::abs(t[1].dr) < 1e-12);
    // mode-1 relation on a sphere: |angular at equator| = value / r, radial at pole = derivative
    const RadialSamples s = engine.inverse_sqrt(1, g.modes[0].profile, 0.0, 8.0, {1.0});
    CHECK(t[0].dr == doctest::Approx(s.derivative[0]));
    CHECK(std::abs(t[1].angular) == doctest::Approx(std::abs(s.value[0])));
}

TEST_CASE("L^p norms of radial functions") {
    const ModelManifold f = ModelManifold::flat_one_end(3, 1e5);
    for (double p : {1.0, 2.0, 3.5}) {
        const LpNorm a = lp_norm(f, [](double) { return 1.0; }, p, 0.0, 1.0);
        CHECK(a.value == doctest::Approx(std::pow(4 * kPi / 3, 1.0 / p)).epsilon(1e-10));
    }
    const double K = 1e4;
    const LpNorm three = lp_norm(f, [](double r) { return 1.0 / r; }, 3.0, 1.0, K);
    CHECK(three.value == doctest::Approx(std::cbrt(4 * kPi * std::log(K))).epsilon(1e-8));
    CHECK(three.diverging);
    const LpNorm four = lp_norm(f, [](double r) { return 1.0 / r; }, 4.0, 1.0, K);
    CHECK(four.value == doctest::Approx(std::pow(4 * kPi * (1.0 - 1.0 / K), 0.25)).epsilon(1e-8));
    CHECK_FALSE(four.diverging);
    CHECK_THROWS(lp_norm(f, [](double) { return 1.0; }, 0.5, 0.0, 1.0));
}

TEST_CASE("threshold family and a short threshold sweep") {
    const ModelManifold m = ModelManifold::default_two_end(3, 1e4);
    const ThresholdFamily F{2.0, 500.0};
    const double lo = F.lo(m);
    CHECK(m.end_radius(lo) == doctest::Approx(2.0));
    CHECK(F(m, lo - 0.1) == 0.0);
    CHECK(F(m, F.hi(m) + 0.1) == 0.0);
    const double mid = lo + 48.0;  // rho = 50
    CHECK(F(m, mid) == doctest::Approx(1.0 / (50.0 * std::log(50.0))));

    RieszEngine engine(m);
    const PointM z0 = PointM::on_meridian(3, 0.3, 0.0);
    CHECK_THROWS(threshold_experiment(engine, 3.0, {1e2, 1e3, 1e4}, z0));
    const ExperimentReport rep = threshold_experiment(engine, 3.0, {1e2, 3e2, 1e3}, z0);
    for (const auto& c : rep.checks) {
        if (c.name.rfind("pairing", 0) == 0) CHECK(c.passed);
    }
    CHECK(rep.rows.size() == 3);
    CHECK(std::abs(rep.rows[2][2]) > std::abs(rep.rows[0][2]));
}
