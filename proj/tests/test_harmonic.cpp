#include "doctest.h"

#include "endslab/harmonic.hpp"
#include "endslab/modes.hpp"
#include "endslab/quadrature.hpp"
#include "endslab/radial_bvp.hpp"

#include <cmath>
#include <limits>

using namespace endslab;

TEST_CASE("Phi_+ on the symmetric fixture") {
    const ModelManifold m = ModelManifold::default_two_end();
    const HarmonicProfile p = phi_plus(m);
    CHECK(p.phi(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(bounded_harmonic_h(p, 0.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(p.phi(1e9) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(p.phi(-1e9) < 1e-9);
    CHECK(bounded_harmonic_h(p, 1e9) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(bounded_harmonic_h(p, -1e9) == doctest::Approx(-1.0).epsilon(1e-8));
    double prev = -1.0;
    for (double r = -50.0; r <= 50.0; r += 0.173) {
        const double v = p.phi(r);
        CHECK(v > prev);
        CHECK(p.dphi(r) > 0.0);
        CHECK(p.phi(r) + p.phi(-r) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(p.phi(r) + p.phi_minus(r) == doctest::Approx(1.0).epsilon(1e-14));
        prev = v;
    }
}

TEST_CASE("Phi_+ against an independent flux quadrature") {
    const ModelManifold m(3, WarpProfile::two_end(1.0, 0.6, 0.3, -0.2), 100.0);
    const HarmonicProfile p(m);
    auto g = [&](double s) { return std::pow(m.warp(s).f, -2.0); };
    const double inf = std::numeric_limits<double>::infinity();
    const double total = integrate_adaptive(g, -inf, 0.0, 1e-14).value + integrate_adaptive(g, 0.0, inf, 1e-14).value;
    CHECK(p.flux_integral() == doctest::Approx(total).epsilon(1e-11));
    for (double r : {-3.0, -0.7, 0.2, 0.95, 4.0}) {
        const double want = integrate_adaptive(g, -inf, r, 1e-14).value / total;
        CHECK(p.phi(r) == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("Phi_+ is proportional to the zero-energy solution decaying at the - end") {
    const ModelManifold m(3, WarpProfile::two_end(1.0, 0.6, 0.3, -0.2), 100.0);
    const HarmonicProfile p(m);
    const ModeGreen green(m, 0, 0.0);
    const double ref = green.psi_minus(-0.5).value.value().real() / p.phi(-0.5);
    for (double r : {-20.0, -1.0, 0.0, 0.7, 1.3, 30.0}) {
        CHECK(green.psi_minus(r).value.value().real() / p.phi(r) == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("expansion coefficient: limit vs closed form, symmetry and scaling") {
    const ModelManifold m = ModelManifold::default_two_end();
    const HarmonicProfile p(m);
    const auto plus = phi_expansion_coefficient(p, EndSide::plus);
    const auto minus = phi_expansion_coefficient(p, EndSide::minus);
    CHECK(plus.limit == doctest::Approx(plus.closed_form).epsilon(1e-8));
    CHECK(minus.limit == doctest::Approx(minus.closed_form).epsilon(1e-8));
    CHECK(plus.limit == doctest::Approx(minus.limit).epsilon(1e-8));
    // f -> lambda f, r -> lambda r: A' scales by lambda^{n-2}
    for (int n : {3, 5}) {
        const double lam = 2.5;
        const HarmonicProfile a(ModelManifold(n, WarpProfile::two_end(1.0, 0.5, 0.1, 0.1), 100.0));
        const HarmonicProfile b(ModelManifold(n, WarpProfile::two_end(lam, lam * 0.5, lam * 0.1, lam * 0.1), 250.0));
        const double ca = phi_expansion_coefficient(a, EndSide::plus).limit;
        const double cb = phi_expansion_coefficient(b, EndSide::plus).limit;
        CHECK(cb / ca == doctest::Approx(std::pow(lam, n - 2)).epsilon(1e-8));
    }
    // A' read off the profile at large rho
    const double rho = 1e5;
    CHECK(std::pow(rho, 1.0) * p.phi_minus(rho) == doctest::Approx(plus.closed_form).epsilon(1e-12));
}

TEST_CASE("harmonicity residual and Dirichlet energy") {
    const ModelManifold m = ModelManifold::default_two_end();
    const HarmonicProfile p(m);
    const RadialGrid g = RadialGrid::graded(m, 2001);
    std::vector<double> nodes(g.nodes.begin() + 1, g.nodes.end() - 1);
    const auto res = harmonic_residual(p, nodes);
    CHECK(res.max_absolute < 1e-8);
    CHECK(res.max_relative < 1e-8);
    const int n = m.dimension();
    const double a = phi_expansion_coefficient(p, EndSide::plus).closed_form;
    CHECK(dirichlet_energy_h(p) == doctest::Approx(4.0 * sphere_volume(n) * a * (n - 2)).epsilon(1e-10));
    // L_{0,k} Phi = k^2 Phi
    const RadialOperator op{&m, 0, 1.0};
    const cplx v = radial_apply_at(op, [&](double x) { return cplx(p.phi(x)); }, 0.3, 1e-2);
    CHECK(v.real() == doctest::Approx(p.phi(0.3)).epsilon(1e-9));
}

TEST_CASE("one-end model") {
    const HarmonicProfile p(ModelManifold::flat_one_end());
    CHECK(p.phi(3.0) == 1.0);
    CHECK(p.dphi(3.0) == 0.0);
    CHECK_THROWS(phi_expansion_coefficient(p, EndSide::plus));
}
