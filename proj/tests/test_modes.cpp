#include "doctest.h"

#include "endslab/modes.hpp"

#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <numbers>

using namespace endslab;

TEST_CASE("eigenvalues") {
    CHECK(eigenvalue(0, 3) == 0.0);
    CHECK(eigenvalue(1, 3) == 2.0);
    CHECK(eigenvalue(2, 5) == 10.0);
}

TEST_CASE("zonal kernels") {
    const double pi = std::numbers::pi;
    CHECK(zonal_kernel(0, 0.3, 3) == doctest::Approx(1.0 / (4 * pi)));
    // j = 1 at a pole: sum over the real basis sqrt(3/4pi) (x, y, z) at (0,0,1)
    CHECK(zonal_kernel(1, 1.0, 3) == doctest::Approx(3.0 / (4 * pi)));
    CHECK(zonal_kernel(2, 0.0, 3) == doctest::Approx(-5.0 / (8 * pi)));
    for (int n : {3, 5, 7}) CHECK(zonal_kernel(0, -0.2, n) * sphere_volume(n) == doctest::Approx(1.0));
    for (int j = 0; j <= 64; ++j) {
        for (double c : {-1.0, -0.37, 0.0, 0.5, 0.999}) {
            const double want = (2 * j + 1) / (4 * pi) * boost::math::legendre_p(j, c);
            CHECK(zonal_kernel(j, c, 3) == doctest::Approx(want).epsilon(1e-11).scale(1e-3));
        }
    }
    // reproducing property on S^4: integral of Z_j(w.e) Z_j(w.e) = Z_j(1)
    for (int j : {0, 1, 3}) {
        const int n = 5;
        const double area_s3 = sphere_volume(4);
        double s = 0.0;
        const int N = 4000;
        for (int i = 0; i < N; ++i) {
            const double th = (i + 0.5) * pi / N;
            const double z = zonal_kernel(j, std::cos(th), n);
            s += z * z * std::pow(std::sin(th), n - 2) * area_s3 * pi / N;
        }
        CHECK(s == doctest::Approx(zonal_kernel(j, 1.0, n)).epsilon(1e-6));
    }
    std::vector<double> z, dz;
    zonal_kernels(10, 0.3, 5, z, &dz);
    for (int j = 0; j <= 10; ++j) {
        CHECK(z[j] == doctest::Approx(zonal_kernel(j, 0.3, 5)).epsilon(1e-13));
        const double h = 1e-5;
        const double fd = (zonal_kernel(j, 0.3 + h, 5) - zonal_kernel(j, 0.3 - h, 5)) / (2 * h);
        CHECK(dz[j] == doctest::Approx(fd).epsilon(1e-7).scale(1e-6));
        CHECK(dz[j] == doctest::Approx(zonal_kernel_derivative(j, 0.3, 5)).epsilon(1e-13).scale(1e-12));
    }
    CHECK_THROWS(zonal_kernel(1, 1.5, 3));
}

TEST_CASE("radial operator annihilates harmonic powers on flat space") {
    const ModelManifold flat = ModelManifold::flat_one_end(3, 50.0);
    std::vector<double> r;
    for (int i = 0; i <= 400; ++i) r.push_back(1.0 + 0.01 * i);
    for (int n : {3, 5}) {
        const ModelManifold m = ModelManifold::flat_one_end(n, 50.0);
        for (int j : {0, 2}) {
            std::vector<cplx> u;
            for (double x : r) u.push_back(std::pow(x, -(n - 2 + j)));
            const auto lu = radial_apply({&m, j, 0.0}, r, u);
            double worst = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) {
                // relative to the size of the individual terms of the operator
                const double scale = (n - 2 + j) * (n - 1 + j) * std::abs(u[i]) / (r[i] * r[i]);
                worst = std::max(worst, std::abs(lu[i]) / scale);
            }
            CHECK(worst < 1e-4);
        }
    }
    // second-order convergence under refinement
    auto err = [&](double h) {
        std::vector<double> x;
        std::vector<cplx> u;
        for (double s = 1.0; s <= 2.0 + 1e-12; s += h) {
            x.push_back(s);
            u.push_back(std::exp(-s) / s);
        }
        const auto lu = radial_apply({&flat, 0, 1.0}, x, u);
        double w = 0.0;
        for (auto v : lu) w = std::max(w, std::abs(v));
        return w;
    };
    CHECK(err(0.005) < err(0.01) / 3.0);
    CHECK_THROWS(radial_apply({&flat, 0, 0.0}, {1, 2, 3}, {1.0, 2.0, 3.0}));
    // pointwise stencil
    const cplx res = radial_apply_at({&flat, 1, 0.0}, [](double x) { return cplx(std::pow(x, -2.0)); }, 3.0, 1e-2);
    CHECK(std::abs(res) < 1e-10);
}

TEST_CASE("synthesis") {
    const double pi = std::numbers::pi;
    const auto only0 = synthesize_kernel({2.0}, 0.1, 3);
    CHECK(only0.value.real() == doctest::Approx(2.0 / (4 * pi)));
    // antipodal alternating sum
    std::vector<cplx> modes;
    for (int j = 0; j < 30; ++j) modes.push_back(std::pow(0.5, j));
    const auto anti = synthesize_kernel(modes, -1.0, 3);
    double want = 0.0;
    for (int j = 0; j < 30; ++j) want += std::pow(-0.5, j) * (2 * j + 1) / (4 * pi);
    CHECK(anti.value.real() == doctest::Approx(want));
    CHECK(anti.last_ratio == doctest::Approx(0.5 * 59.0 / 57.0));
    // generating function: sum t^j P_j(c) = (1 - 2ct + t^2)^{-1/2}
    const double t = 0.4, c = 0.3;
    const auto gf = sum_modes([&](int j) { return cplx(std::pow(t, j) * 4 * pi / (2 * j + 1)); }, c, 3);
    CHECK(gf.value.real() == doctest::Approx(1.0 / std::sqrt(1 - 2 * c * t + t * t)).epsilon(1e-8));
    CHECK_THROWS_AS(sum_modes([](int) { return cplx(1.0); }, 1.0, 3), NumericalError);
}
