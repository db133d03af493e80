#include "doctest.h"

#include "endslab/experiments.hpp"
#include "endslab/lab.hpp"

#include <algorithm>
#include <cmath>

using namespace endslab;

TEST_CASE("config parsing") {
    const auto c = ExperimentConfig::parse("# comment\nexperiment = flat-resolvent\n k_list = 0, 0.5 ,2  # trailing\n\nd_count=4\n");
    CHECK(c.experiment() == "flat-resolvent");
    CHECK(c.get_list("k_list", {}) == std::vector<double>{0.0, 0.5, 2.0});
    CHECK(c.get_int("d_count", 0) == 4);
    CHECK(c.get_double("missing", 1.5) == 1.5);
    CHECK_THROWS_AS(ExperimentConfig::parse("no equals sign"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("a = 1\na = 2"), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("a = x1").get_double("a", 0.0), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::parse("a = 1.5").get_int("a", 0), ConfigError);
    CHECK_THROWS_AS(ExperimentConfig::load("/nonexistent/file.cfg"), ConfigError);
}

TEST_CASE("config hash is order independent and FNV-1a") {
    // published FNV-1a 64 test vectors
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
    const auto a = ExperimentConfig::parse("x = 1\ny = 2\n");
    const auto b = ExperimentConfig::parse("y = 2\nx = 1\n");
    CHECK(a.hash() == b.hash());
    CHECK(a.hash().size() == 16);
    CHECK(a.hash() != ExperimentConfig::parse("x = 1\ny = 3\n").hash());
}

TEST_CASE("models from config") {
    ExperimentConfig c;
    CHECK(model_from_config(c).two_ended());
    c.set("model", "flat-one-end");
    CHECK_FALSE(model_from_config(c).two_ended());
    c.set("dimension", "4");
    CHECK_THROWS_AS(model_from_config(c), ConfigError);
    c.set("dimension", "3");
    c.set("model", "three-end");
    CHECK_THROWS_AS(model_from_config(c), ConfigError);
}

TEST_CASE("run: exit codes") {
    ExperimentConfig unknown;
    unknown.set("experiment", "no-such-experiment");
    CHECK(run_checked(unknown).exit_code == exit_config);

    ExperimentConfig bad_key;
    bad_key.set("experiment", "contour-identity");
    bad_key.set("k_list", "1");
    CHECK(run_checked(bad_key).exit_code == exit_config);

    ExperimentConfig ok;
    ok.set("experiment", "contour-identity");
    const RunOutcome good = run_checked(ok);
    CHECK(good.exit_code == exit_pass);
    CHECK(good.report.experiment == "contour-identity");
    CHECK(good.report.rows.size() == 6);

    ExperimentConfig strict = ok;
    strict.set("tolerance", "1e-30");
    CHECK(run_checked(strict).exit_code == exit_tolerance);

    // a numerical refusal: heat limit with r' beyond the model
    ExperimentConfig far;
    far.set("experiment", "heat-limit");
    far.set("t_list", "1e6, 2e6");
    far.set("l_list", "0");
    CHECK(run_checked(far).exit_code == exit_numerical);
}

TEST_CASE("catalog covers the thirteen criteria once") {
    std::vector<int> seen;
    for (const auto& e : experiment_catalog()) {
        if (e.criterion > 0) seen.push_back(e.criterion);
    }
    std::sort(seen.begin(), seen.end());
    REQUIRE(seen.size() == 13);
    for (int i = 0; i < 13; ++i) CHECK(seen[i] == i + 1);
}

TEST_CASE("flat-oracle experiment and determinism") {
    ExperimentConfig c;
    c.set("experiment", "flat-oracle");
    c.set("k_list", "0, 1");
    c.set("d_count", "3");
    c.set("t_list", "1, 10");
    c.set("d_list", "0, 3");
    const RunOutcome a = run_checked(c), b = run_checked(c);
    CHECK(a.exit_code == exit_pass);
    CHECK(a.report.to_csv(c.hash()) == b.report.to_csv(c.hash()));
    CHECK(a.report.checks.size() == 3);
}

TEST_CASE("flat_pair distance") {
    const auto [z, zp] = flat_pair(3, 0.25, 1.0, 4.0);
    const double c = angle_cosine(z, zp);
    CHECK(std::sqrt(z.r * z.r + zp.r * zp.r - 2 * z.r * zp.r * c) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK_THROWS(flat_pair(3, 1.0, 1.5, 0.5));
}

TEST_CASE("log-log fits") {
    std::vector<double> x, exact, shifted, flat;
    for (int i = 0; i < 8; ++i) {
        const double r = 10.0 * std::pow(2.0, i);
        x.push_back(r);
        exact.push_back(std::pow(r, -2.0));
        shifted.push_back(std::pow(r, -2.0) * (1.0 + 1.0 / r));
        flat.push_back(3.0);
    }
    const LogLogFit e = fit_loglog(x, exact);
    CHECK(e.slope == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(e.residual < 1e-12);
    CHECK(fit_loglog(x, flat).slope == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    // r^{-2}(1 + 1/r): the slope approaches -2 as the window moves outward
    const std::vector<double> x_in(x.begin(), x.begin() + 5), y_in(shifted.begin(), shifted.begin() + 5);
    const std::vector<double> x_out(x.begin() + 3, x.end()), y_out(shifted.begin() + 3, shifted.end());
    const double s_in = fit_loglog(x_in, y_in).slope, s_out = fit_loglog(x_out, y_out).slope;
    CHECK(std::abs(s_out + 2.0) < std::abs(s_in + 2.0));
    CHECK(s_out == doctest::Approx(-2.0).epsilon(0.01));
}
