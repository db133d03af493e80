#include "endslab/experiments.hpp"

#include "endslab/cohomology.hpp"
#include "endslab/harmonic.hpp"
#include "endslab/heat.hpp"
#include "endslab/radial_bvp.hpp"
#include "endslab/resolvent.hpp"
#include "endslab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>

namespace endslab {

namespace {

std::vector<double> geometric(double a, double b, int count) {
    if (count < 2 || !(a > 0.0) || !(b > a)) throw ConfigError("config: geometric range needs 0 < min < max and count >= 2");
    std::vector<double> v;
    for (int i = 0; i < count; ++i) v.push_back(a * std::pow(b / a, double(i) / (count - 1)));
    return v;
}

std::vector<double> geometric_keys(const ExperimentConfig& c, const std::string& prefix, double a, double b, int count) {
    return geometric(c.get_double(prefix + "_min", a), c.get_double(prefix + "_max", b), c.get_int(prefix + "_count", count));
}

// Model with per-experiment defaults for the kind and r_max.
ModelManifold model_with(const ExperimentConfig& c, const std::string& kind, double r_max) {
    ExperimentConfig m = c;
    if (!c.has("model")) m.set("model", kind);
    if (!c.has("r_max")) m.set("r_max", format_double(r_max));
    return model_from_config(m);
}

// Flat control sharing dimension and r_max with the main model.
ModelManifold flat_control(const ModelManifold& main) {
    return ModelManifold(main.dimension(), WarpProfile::flat_one_end(1.0), main.r_max());
}

ExperimentReport tagged(const ExperimentReport& rep, const std::vector<std::string>& names,
                        const std::vector<double>& values) {
    ExperimentReport out;
    out.columns = names;
    out.columns.insert(out.columns.end(), rep.columns.begin(), rep.columns.end());
    for (const auto& row : rep.rows) {
        std::vector<double> r = values;
        r.insert(r.end(), row.begin(), row.end());
        out.rows.push_back(std::move(r));
    }
    out.fits = rep.fits;
    out.checks = rep.checks;
    out.notes = rep.notes;
    return out;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

PointM pole_point(int n, double r) { return PointM::on_meridian(n, r, 0.0); }

void require_two_end(const ModelManifold& m, const std::string& what) {
    if (!m.two_ended()) throw ConfigError(what + " needs model = two-end");
}

// ---------------------------------------------------------------------------

ExperimentReport flat_resolvent(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "flat-one-end", 400.0);
    if (m.two_ended()) throw ConfigError("flat-resolvent needs model = flat-one-end");
    const int n = m.dimension();
    ResolventEngine engine(m);
    const auto ks = c.get_list("k_list", {0.0, 0.25, 0.5, 1.0, 1.5, 2.0});
    const auto ds = geometric_keys(c, "d", 0.5, 50.0, 12);
    const double r0 = c.get_double("r0", 0.25), gamma = c.get_double("gamma", std::numbers::pi / 3);
    ExperimentReport rep;
    rep.columns = {"k", "d", "value", "exact", "rel_error"};
    double worst = 0.0;
    for (double k : ks) {
        for (double d : ds) {
            const auto [z, zp] = flat_pair(n, r0, gamma, d);
            const double v = engine.kernel(k, z, zp).value.real();
            const double e = euclidean_resolvent(n, k, d);
            const double err = std::abs(v / e - 1.0);
            worst = std::max(worst, err);
            rep.add_row({k, d, v, e, err});
        }
    }
    rep.check_close("max_rel_error", worst, 0.0, c.get_double("tolerance", 1e-6),
                    "synthesized resolvent against e^{-kd} d^{2-n} f_n(kd)");
    return rep;
}

ContourSpec contour_from(const ExperimentConfig& c) {
    ContourSpec spec;
    spec.angle = c.get_double("contour_angle", spec.angle);
    spec.nodes = c.get_int("contour_nodes", spec.nodes);
    spec.shift = c.get_double("shift", spec.shift);
    return spec;
}

ExperimentReport flat_heat(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "flat-one-end", 400.0);
    if (m.two_ended()) throw ConfigError("flat-heat needs model = flat-one-end");
    const int n = m.dimension();
    ContourSpec spec = contour_from(c);
    spec.check_conjugate = true;
    const HeatEngine engine(m, spec);
    const auto ts = c.get_list("t_list", {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0});
    const auto ds = c.get_list("d_list", {0.0, 1.0, 2.0, 4.0, 6.0, 8.0, 10.0});
    const double r0 = c.get_double("r0", 0.25), gamma = c.get_double("gamma", std::numbers::pi / 3);
    ExperimentReport rep;
    rep.columns = {"t", "d", "value", "exact", "rel_error", "imaginary"};
    double worst = 0.0, worst_im = 0.0;
    for (double t : ts) {
        for (double d : ds) {
            const auto [z, zp] = flat_pair(n, r0, gamma, d);
            const HeatSample h = engine.kernel(t, z, zp);
            const double e = euclidean_heat(n, t, d);
            const double err = std::abs(h.value / e - 1.0);
            worst = std::max(worst, err);
            worst_im = std::max(worst_im, h.imaginary);
            rep.add_row({t, d, h.value, e, err, h.imaginary});
        }
    }
    const double tol = c.get_double("tolerance", 1e-4);
    rep.check_close("max_rel_error", worst, 0.0, tol, "contour heat kernel against (4 pi t)^{-n/2} e^{-d^2/4t}");
    rep.check_close("max_imaginary", worst_im, 0.0, tol, "imaginary part from the conjugate ray");
    if (spec.shift != 0.0) {
        rep.notes.push_back("contour vertex at i|r-r'|/(2t) (Cauchy deformation of the ray through 0); shift = 0 gives the undeformed ray");
    }
    return rep;
}

ExperimentReport flat_oracle(const ExperimentConfig& c) {
    ExperimentReport rep;
    rep.merge(flat_resolvent(c), "resolvent.");
    rep.merge(flat_heat(c), "heat.");
    return rep;
}

ExperimentReport contour_identity(const ExperimentConfig& c) {
    const ContourSpec spec = contour_from(c);
    ExperimentReport rep;
    rep.columns = {"n", "sigma", "lhs", "rhs", "rel_error"};
    double worst = 0.0;
    for (double nd : c.get_list("n_list", {3.0, 5.0})) {
        for (double sigma : c.get_list("sigma_list", {0.5, 1.0, 2.0})) {
            const ContourIdentity id = contour_identity_check(static_cast<int>(nd), sigma, spec);
            worst = std::max(worst, id.relative_error);
            rep.add_row({nd, sigma, id.lhs, id.rhs, id.relative_error});
        }
    }
    rep.check_close("max_rel_error", worst, 0.0, c.get_double("tolerance", 1e-6), "contour integral against the closed form");
    return rep;
}

ExperimentReport harmonic_profile(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    require_two_end(m, "harmonic-profile");
    const int n = m.dimension();
    const HarmonicProfile prof(m);
    const RadialGrid grid = RadialGrid::graded(m, c.get_int("grid_points", 2001));
    const std::vector<double> nodes(grid.nodes.begin() + 1, grid.nodes.end() - 1);
    const HarmonicResidual res = harmonic_residual(prof, nodes);
    ExperimentReport rep;
    rep.columns = {"r", "phi", "dphi", "residual"};
    for (std::size_t i = 0; i < res.r.size(); ++i) rep.add_row({res.r[i], prof.phi(res.r[i]), prof.dphi(res.r[i]), res.residual[i]});
    const double tol_res = c.get_double("tolerance_residual", 1e-8);
    rep.check_close("residual_absolute", res.max_absolute, 0.0, tol_res, "max |L Phi| on the grid");
    rep.check_close("residual_relative", res.max_relative, 0.0, tol_res, "max |L Phi| relative to the operator's terms");

    // limits by elimination of the rho^{2-n} term from two far samples
    const double a = n - 2.0;
    auto limit = [&](double r1, double r2) {
        const double p1 = std::pow(m.end_radius(r1), a), p2 = std::pow(m.end_radius(r2), a);
        return (p2 * prof.phi(r2) - p1 * prof.phi(r1)) / (p2 - p1);
    };
    const double up = limit(0.5 * m.r_max(), m.r_max()), down = limit(-0.5 * m.r_max(), -m.r_max());
    const double tol_lim = c.get_double("tolerance_limit", 1e-6);
    rep.fits["limit_plus"] = {up, 0.0, 0.0};
    rep.fits["limit_minus"] = {down, 0.0, 0.0};
    rep.check_close("limit_plus", up, 1.0, tol_lim, "Phi_+ -> 1 on the + end");
    rep.check_close("limit_minus", down, 0.0, tol_lim, "Phi_+ -> 0 on the - end");
    if (m.profile().end_offset(EndSide::plus) == m.profile().end_offset(EndSide::minus)) {
        rep.check_close("phi_at_0", prof.phi(0.0), 0.5, 1e-12, "symmetric fixture");
    }
    for (EndSide side : {EndSide::plus, EndSide::minus}) {
        const ExpansionCoefficient e = phi_expansion_coefficient(prof, side);
        const std::string s = side == EndSide::plus ? "plus" : "minus";
        rep.fits["A_limit_" + s] = {e.limit, 0.0, 0.0};
        rep.fits["A_closed_form_" + s] = {e.closed_form, 0.0, 0.0};
        rep.check_close("A_" + s, std::abs(e.limit / e.closed_form - 1.0), 0.0, c.get_double("tolerance_coefficient", 1e-8),
                        "A' from the zero-energy solution vs 1/((n-2) I)");
    }
    return rep;
}

ExperimentReport rb0_coefficient(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    require_two_end(m, "rb0-coefficient");
    const int n = m.dimension();
    const HarmonicProfile prof(m);
    ResolventEngine engine(m);
    const auto rp = geometric_keys(c, "rp", 30.0, 3000.0, 12);
    const auto kappas = c.get_list("kappa_list", {0.5, 1.0, 2.0});
    const double gamma = c.get_double("gamma", 0.9);
    const double tol = c.get_double("tolerance", 0.02);
    ExperimentReport rep;
    rep.columns = {"z_r", "kappa", "end", "limit", "first_level", "target", "rel_error"};
    double worst = 0.0;
    bool agree = true;
    for (double rz : c.get_list("z_list", {0.0, 0.6, -1.4})) {
        const PointM z = PointM::on_meridian(n, rz, gamma);
        for (double kappa : kappas) {
            for (EndSide end : {EndSide::plus, EndSide::minus}) {
                const Rb0Result res = rb0_leading_coefficient(engine, z, end, kappa, rp);
                const double target = prof.phi_end(end, rz);
                const double err = std::abs(res.limit / target - 1.0);
                worst = std::max(worst, err);
                agree = agree && !res.levels_disagree;
                rep.add_row({rz, kappa, end == EndSide::plus ? 1.0 : -1.0, res.limit, res.first_level, target, err});
            }
        }
    }
    rep.check_close("max_rel_error", worst, 0.0, tol, "extrapolated coefficient against Phi_+-(z)");
    rep.check_true("levels_agree", agree, "one- and two-level extrapolants within 1%");

    const ModelManifold flat = flat_control(m);
    ResolventEngine fe(flat);
    const PointM fz = PointM::on_meridian(n, c.get_double("flat_z", 1.3), 0.4);
    double fworst = 0.0;
    for (double kappa : kappas) {
        const Rb0Result res = rb0_leading_coefficient(fe, fz, EndSide::plus, kappa, rp);
        fworst = std::max(fworst, std::abs(res.limit - 1.0));
        rep.add_row({fz.r, kappa, 0.0, res.limit, res.first_level, 1.0, std::abs(res.limit - 1.0)});
    }
    rep.check_close("flat_control", fworst, 0.0, c.get_double("flat_tolerance", 0.01), "one-end coefficient is 1");
    rep.notes.push_back("rows with end = 0 are the one-end control");
    return rep;
}

ExperimentReport parametrix_order(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    require_two_end(m, "parametrix-order");
    const int n = m.dimension();
    const HarmonicProfile prof(m);
    ResolventEngine engine(m);
    const auto rp = geometric_keys(c, "rp", 30.0, 3000.0, 12);
    const double kappa = c.get_double("kappa", 1.0);
    const PointM z = PointM::on_meridian(n, c.get_double("z_r", 0.3), c.get_double("gamma", 0.7));
    const ParametrixResult with = parametrix_error_order(engine, prof, kappa, z, EndSide::plus, rp, true);
    const ParametrixResult without = parametrix_error_order(engine, prof, kappa, z, EndSide::plus, rp, false);
    ExperimentReport rep;
    rep.columns = {"r_prime", "error_with", "error_without", "kernel"};
    for (std::size_t i = 0; i < rp.size(); ++i) rep.add_row({rp[i], with.error[i], without.error[i], with.kernel[i]});
    rep.add_fit("with_correction", with.fit);
    rep.add_fit("without_correction", without.fit);
    const double tol = c.get_double("tolerance", 0.15);
    rep.check_close("order_with_correction", with.fit.slope, n - 1.0, tol, "fitted order with the Phi correction");
    rep.check_close("order_without_correction", without.fit.slope, n - 2.0, tol, "fitted order without it");
    if (with.flagged) rep.notes.push_back("with-correction fit flagged: " + with.flag_reason);
    if (without.flagged) rep.notes.push_back("without-correction fit flagged: " + without.flag_reason);
    return rep;
}

ExperimentReport riesz_kernel(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 4000.0);
    require_two_end(m, "riesz-kernel");
    const int n = m.dimension();
    const HarmonicProfile prof(m);
    RieszEngine engine(m);
    const auto rp = geometric_keys(c, "rp", 20.0, 1400.0, 10);
    const double tol = c.get_double("tolerance", 0.1);
    ExperimentReport rep;
    rep.columns = {"two_end", "z_r", "r_prime", "dr", "angular", "magnitude"};
    std::vector<double> ratios;
    for (double rz : c.get_list("z_list", {-1.4, -0.6, 0.3})) {
        const RieszRow row = riesz_kernel_row(engine, prof, pole_point(n, rz), EndSide::plus, rp);
        for (std::size_t i = 0; i < rp.size(); ++i) rep.add_row({1.0, rz, rp[i], row.dr[i], row.angular[i], row.magnitude[i]});
        const std::string tag = "z=" + label(rz);
        rep.add_fit("decay." + tag, row.fit);
        rep.fits["coefficient_over_dphi." + tag] = {row.coefficient / row.dphi, 0.0, 0.0};
        rep.check_close("exponent." + tag, -row.fit.slope, n - 1.0, tol, "|T(z, z')| ~ r'^{-(n-1)} across the neck");
        ratios.push_back(row.coefficient / row.dphi);
    }
    const auto [mn, mx] = std::minmax_element(ratios.begin(), ratios.end());
    rep.check_close("coefficient_variation", (*mx - *mn) / *mx, 0.0, c.get_double("coefficient_tolerance", 0.05),
                    "r'^{n-1}|T| / |Phi'(r_z)| across z");

    const ModelManifold flat = flat_control(m);
    const HarmonicProfile fp(flat);
    RieszEngine fe(flat);
    const double fz = c.get_double("flat_z", 1.3);
    const RieszRow frow = riesz_kernel_row(fe, fp, PointM::on_meridian(n, fz, 0.4), EndSide::plus, rp);
    for (std::size_t i = 0; i < rp.size(); ++i) rep.add_row({0.0, fz, rp[i], frow.dr[i], frow.angular[i], frow.magnitude[i]});
    rep.add_fit("decay.flat", frow.fit);
    rep.check_close("exponent.flat", -frow.fit.slope, double(n), tol, "one-end control decays as r'^{-n}");
    rep.notes.push_back("rows with two_end = 0 are the one-end control (z at angle 0.4)");
    return rep;
}

ExperimentReport riesz_threshold(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 1e7);
    require_two_end(m, "riesz-threshold");
    const int n = m.dimension();
    const auto Ks = c.get_list("K_list", {1e3, 1e4, 1e5, 1e6});
    const PointM z0 = pole_point(n, c.get_double("z0", 0.3));
    const double rho0 = c.get_double("rho0", 2.0);
    RieszEngine engine(m);
    ExperimentReport rep;
    for (double p : c.get_list("p_list", {double(n), 2.0})) {
        rep.merge(tagged(threshold_experiment(engine, p, Ks, z0, rho0), {"p", "two_end"}, {p, 1.0}),
                  "p=" + label(p) + ".");
    }
    const ModelManifold flat = flat_control(m);
    RieszEngine fe(flat);
    rep.merge(tagged(threshold_experiment(fe, double(n), Ks, z0, rho0), {"p", "two_end"}, {double(n), 0.0}), "flat.");
    return rep;
}

ExperimentReport heat_limit(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    require_two_end(m, "heat-limit");
    const int n = m.dimension();
    const HarmonicProfile prof(m);
    const HeatEngine engine(m, contour_from(c));
    const auto ts = c.get_list("t_list", {100.0, 1000.0, 10000.0, 30000.0});
    const PointM z = PointM::on_meridian(n, c.get_double("z_r", 0.3), c.get_double("gamma", 0.4));
    const double sigma = c.get_double("sigma", 0.5);
    ExperimentReport rep;
    for (double l : c.get_list("l_list", {0.0, 1.0})) {
        rep.merge(tagged(heat_limit_experiment(engine, prof, z, sigma, static_cast<int>(l), ts), {"l"}, {l}),
                  "l=" + label(l) + ".");
    }
    return rep;
}

ExperimentReport offdiagonal_decay(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    require_two_end(m, "offdiagonal-decay");
    const HeatEngine engine(m, contour_from(c));
    const auto ts = c.get_list("t_list", {100.0, 300.0, 1000.0, 3000.0, 10000.0, 30000.0});
    const double s = c.get_double("sigma", 0.5), sp = c.get_double("sigma_p", 0.7);
    ExperimentReport rep;
    rep.merge(tagged(offdiagonal_decay_experiment(engine, s, sp, ts, false), {"same_end"}, {0.0}), "cross.");
    rep.merge(tagged(offdiagonal_decay_experiment(engine, s, sp, ts, true), {"same_end"}, {1.0}), "same.");
    return rep;
}

ExperimentReport cohomology(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    require_two_end(m, "cohomology");
    const HarmonicProfile prof(m);
    const auto ks = c.get_list("k_list", {10.0, 100.0, 1000.0});
    ExperimentReport rep;
    const ExperimentReport cut = cutoff_norm_experiment(m, ks);
    for (const auto& row : cut.rows) rep.fits["cutoff_product.k=" + label(row[0])] = {row[2], 0.0, 0.0};
    ExperimentReport summary = cut;
    summary.columns.clear();
    summary.rows.clear();
    rep.merge(summary, "cutoff.");
    for (double p : c.get_list("p_list", {3.0, 4.0, 2.0})) {
        rep.merge(tagged(vanishing_experiment(prof, p, ks), {"p"}, {p}), "p=" + label(p) + ".");
    }
    return rep;
}

ExperimentReport linear_cutoff(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    const HarmonicProfile prof(m);
    const std::string kind = c.get_string("profile", "harmonic");
    if (kind != "harmonic" && kind != "bound") throw ConfigError("linear-cutoff: profile must be harmonic or bound");
    return linear_cutoff_check(prof, c.get_double("p", 3.0), c.get_list("k_list", {10, 20, 40, 80, 160, 320}),
                               kind == "bound" ? DecayProfile::bound : DecayProfile::harmonic);
}

ExperimentReport volume_growth(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    const int n = m.dimension();
    const auto rho = geometric_keys(c, "rho", 1.0, 0.5 * m.r_max(), 20);
    ExperimentReport rep;
    rep.columns = {"center", "rho", "volume"};
    for (double x : c.get_list("center_list", {0.0})) {
        std::vector<double> v;
        for (double r : rho) {
            v.push_back(volume_ball(m, x, r));
            rep.add_row({x, r, v.back()});
        }
        const LogLogFit fit = fit_loglog(rho, v);
        const std::string tag = "center=" + label(x);
        rep.add_fit(tag, fit);
        rep.check_close("slope." + tag, fit.slope, double(n), c.get_double("tolerance", 0.05), "log vol B against log rho");
    }
    return rep;
}

ExperimentReport infrastructure(const ExperimentConfig& c) {
    const ModelManifold m = model_with(c, "two-end", 400.0);
    require_two_end(m, "infrastructure");
    ExperimentReport rep;
    rep.columns = {"j", "k", "wronskian_variation"};
    const RadialGrid grid = RadialGrid::graded(m, 401);
    std::vector<double> nodes(grid.nodes.begin() + 1, grid.nodes.end() - 1);
    double worst = 0.0;
    bool symmetric = true;
    for (double jd : c.get_list("j_list", {0.0, 1.0, 5.0})) {
        for (double k : c.get_list("k_list", {0.0, 0.5, 2.0})) {
            const ModeGreen g(m, static_cast<int>(jd), k);
            const double v = g.wronskian_variation(nodes);
            worst = std::max(worst, v);
            rep.add_row({jd, k, v});
            for (auto [a, b] : {std::pair{0.3, 7.0}, std::pair{-2.5, 0.9}, std::pair{-40.0, 60.0}}) {
                symmetric = symmetric && g.green(a, b).value() == g.green(b, a).value();
            }
        }
    }
    rep.check_close("wronskian_variation", worst, 0.0, c.get_double("wronskian_tolerance", 1e-8),
                    "relative deviation of the weighted Wronskian over the grid");
    rep.check_true("green_symmetry_exact", symmetric, "u_j(r, r') == u_j(r', r) bitwise");

    const HeatEngine heat(m);
    double mass_err = 0.0;
    for (double t : c.get_list("mass_t_list", {0.5, 3.0})) {
        mass_err = std::max(mass_err, std::abs(heat_mass(heat, t, c.get_double("mass_r", 0.4)) - 1.0));
    }
    rep.fits["heat_mass_error"] = {mass_err, 0.0, 0.0};
    rep.check_close("heat_mass", mass_err, 0.0, c.get_double("mass_tolerance", 1e-3), "int H(t, z, w) dw = 1");

    // determinism: the same configs under different worker counts give identical bytes
    std::vector<ExperimentConfig> probes(2);
    probes[0].set("experiment", "contour-identity");
    probes[1].set("experiment", "flat-resolvent");
    probes[1].set("k_list", "0,1");
    probes[1].set("d_count", "3");
    const char* saved = std::getenv("ENDSLAB_THREADS");
    const std::string saved_value = saved ? saved : "";
    bool identical = true;
    for (const auto& probe : probes) {
        std::vector<std::string> out;
        for (const char* threads : {"1", "3", "1"}) {
            setenv("ENDSLAB_THREADS", threads, 1);
            out.push_back(run_lab_experiment(probe.experiment(), probe).to_csv(probe.hash()));
        }
        identical = identical && out[0] == out[1] && out[1] == out[2];
    }
    if (saved) {
        setenv("ENDSLAB_THREADS", saved_value.c_str(), 1);
    } else {
        unsetenv("ENDSLAB_THREADS");
    }
    rep.check_true("determinism", identical, "repeated runs (1, 3, 1 workers) produce identical CSV bytes");
    return rep;
}

struct Entry {
    ExperimentInfo info;
    std::function<ExperimentReport(const ExperimentConfig&)> fn;
};

const std::vector<Entry>& entries() {
    static const std::vector<std::string> contour{"contour_angle", "contour_nodes", "shift"};
    auto with = [](std::vector<std::string> a, const std::vector<std::string>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    static const std::vector<std::string> flat_res{"k_list", "d_min", "d_max", "d_count", "r0", "gamma", "tolerance"};
    static const std::vector<std::string> flat_h = with({"t_list", "d_list", "r0", "gamma", "tolerance"}, contour);
    static const std::vector<Entry> table{
        {{"flat-resolvent", 1, "synthesized resolvent vs the Euclidean closed form", flat_res}, flat_resolvent},
        {{"flat-heat", 2, "contour heat kernel vs the Gaussian", flat_h}, flat_heat},
        {{"contour-identity", 3, "contour integral identity",
          with({"n_list", "sigma_list", "tolerance"}, contour)}, contour_identity},
        {{"harmonic-profile", 4, "harmonicity, limits and expansion coefficient of Phi_+",
          {"grid_points", "tolerance_residual", "tolerance_limit", "tolerance_coefficient"}}, harmonic_profile},
        {{"rb0-coefficient", 5, "leading resolvent coefficient in the rb0 regime",
          {"rp_min", "rp_max", "rp_count", "kappa_list", "z_list", "gamma", "tolerance", "flat_z", "flat_tolerance"}},
         rb0_coefficient},
        {{"parametrix-order", 6, "order of vanishing of the parametrix error",
          {"rp_min", "rp_max", "rp_count", "kappa", "z_r", "gamma", "tolerance"}}, parametrix_order},
        {{"riesz-kernel", 7, "Riesz kernel decay through the neck and on one end",
          {"rp_min", "rp_max", "rp_count", "z_list", "tolerance", "coefficient_tolerance", "flat_z"}}, riesz_kernel},
        {{"riesz-threshold", 8, "threshold family F_K at p = n and p = 2", {"K_list", "z0", "rho0", "p_list"}},
         riesz_threshold},
        {{"heat-limit", 9, "large-time heat kernel limits", with({"t_list", "z_r", "gamma", "sigma", "l_list"}, contour)},
         heat_limit},
        {{"offdiagonal-decay", 10, "off-diagonal heat decay across and along the ends",
          with({"t_list", "sigma", "sigma_p"}, contour)}, offdiagonal_decay},
        {{"cohomology", 11, "log cutoffs and the vanishing of dh in reduced L^p cohomology", {"k_list", "p_list"}},
         cohomology},
        {{"volume-growth", 12, "polynomial volume growth of balls",
          {"rho_min", "rho_max", "rho_count", "center_list", "tolerance"}}, volume_growth},
        {{"infrastructure", 13, "Wronskian, Green symmetry, heat mass, determinism",
          {"j_list", "k_list", "wronskian_tolerance", "mass_t_list", "mass_r", "mass_tolerance"}}, infrastructure},
        {{"flat-oracle", 0, "flat-resolvent and flat-heat together",
          with(flat_res, {"t_list", "d_list", "contour_angle", "contour_nodes", "shift"})}, flat_oracle},
        {{"linear-cutoff", 0, "k-exponent of the linear cutoff surrogate", {"p", "k_list", "profile"}}, linear_cutoff},
    };
    return table;
}

}  // namespace

std::pair<PointM, PointM> flat_pair(int n, double r0, double gamma, double d) {
    const PointM z = PointM::on_meridian(n, r0, 0.0);
    if (d == 0.0) return {z, z};
    const double h = r0 * std::sin(gamma);
    if (!(d > std::abs(h))) throw ConfigError("flat_pair: distance below r0 sin(gamma)");
    return {z, PointM::on_meridian(n, r0 * std::cos(gamma) + std::sqrt(d * d - h * h), gamma)};
}

std::vector<ExperimentInfo> lab_experiments() {
    std::vector<ExperimentInfo> out;
    for (const auto& e : entries()) out.push_back(e.info);
    return out;
}

ExperimentReport run_lab_experiment(const std::string& name, const ExperimentConfig& config) {
    for (const auto& e : entries()) {
        if (e.info.name == name) {
            ExperimentReport rep = e.fn(config);
            rep.experiment = name;
            return rep;
        }
    }
    throw ConfigError("unknown experiment '" + name + "'");
}

}  // namespace endslab
