#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "biphoton/crystal.hpp"
#include "biphoton/distributions.hpp"
#include "biphoton/math.hpp"
#include "biphoton/quadrature.hpp"
#include "oracles.hpp"

using namespace biphoton;

namespace {

ScenarioConfig scenario(double np = -0.1436, double alpha = 0.004114, double L = 1.5) {
    const auto li = solve_phase_matching(find_model("LiIO3"), 325.0);
    return make_scenario(L, 325.0, li.n_o_signal, np, alpha);
}

SampledCurve gaussian_curve(double alpha, double span, int n) {
    SampledCurve c;
    c.axis = linspace(-span, span, n);
    for (double t : c.axis) c.density.push_back(std::exp(-4.0 * ln2 * t * t / (alpha * alpha)));
    c.label = "gaussian";
    c.units = "rad";
    return c;
}

}  // namespace

TEST_CASE("fwhm of an exact Gaussian intensity profile equals alpha") {
    const double alpha = 0.004114;
    const auto w = fwhm(gaussian_curve(alpha, 4 * alpha, 4001));
    CHECK(std::abs(w.fwhm - alpha) / alpha < 1e-4);
    CHECK(w.n_peaks_detected == 1);
    CHECK(w.peak_value == doctest::Approx(1.0));
}

TEST_CASE("fwhm invariant: density at the stored crossings is half the peak") {
    const auto cfg = scenario();
    const auto curve = single_particle_analytic(cfg, {-0.079, 0.13, 20001});
    const auto w = fwhm(curve);
    auto interp = [&](double x) {
        const auto it = std::lower_bound(curve.axis.begin(), curve.axis.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - curve.axis.begin());
        const double x0 = curve.axis[i - 1], x1 = curve.axis[i];
        const double y0 = curve.density[i - 1], y1 = curve.density[i];
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    };
    CHECK(std::abs(interp(w.left_crossing) - 0.5 * w.peak_value) / (0.5 * w.peak_value) < 1e-4);
    CHECK(std::abs(interp(w.right_crossing) - 0.5 * w.peak_value) / (0.5 * w.peak_value) < 1e-4);
}

TEST_CASE("fwhm peak policies on the two-peak sinc^2 structure") {
    auto cfg = scenario();
    cfg.pump.alpha_fwhm_rad = INFINITY;   // bare sinc^2 family
    const auto curve = coincidence_curve(cfg, 0.0, {-0.05, 0.62, 120001});
    const auto near0 = fwhm(curve, PeakPolicy::nearest_zero);
    CHECK(near0.n_peaks_detected == 2);
    CHECK(std::abs(near0.peak_location) < 1e-3);
    CHECK(near0.fwhm * 1e3 == doctest::Approx(0.5).epsilon(0.05));
    const auto big = fwhm(curve, PeakPolicy::global_max);
    CHECK(big.n_peaks_detected == 2);
    // both roots reach sinc^2 = 1; global_max picks whichever sampled higher,
    // at the second root it must sit near 0.574
    if (std::abs(big.peak_location) > 0.01) {
        CHECK(big.peak_location == doctest::Approx(0.5744).epsilon(0.02));
    }
}

TEST_CASE("fwhm error paths: no peak, truncated crossings") {
    SampledCurve ramp;
    ramp.axis = {0.0, 1.0, 2.0, 3.0};
    ramp.density = {0.1, 0.4, 0.7, 1.0};   // max at the edge: no interior peak
    ramp.units = "rad";
    CHECK_THROWS_WITH_AS(fwhm(ramp), doctest::Contains("no interior peak"),
                         std::runtime_error);
    const auto half_gauss = gaussian_curve(1.0, 0.4, 101);  // crossings outside
    CHECK_THROWS_WITH_AS(fwhm(half_gauss), doctest::Contains("widen"),
                         std::runtime_error);
    SampledCurve two;
    two.axis = {0.0, 1.0};
    two.density = {1.0, 1.0};
    CHECK_THROWS_AS(fwhm(two), std::runtime_error);
}

TEST_CASE("peak-one normalization makes the maximum exactly 1") {
    const auto c = coincidence_curve(scenario(), 0.0, {-0.001, 0.001, 501});
    CHECK(*std::max_element(c.density.begin(), c.density.end()) == 1.0);
}

TEST_CASE("coincidence widths in both geometries") {
    const auto cfg = scenario();
    const auto w_par = fwhm(coincidence_curve(cfg, 0.0, {-0.0015, 0.0015, 8001}));
    CHECK(w_par.fwhm * 1e3 == doctest::Approx(0.5).epsilon(0.05));

    auto perp = cfg;
    perp.np_eff = 0.0;
    const auto w_perp = fwhm(coincidence_curve(perp, 0.0, {-0.02, 0.02, 8001}));
    CHECK(w_perp.fwhm * 1e3 == doctest::Approx(8.0).epsilon(0.10));
    CHECK(w_perp.fwhm / (2 * cfg.pump.alpha_fwhm_rad) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("parallel coincidence width ignores the pump divergence") {
    const auto w1 = fwhm(coincidence_curve(scenario(), 0.0, {-0.0015, 0.0015, 8001}));
    const auto w2 = fwhm(
        coincidence_curve(scenario(-0.1436, 2 * 0.004114), 0.0, {-0.0015, 0.0015, 8001}));
    CHECK(std::abs(w2.fwhm - w1.fwhm) / w1.fwhm < 0.01);
}

TEST_CASE("flat-pump limit: coincidence equals the bare sinc^2 peak") {
    auto cfg = scenario();
    cfg.pump.alpha_fwhm_rad = INFINITY;
    const auto w_flat = fwhm(coincidence_curve(cfg, 0.0, {-0.0015, 0.0015, 8001}));
    cfg.pump.alpha_fwhm_rad = 2 * 0.004114;
    const auto w_2a = fwhm(coincidence_curve(cfg, 0.0, {-0.0015, 0.0015, 8001}));
    CHECK(std::abs(w_2a.fwhm - w_flat.fwhm) / w_flat.fwhm < 0.01);
}

TEST_CASE("pm_roots: defining property, small-angle expansion, errors") {
    const auto cfg = scenario();
    CHECK(pm_roots(cfg, 0.0).small_root == 0.0);
    CHECK(pm_roots(cfg, 0.0).large_root == doctest::Approx(0.5744));
    for (double t1 : {-0.01, -0.005, 0.002, 0.005, 0.01}) {
        const auto r = pm_roots(cfg, t1);
        for (double root : {r.small_root, r.large_root}) {
            // the root zeroes the partner-sum detuning: (kp0/8)(4 np th + (th-2t1)^2)
            const double d = root - 2 * t1;
            const double det = cfg.kp0_inv_cm / 8.0 * (4 * cfg.np_eff * root + d * d);
            CHECK(std::abs(det) * cfg.length_cm < 1e-8);
        }
        const double series = t1 * t1 / std::abs(cfg.np_eff);
        CHECK(std::abs(r.small_root - series) <=
              1.5 * std::abs(t1 * t1 * t1) / (cfg.np_eff * cfg.np_eff));
    }
    auto perp = cfg;
    perp.np_eff = 0.0;
    CHECK_THROWS_WITH_AS(pm_roots(perp, 0.0), doctest::Contains("quadrature"),
                         std::domain_error);
    CHECK_THROWS_WITH_AS(pm_roots(cfg, -0.08),
                         doctest::Contains("no real phase-matching"), std::domain_error);
}

TEST_CASE("analytic singles: width, asymmetry, interior point values") {
    const auto cfg = scenario();
    const auto curve = single_particle_analytic(cfg, {-0.079, 0.13, 40001});
    const auto w = fwhm(curve);
    CHECK(w.fwhm * 1e3 == doctest::Approx(47.3).epsilon(0.05));
    // density vanishes identically on the no-real-root side
    for (std::size_t i = 0; i < curve.axis.size(); ++i) {
        if (curve.axis[i] < -std::abs(cfg.np_eff) / 2 - 1e-6) {
            CHECK(curve.density[i] == 0.0);
        }
    }
    // theta1 = 0 sits at 1/|np| before normalization: within ~6% of the peak,
    // which itself lies at slightly negative theta1
    const auto it = std::lower_bound(curve.axis.begin(), curve.axis.end(), 0.0);
    const double at0 = curve.density[static_cast<std::size_t>(it - curve.axis.begin())];
    CHECK(at0 > 0.93);
    CHECK(w.peak_location < 0.0);
    CHECK(w.peak_location == doctest::Approx(-0.0095).epsilon(0.15));
    CHECK_THROWS_AS(
        single_particle_analytic(scenario(0.0), AxisSpec{-0.01, 0.01, 101}),
        std::domain_error);
    CHECK_THROWS_WITH_AS(
        single_particle_analytic(scenario(-0.1436, 0.004114, 0.001),
                                 AxisSpec{-0.079, 0.13, 101}),
        doctest::Contains("delta-approximation"), std::domain_error);
}

TEST_CASE("perpendicular singles by quadrature") {
    auto cfg = scenario();
    cfg.np_eff = 0.0;
    const auto w = fwhm(single_particle_quadrature(cfg, {-0.035, 0.035, 701}));
    CHECK(w.fwhm * 1e3 == doctest::Approx(12.0).epsilon(0.10));
}

TEST_CASE("quadrature and delta-approximation singles agree in the parallel case") {
    const auto cfg = scenario();
    const AxisSpec axis{-0.07, 0.06, 521};
    const auto q = single_particle_quadrature(cfg, axis);
    const auto a = single_particle_analytic(cfg, axis);
    CHECK(std::abs(fwhm(q).fwhm - fwhm(a).fwhm) / fwhm(a).fwhm < 0.03);
    // pointwise: tight near the peak; the delta form drops the sinc^2 tail
    // background, which grows relatively as the density falls
    for (std::size_t i = 0; i < q.axis.size(); ++i) {
        if (a.density[i] > 0.5) {
            CHECK(std::abs(q.density[i] - a.density[i]) / a.density[i] < 0.025);
        } else if (a.density[i] > 0.05) {
            CHECK(std::abs(q.density[i] - a.density[i]) / a.density[i] < 0.20);
        }
    }
}

TEST_CASE("plane-wave pump limit: perfect anticorrelation, not a product state") {
    // alpha -> 0 pins theta2 = -theta1: singles collapse onto the bare
    // phase-matching marginal sinc^2(4 C theta1^2) in either geometry, while
    // the coincidence narrows with the pump itself
    const auto cfg_par = scenario(-0.1436, 1e-6);
    const auto cfg_perp = scenario(0.0, 1e-6);
    const auto ws_par = fwhm(single_particle_quadrature(cfg_par, {-0.02, 0.02, 801}));
    const auto ws_perp = fwhm(single_particle_quadrature(cfg_perp, {-0.02, 0.02, 801}));
    auto flat = cfg_perp;
    flat.pump.alpha_fwhm_rad = INFINITY;
    const double w_sinc = fwhm(coincidence_curve(flat, 0.0, {-0.03, 0.03, 8001})).fwhm;
    CHECK(ws_par.fwhm == doctest::Approx(w_sinc / 2).epsilon(0.01));
    CHECK(ws_perp.fwhm == doctest::Approx(w_sinc / 2).epsilon(0.01));
    const auto wc = fwhm(coincidence_curve(cfg_par, 0.0, {-6e-6, 6e-6, 2001}));
    CHECK(wc.fwhm == doctest::Approx(2e-6).epsilon(0.05));
    CHECK(ws_par.fwhm / wc.fwhm > 1e3);
}

TEST_CASE("validity condition values and the degenerate case") {
    const auto v = validity_check(scenario());
    CHECK(v.lhs == doctest::Approx(1.1e4).epsilon(0.03));
    CHECK(v.rhs == doctest::Approx(486.1).epsilon(0.005));
    CHECK(v.ok);
    const auto v0 = validity_check(scenario(0.0));
    CHECK(v0.lhs == 0.0);
    CHECK_FALSE(v0.ok);
}

TEST_CASE("coordinate cut widths and L-independence") {
    const auto cfg = scenario();
    const auto wc = fwhm(coordinate_cut(cfg, CoordinateCut::coincidence, {-140, 140, 2001}));
    const auto wm = fwhm(coordinate_cut(cfg, CoordinateCut::difference_diagonal, {-70, 70, 2001}));
    const auto wp = fwhm(coordinate_cut(cfg, CoordinateCut::sum_diagonal, {-820, 820, 2001}));
    CHECK(wc.fwhm == doctest::Approx(88.0).epsilon(0.05));
    CHECK(wm.fwhm == doctest::Approx(44.0).epsilon(0.05));
    CHECK(0.5 * wp.fwhm == doctest::Approx(356.4).epsilon(0.05));

    const auto cfg2 = scenario(-0.1436, 0.004114, 3.0);
    const auto wc2 = fwhm(coordinate_cut(cfg2, CoordinateCut::coincidence, {-140, 140, 2001}));
    CHECK(std::abs(wc2.fwhm - wc.fwhm) / wc.fwhm < 0.005);
}

TEST_CASE("coordinate grid agrees with its cut curves") {
    const auto cfg = scenario();
    const auto xi = linspace(-60.0, 60.0, 41);
    const auto grid = coordinate_wavefunction(cfg, xi, xi);
    CHECK(grid.domain == GridDomain::coordinate);
    const auto cut = coordinate_cut(cfg, CoordinateCut::coincidence, {-60.0, 60.0, 41});
    // same evaluation path up to normalization: compare shapes
    const auto mid = static_cast<Eigen::Index>(20);
    const double scale = std::norm(grid.values(mid, mid));
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double g = std::norm(grid.values(static_cast<Eigen::Index>(i), mid)) / scale;
        CHECK(g == doctest::Approx(cut.density[i]).epsilon(1e-9));
    }
}

TEST_CASE("coordinate transform guards") {
    CHECK_THROWS_AS(coordinate_cut(scenario(0.0), CoordinateCut::coincidence,
                                   {-50, 50, 101}),
                    std::domain_error);
    CHECK_THROWS_AS(coordinate_cut(scenario(), CoordinateCut::coincidence,
                                   {-2e9, 2e9, 101}),
                    resolution_error);
}

TEST_CASE("csv round-trips bit-exactly") {
    const auto cfg = scenario();
    const auto c = coincidence_curve(cfg, 0.0, {-0.001, 0.001, 257});
    std::ostringstream os;
    write_csv(c, os);
    std::istringstream is(os.str());
    const auto back = read_csv(is);
    CHECK(back.label == c.label);
    CHECK(back.units == c.units);
    CHECK(back.normalization == c.normalization);
    REQUIRE(back.axis.size() == c.axis.size());
    for (std::size_t i = 0; i < c.axis.size(); ++i) {
        CHECK(back.axis[i] == c.axis[i]);
        CHECK(back.density[i] == c.density[i]);
    }
    std::ostringstream os2;
    write_csv(back, os2);
    CHECK(os.str() == os2.str());
}

TEST_CASE("csv reader rejects malformed input") {
    std::istringstream no_header("1,2\n");
    CHECK_THROWS_WITH_AS(read_csv(no_header), doctest::Contains("header"),
                         std::runtime_error);
    std::istringstream bad_norm("# x, sideways, rad\n1,2\n");
    CHECK_THROWS_AS(read_csv(bad_norm), std::runtime_error);
    std::istringstream bad_row("# x, peak_one, rad\n1;2\n");
    CHECK_THROWS_WITH_AS(read_csv(bad_row), doctest::Contains("line 2"),
                         std::runtime_error);
}

TEST_CASE("adaptive quadrature reports non-convergence with achieved tolerance") {
    // a spike far narrower than anything the depth cap can resolve
    auto nasty = [](double x) {
        return 1.0 / (1e-28 + (x - 0.3141592653) * (x - 0.3141592653));
    };
    try {
        integrate_adaptive(nasty, 0.0, 1.0, {}, 1e-9, 8);
        FAIL("expected quadrature_error");
    } catch (const quadrature_error& e) {
        CHECK(e.achieved_tol > 1e-9);
    }
}
