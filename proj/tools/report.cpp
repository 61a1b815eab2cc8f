#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "biphoton/math.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::vector<DispersionModel>& models_for(const RunConfig& cfg) {
    if (!cfg.dispersion_file) return bundled_models();
    static std::vector<DispersionModel> loaded;
    static std::string loaded_from;
    if (loaded_from != *cfg.dispersion_file) {
        std::ifstream in(*cfg.dispersion_file, std::ios::binary);
        if (!in) throw config_error("cannot open dispersion file " + *cfg.dispersion_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        loaded = parse_dispersion_data(ss.str());
        loaded_from = *cfg.dispersion_file;
    }
    return loaded;
}

}  // namespace

ScenarioBundle build_scenario(const RunConfig& cfg, bool reproduce_mode) {
    ScenarioBundle b;
    b.optics = solve_phase_matching(find_model(models_for(cfg), cfg.crystal), cfg.lambda_nm);
    double np = 0.0;
    switch (cfg.geometry) {
        case GeometryPreset::perp:
            np = 0.0;
            b.np_source = "preset perp";
            break;
        case GeometryPreset::parallel:
            if (reproduce_mode && !cfg.from_dispersion) {
                np = reference_np_eff;
                b.np_source = "pinned reference";
            } else {
                np = b.optics.np_prime;
                b.np_source = "dispersion solve";
            }
            break;
        case GeometryPreset::custom:
            np = *cfg.np_eff;
            b.np_source = "custom";
            break;
    }
    b.scenario = make_scenario(cfg.L_cm, cfg.lambda_nm, b.optics.n_o_signal, np,
                               cfg.alpha_mrad * 1e-3);
    return b;
}

double expected_sinc_fwhm(const ScenarioConfig& cfg) {
    // half-max of sinc^2 at argument u* = 1.39156; solve C(4|np|t + t^2) = u*
    const double u_star = 1.3915573;
    const double c = cfg.length_cm * cfg.kp0_inv_cm / (16.0 * cfg.n_o);
    const double a = std::abs(cfg.np_eff);
    const double t_half = -2.0 * a + std::sqrt(4.0 * a * a + u_star / c);
    return 2.0 * t_half;
}

WidthReport coincidence_width(const ScenarioConfig& cfg, double theta2, int points) {
    const double alpha = cfg.pump.alpha_fwhm_rad;
    const double w_est =
        std::min(expected_sinc_fwhm(cfg), std::isinf(alpha) ? 1e9 : 2.0 * alpha);
    const AxisSpec axis{theta2 - 1.6 * w_est, theta2 + 1.6 * w_est, points};
    return fwhm(coincidence_curve(cfg, theta2, axis));
}

namespace {

AxisSpec singles_axis(const ScenarioConfig& cfg, int points) {
    const double alpha = cfg.pump.alpha_fwhm_rad;
    if (cfg.np_eff != 0.0) {
        const double a = std::abs(cfg.np_eff);
        const double scale = std::sqrt(alpha * a);
        return AxisSpec{-std::max(0.55 * a, 3.0 * scale) - 2.0 * alpha,
                        5.5 * scale + 4.0 * alpha, points};
    }
    const double w = 0.5 * expected_sinc_fwhm(cfg) + alpha;
    return AxisSpec{-4.0 * w, 4.0 * w, points};
}

}  // namespace

WidthReport single_width(const ScenarioConfig& cfg, int points) {
    const AxisSpec axis = singles_axis(cfg, points);
    if (cfg.np_eff != 0.0 && validity_check(cfg).ok) {
        return fwhm(single_particle_analytic(cfg, axis));
    }
    return fwhm(single_particle_quadrature(cfg, axis));
}

const std::vector<AcceptanceEntry>& acceptance_table() {
    static const std::vector<AcceptanceEntry> table = {
        {"sinc_fwhm_perp_mrad", 24.0, 0.05, TolKind::relative, "±5%"},
        {"sinc_fwhm_parallel_mrad", 0.5, 0.05, TolKind::relative, "±5%"},
        {"sinc_width_ratio", 48.0, 0.05, TolKind::relative, "±5%"},
        {"second_root_rad", 0.574, 0.02, TolKind::relative, "±2%"},
        {"coincidence_fwhm_perp_mrad", 8.0, 0.10, TolKind::relative, "±10%"},
        {"coincidence_perp_over_twice_pump", 1.0, 0.05, TolKind::relative, "±5%"},
        {"single_fwhm_perp_mrad", 12.0, 0.10, TolKind::relative, "±10%"},
        {"r_k_perp", 1.5, 0.10, TolKind::relative, "±10%"},
        {"coincidence_fwhm_parallel_mrad", 0.5, 0.05, TolKind::relative, "±5%"},
        {"single_fwhm_parallel_mrad", 47.3, 0.05, TolKind::relative, "±5%"},
        {"r_k_parallel", 94.6, 0.05, TolKind::relative, "±5%"},
        {"validity_lhs", 1.1e4, 0.03, TolKind::relative, "±3%"},
        {"validity_rhs", 486.0, 0.005, TolKind::relative, "±0.5%"},
        {"xi_coincidence_fwhm", 88.0, 0.05, TolKind::relative, "±5%"},
        {"xi_plus_halfwidth", 356.4, 0.05, TolKind::relative, "±5%"},
        {"xi_minus_fwhm", 44.0, 0.05, TolKind::relative, "±5%"},
        {"coordinate_width_drift_under_2L", 0.0, 0.005, TolKind::absolute, "< 0.5%"},
        {"epr_width_product", 0.044, 0.07, TolKind::relative, "±7%"},
        {"c_epr_halfmax", 22.7, 0.07, TolKind::relative, "±7%"},
        {"c_epr_ratio", 63.0, 0.07, TolKind::relative, "±7%"},
        {"np_prime_LiIO3", -0.1409, 0.005, TolKind::absolute, "±0.005"},
        {"np_prime_BBO", -0.1175, 0.005, TolKind::absolute, "±0.005"},
        {"np_prime_KDP", -0.0395, 0.005, TolKind::absolute, "±0.005"},
        {"np_prime_LBO", -0.0270, 0.005, TolKind::absolute, "±0.005"},
        {"phi0_BBO_deg", 36.44, 0.5, TolKind::absolute, "±0.5°"},
    };
    return table;
}

namespace {

const AcceptanceEntry& entry(const std::string& name) {
    for (const auto& e : acceptance_table()) {
        if (e.name == name) return e;
    }
    throw std::logic_error("no acceptance entry named " + name);
}

ReproRow checked_row(const std::string& name, double computed, std::string note = {}) {
    const AcceptanceEntry& e = entry(name);
    ReproRow r;
    r.name = name;
    r.computed = computed;
    r.target = e.target;
    r.tol = e.tol;
    r.kind = e.kind;
    r.tol_str = e.tol_str;
    if (e.kind == TolKind::relative) {
        r.deviation = std::abs(computed - e.target) / std::abs(e.target);
        r.pass = r.deviation <= e.tol;
    } else {
        r.deviation = std::abs(computed - e.target);
        r.pass = r.deviation <= e.tol;
    }
    r.note = std::move(note);
    return r;
}

ReproRow context_row(const std::string& name, double value, std::string note) {
    ReproRow r;
    r.name = name;
    r.computed = value;
    r.context_only = true;
    r.note = std::move(note);
    return r;
}

struct CoordinateWidths {
    double coincidence_fwhm;
    double sum_halfwidth;
    double sum_fwhm;
    double diff_fwhm;
};

CoordinateWidths coordinate_widths(const ScenarioConfig& cfg, int points) {
    const double alpha = cfg.pump.alpha_fwhm_rad;
    const double b = ln2 / (2.0 * alpha * alpha * cfg.np_eff * cfg.np_eff);
    const double theta_e = std::pow(b, -0.25);
    const double w_minus_est = 2.7954 / theta_e;                       // FT of the quartic envelope
    const double w_sum_est = 2.497 * std::abs(cfg.np_eff) / (theta_e * theta_e);

    CoordinateWidths w{};
    w.coincidence_fwhm =
        fwhm(coordinate_cut(cfg, CoordinateCut::coincidence,
                            {-1.5 * w_minus_est, 1.5 * w_minus_est, points}))
            .fwhm;
    w.diff_fwhm =
        fwhm(coordinate_cut(cfg, CoordinateCut::difference_diagonal,
                            {-0.8 * w_minus_est, 0.8 * w_minus_est, points}))
            .fwhm;
    w.sum_fwhm = fwhm(coordinate_cut(cfg, CoordinateCut::sum_diagonal,
                                     {-2.3 * w_sum_est, 2.3 * w_sum_est, points}))
                     .fwhm;
    w.sum_halfwidth = 0.5 * w.sum_fwhm;
    return w;
}

}  // namespace

ReproReport run_reproduce(const RunConfig& cfg, bool write_files) {
    ReproReport rep;

    RunConfig par_cfg = cfg;
    par_cfg.geometry = GeometryPreset::parallel;
    par_cfg.np_eff.reset();
    ScenarioBundle par = build_scenario(par_cfg, /*reproduce_mode=*/true);
    rep.mode_label = cfg.from_dispersion ? "prediction" : "reproduction";

    ScenarioConfig s_par = par.scenario;
    ScenarioConfig s_perp = s_par;
    s_perp.np_eff = 0.0;
    ScenarioConfig s_par_flat = s_par;
    s_par_flat.pump.alpha_fwhm_rad = std::numeric_limits<double>::infinity();
    ScenarioConfig s_perp_flat = s_perp;
    s_perp_flat.pump.alpha_fwhm_rad = std::numeric_limits<double>::infinity();

    const int pts = cfg.curve_points;
    const double alpha = s_par.pump.alpha_fwhm_rad;

    // bare sinc^2 peak structure at theta2 = 0
    const WidthReport sinc_perp = coincidence_width(s_perp_flat, 0.0, pts);
    const WidthReport sinc_par = coincidence_width(s_par_flat, 0.0, pts);
    rep.rows.push_back(checked_row("sinc_fwhm_perp_mrad", sinc_perp.fwhm * 1e3));
    rep.rows.push_back(checked_row("sinc_fwhm_parallel_mrad", sinc_par.fwhm * 1e3));
    rep.rows.push_back(checked_row("sinc_width_ratio", sinc_perp.fwhm / sinc_par.fwhm));
    rep.rows.push_back(
        checked_row("second_root_rad", pm_roots(s_par, 0.0).large_root));

    // perpendicular geometry
    const WidthReport coinc_perp = coincidence_width(s_perp, cfg.theta2_mrad * 1e-3, pts);
    const WidthReport single_perp =
        fwhm(single_particle_quadrature(s_perp, singles_axis(s_perp, 801)));
    rep.rows.push_back(checked_row("coincidence_fwhm_perp_mrad", coinc_perp.fwhm * 1e3));
    rep.rows.push_back(
        checked_row("coincidence_perp_over_twice_pump", coinc_perp.fwhm / (2.0 * alpha)));
    rep.rows.push_back(checked_row("single_fwhm_perp_mrad", single_perp.fwhm * 1e3));
    rep.rows.push_back(checked_row("r_k_perp", ratio_r(single_perp, coinc_perp)));

    // parallel geometry
    const WidthReport coinc_par = coincidence_width(s_par, cfg.theta2_mrad * 1e-3, pts);
    const WidthReport single_par =
        fwhm(single_particle_analytic(s_par, singles_axis(s_par, 200001)));
    rep.rows.push_back(checked_row("coincidence_fwhm_parallel_mrad", coinc_par.fwhm * 1e3));
    rep.rows.push_back(checked_row("single_fwhm_parallel_mrad", single_par.fwhm * 1e3));
    rep.rows.push_back(checked_row("r_k_parallel", ratio_r(single_par, coinc_par)));

    // delta-approximation validity margins
    const ValidityReport val = validity_check(s_par);
    rep.rows.push_back(checked_row("validity_lhs", val.lhs));
    rep.rows.push_back(checked_row("validity_rhs", val.rhs));

    // coordinate-space cut widths and their L-independence
    const CoordinateWidths cw = coordinate_widths(s_par, cfg.coord_points);
    rep.rows.push_back(checked_row("xi_coincidence_fwhm", cw.coincidence_fwhm));
    rep.rows.push_back(checked_row("xi_plus_halfwidth", cw.sum_halfwidth,
                                   "half-maximum half-width of the sum-diagonal cut"));
    rep.rows.push_back(checked_row("xi_minus_fwhm", cw.diff_fwhm));
    {
        ScenarioConfig s_2l = s_par;
        s_2l.length_cm *= 2.0;
        const CoordinateWidths cw2 = coordinate_widths(s_2l, cfg.coord_points);
        const double drift = std::max(
            {std::abs(cw2.coincidence_fwhm - cw.coincidence_fwhm) / cw.coincidence_fwhm,
             std::abs(cw2.sum_fwhm - cw.sum_fwhm) / cw.sum_fwhm,
             std::abs(cw2.diff_fwhm - cw.diff_fwhm) / cw.diff_fwhm});
        rep.rows.push_back(checked_row("coordinate_width_drift_under_2L", drift));
    }

    // EPR chain: conditional momentum width x conditional coordinate width
    const double dk_inv_cm = coinc_par.fwhm * s_par.kp0_inv_cm / 2.0;
    const double dx_cm = cw.coincidence_fwhm * 2.0 / s_par.kp0_inv_cm;
    const EprResult epr = c_epr(dk_inv_cm, dx_cm, WidthConvention::half_max);
    rep.rows.push_back(checked_row("epr_width_product", dk_inv_cm * dx_cm));
    rep.rows.push_back(checked_row("c_epr_halfmax", epr.c_epr));
    rep.rows.push_back(checked_row("c_epr_ratio", epr.ratio_to_baseline));

    // angular anisotropy constants for the bundled crystal table
    {
        const struct {
            const char* crystal;
            const char* row;
            double lambda_nm;
        } table_rows[] = {{"LiIO3", "np_prime_LiIO3", 325.0},
                          {"BBO", "np_prime_BBO", 325.0},
                          {"KDP", "np_prime_KDP", 325.0},
                          {"LBO", "np_prime_LBO", 488.0}};
        for (const auto& tr : table_rows) {
            const auto optics =
                solve_phase_matching(find_model(models_for(cfg), tr.crystal), tr.lambda_nm);
            std::ostringstream note;
            note << "pump " << tr.lambda_nm << " nm, phi0 "
                 << optics.phi0_rad * 180.0 / pi << " deg";
            rep.rows.push_back(checked_row(tr.row, optics.np_prime, note.str()));
            if (std::string(tr.crystal) == "BBO") {
                rep.rows.push_back(
                    checked_row("phi0_BBO_deg", optics.phi0_rad * 180.0 / pi));
            }
        }
    }

    // entanglement report for the parallel scenario
    {
        const double span = cfg.schmidt_span_mrad * 1e-3;
        const GridSpec spec{-span, span, cfg.schmidt_points, -span, span,
                            cfg.schmidt_points};
        const auto grid = amplitude_grid(s_par, spec, cfg.workers);
        const auto fine = schmidt_from_grid(grid);
        const GridSpec coarse_spec{-span, span, cfg.schmidt_points / 2, -span, span,
                                   cfg.schmidt_points / 2};
        const auto coarse = schmidt_from_grid(amplitude_grid(s_par, coarse_spec, cfg.workers));
        rep.entanglement.schmidt_k = fine.k;
        rep.entanglement.schmidt_spectrum = fine.spectrum;
        rep.entanglement.schmidt_convergence_delta = std::abs(fine.k - coarse.k) / fine.k;
        rep.entanglement.r_k = ratio_r(single_par, coinc_par);
        rep.entanglement.c_epr_halfmax = epr.c_epr;
        rep.entanglement.c_epr_ratio = epr.ratio_to_baseline;
    }

    // context: quantities with no pass/fail target
    rep.rows.push_back(context_row("xi_plus_fwhm", cw.sum_fwhm,
                                   "full width of the sum-diagonal cut"));
    rep.rows.push_back(context_row("ratio_coincidence_perp_over_parallel",
                                   coinc_perp.fwhm / coinc_par.fwhm,
                                   "computed counterpart of the measured 11"));
    rep.rows.push_back(context_row("ratio_single_perp_over_parallel",
                                   single_perp.fwhm / single_par.fwhm,
                                   "computed counterpart of the measured 0.41"));
    rep.rows.push_back(context_row("schmidt_k", rep.entanglement.schmidt_k,
                                   "no reference value; convergence delta " +
                                       std::to_string(rep.entanglement.schmidt_convergence_delta)));
    const char* exp_note = "experimental - not a pass/fail target";
    rep.rows.push_back(context_row("exp_ratio_coincidence_perp_over_parallel", 11.0, exp_note));
    rep.rows.push_back(context_row("exp_ratio_single_perp_over_parallel", 0.41, exp_note));
    rep.rows.push_back(context_row("exp_r_k_parallel_slit", 80.0, exp_note));
    rep.rows.push_back(context_row("exp_single_fwhm_parallel_mrad", 60.0, exp_note));
    rep.rows.push_back(context_row("exp_coincidence_fwhm_parallel_mrad", 0.75, exp_note));
    rep.rows.push_back(context_row("exp_r_k_parallel_lens", 67.0, exp_note));
    rep.rows.push_back(context_row("exp_r_k_perp_lens", 2.33, exp_note));

    rep.all_pass = std::all_of(rep.rows.begin(), rep.rows.end(),
                               [](const ReproRow& r) { return r.context_only || r.pass; });

    if (write_files) {
        const fs::path out = cfg.out_dir;
        fs::create_directories(out / "curves");
        auto dump = [&](const SampledCurve& c, const std::string& name) {
            write_csv_file(c, (out / "curves" / name).string());
        };
        dump(coincidence_curve(s_perp_flat, 0.0, {-0.036, 0.036, pts}), "sinc_perp.csv");
        {
            ScenarioConfig mid = s_par_flat;
            mid.np_eff = reference_np_eff / 10.0;
            dump(coincidence_curve(mid, 0.0, {-0.02, 0.08, pts}), "sinc_intermediate.csv");
        }
        dump(coincidence_curve(s_par_flat, 0.0, {-0.003, 0.003, pts}), "sinc_parallel.csv");
        dump(coincidence_curve(s_perp, 0.0, {-0.02, 0.02, pts}),
             "momentum_coincidence_perp.csv");
        dump(single_particle_quadrature(s_perp, singles_axis(s_perp, 801)),
             "momentum_single_perp.csv");
        dump(coincidence_curve(s_par, 0.0, {-0.0015, 0.0015, pts}),
             "momentum_coincidence_parallel.csv");
        dump(single_particle_analytic(s_par, singles_axis(s_par, pts)),
             "momentum_single_parallel.csv");
        {
            SampledCurve pump_curve;
            pump_curve.axis = linspace(-4.0 * alpha, 4.0 * alpha, pts);
            for (double t : pump_curve.axis) {
                const double a = pump_amplitude(s_par.pump, t);
                pump_curve.density.push_back(a * a);
            }
            pump_curve.normalization = Normalization::peak_one;
            pump_curve.label = "pump_intensity";
            pump_curve.units = "rad";
            dump(pump_curve, "pump_intensity.csv");
        }
        const double b = ln2 / (2.0 * alpha * alpha * s_par.np_eff * s_par.np_eff);
        const double theta_e = std::pow(b, -0.25);
        const double wm = 2.7954 / theta_e;
        const double ws = 2.497 * std::abs(s_par.np_eff) / (theta_e * theta_e);
        dump(coordinate_cut(s_par, CoordinateCut::coincidence, {-1.5 * wm, 1.5 * wm, pts}),
             "coordinate_coincidence.csv");
        dump(coordinate_cut(s_par, CoordinateCut::sum_diagonal, {-2.3 * ws, 2.3 * ws, pts}),
             "coordinate_sum_cut.csv");
        dump(coordinate_cut(s_par, CoordinateCut::difference_diagonal,
                            {-0.8 * wm, 0.8 * wm, pts}),
             "coordinate_difference_cut.csv");
        std::ofstream(out / "report.json", std::ios::binary) << report_json(rep, cfg);
        std::ofstream(out / "provenance.json", std::ios::binary)
            << provenance_json(rep, cfg);
    }
    return rep;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& parameter,
                                double from, double to, int steps) {
    if (!(std::isfinite(from) && std::isfinite(to)) || steps < 2) {
        throw config_error("sweep needs finite bounds and at least 2 steps");
    }
    if (parameter != "np_eff" && parameter != "alpha" && parameter != "L") {
        throw config_error("sweep parameter must be np_eff | alpha | L");
    }

    auto one_step = [&](double value) {
        SweepRow row;
        row.value = value;
        try {
            RunConfig c = cfg;
            c.geometry = GeometryPreset::custom;
            c.np_eff = cfg.np_eff ? *cfg.np_eff : reference_np_eff;
            if (parameter == "np_eff")
                c.np_eff = value;
            else if (parameter == "alpha")
                c.alpha_mrad = value;
            else
                c.L_cm = value;
            validate(c);
            const ScenarioBundle b = build_scenario(c, false);
            const ScenarioConfig& s = b.scenario;

            const WidthReport wc = coincidence_width(s, 0.0, cfg.curve_points);
            const WidthReport ws = single_width(s, parameter == "np_eff" ? 20001 : 60001);
            row.coincidence_fwhm = wc.fwhm;
            row.single_fwhm = ws.fwhm;
            row.r_k = ratio_r(ws, wc);

            if (s.np_eff != 0.0 && validity_check(s).ok) {
                const CoordinateWidths cw = coordinate_widths(s, cfg.coord_points / 2 + 1);
                const double dk = wc.fwhm * s.kp0_inv_cm / 2.0;
                const double dx = cw.coincidence_fwhm * 2.0 / s.kp0_inv_cm;
                row.c_epr_ratio = c_epr(dk, dx).ratio_to_baseline;
            } else {
                row.c_epr_ratio = std::numeric_limits<double>::quiet_NaN();
                row.error = "coordinate widths undefined (delta-approximation invalid)";
            }

            const double span_est =
                s.np_eff != 0.0
                    ? std::max(4.0 * std::sqrt(s.pump.alpha_fwhm_rad * std::abs(s.np_eff)),
                               0.6 * std::abs(s.np_eff))
                    : 4.0 * (0.5 * expected_sinc_fwhm(s) + s.pump.alpha_fwhm_rad);
            const int n = std::min(cfg.schmidt_points, 1024);
            const auto grid =
                amplitude_grid(s, {-span_est, span_est, n, -span_est, span_est, n}, 1);
            row.schmidt_k = schmidt_from_grid(grid).k;
        } catch (const std::exception& e) {
            row.coincidence_fwhm = row.single_fwhm = row.r_k = row.c_epr_ratio =
                row.schmidt_k = std::numeric_limits<double>::quiet_NaN();
            row.error = e.what();
        }
        return row;
    };

    std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
    const int workers = std::max(1, cfg.workers);
    for (int base = 0; base < steps; base += workers) {
        std::vector<std::future<SweepRow>> batch;
        for (int i = base; i < std::min(steps, base + workers); ++i) {
            const double v = from + (to - from) * i / (steps - 1);
            batch.push_back(std::async(std::launch::async, one_step, v));
        }
        for (int i = base; i < std::min(steps, base + workers); ++i) {
            rows[static_cast<std::size_t>(i)] = batch[static_cast<std::size_t>(i - base)].get();
        }
    }
    return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& parameter,
                     std::ostream& out) {
    out << "# sweep, " << parameter
        << ", columns: value,coincidence_fwhm,single_fwhm,r_k,c_epr_ratio,schmidt_k,reason\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (const auto& r : rows) {
        put(r.value);
        for (double v : {r.coincidence_fwhm, r.single_fwhm, r.r_k, r.c_epr_ratio,
                         r.schmidt_k}) {
            out << ',';
            put(v);
        }
        out << ',' << r.error << '\n';
    }
}

namespace {

json row_json(const ReproRow& r) {
    json j;
    j["name"] = r.name;
    j["computed"] = r.computed;
    if (r.target) {
        j["target"] = *r.target;
        j["tolerance"] = r.tol_str;
        j["deviation"] = r.deviation;
    }
    j["status"] = r.context_only ? "context" : (r.pass ? "pass" : "fail");
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace

std::string report_json(const ReproReport& report, const RunConfig& cfg) {
    json j;
    j["mode"] = report.mode_label;
    j["all_pass"] = report.all_pass;
    j["scenario"] = {{"crystal", cfg.crystal},
                     {"lambda_nm", cfg.lambda_nm},
                     {"L_cm", cfg.L_cm},
                     {"alpha_mrad", cfg.alpha_mrad}};
    j["rows"] = json::array();
    for (const auto& r : report.rows) j["rows"].push_back(row_json(r));
    json ent;
    ent["r_k"] = report.entanglement.r_k;
    if (report.entanglement.r_x)
        ent["r_x"] = *report.entanglement.r_x;
    else
        ent["r_x"] = nullptr;
    ent["c_epr_halfmax"] = report.entanglement.c_epr_halfmax;
    ent["c_epr_ratio"] = report.entanglement.c_epr_ratio;
    ent["schmidt_k"] = report.entanglement.schmidt_k;
    json spec = json::array();
    for (double l : report.entanglement.schmidt_spectrum) {
        if (l <= 1e-6) break;
        spec.push_back(l);
    }
    ent["schmidt_spectrum"] = spec;
    j["entanglement"] = ent;
    return j.dump(2) + "\n";
}

std::string provenance_json(const ReproReport& report, const RunConfig& cfg) {
    json j;
    j["config_hash"] = config_hash(cfg);
    j["config"] = serialize_config(cfg);
    j["grid"] = {{"curve_points", cfg.curve_points},
                 {"coord_points", cfg.coord_points},
                 {"schmidt_points", cfg.schmidt_points},
                 {"schmidt_span_mrad", cfg.schmidt_span_mrad}};
    j["schmidt_convergence_delta"] = report.entanglement.schmidt_convergence_delta;
    std::time_t now = std::time(nullptr);
    char ts[32];
    std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_utc"] = ts;
#ifdef BIPHOTON_VERSION
    j["version"] = BIPHOTON_VERSION;
#endif
    return j.dump(2) + "\n";
}

void print_report(const ReproReport& report, std::ostream& out) {
    out << "mode: " << report.mode_label << "\n";
    for (const auto& r : report.rows) {
        std::ostringstream line;
        line << (r.context_only ? "  ctx " : (r.pass ? "  PASS" : "  FAIL")) << "  "
             << std::left << std::setw(40) << r.name << std::setprecision(6)
             << std::setw(14) << r.computed;
        if (r.target) {
            line << " target " << std::setw(10) << *r.target << " (" << r.tol_str << ")";
        }
        if (!r.note.empty()) line << "  [" << r.note << "]";
        out << line.str() << "\n";
    }
    out << (report.all_pass ? "ALL PASS" : "FAILURES PRESENT") << "\n";
}

}  // namespace biphoton::cli
