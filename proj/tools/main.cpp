#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "biphoton/math.hpp"
#include "biphoton/quadrature.hpp"
#include "config.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace biphoton;
using namespace biphoton::cli;

namespace {

struct FlagValues {
    std::string config_file;
    std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common_flags(CLI::App* cmd, FlagValues& fv) {
    cmd->add_option("--config", fv.config_file, "Config file (key = value lines)");
    auto opt = [cmd, &fv](const std::string& flag, const std::string& key,
                          const std::string& help) {
        cmd->add_option_function<std::string>(
            flag,
            [&fv, key](const std::string& v) { fv.overrides.emplace_back(key, v); },
            help);
    };
    opt("--crystal", "crystal", "Crystal name from the bundled dispersion table");
    opt("--lambda-nm", "lambda_nm", "Pump wavelength in nm");
    opt("--L-cm", "L_cm", "Crystal length in cm");
    opt("--alpha-mrad", "alpha_mrad", "Pump angular FWHM in mrad");
    opt("--geometry", "geometry", "perp | parallel | custom");
    opt("--np-eff", "np_eff", "Effective anisotropy derivative (geometry = custom)");
    opt("--from-dispersion", "from_dispersion",
        "Use the solved np' instead of the pinned reference value");
    opt("--out", "out_dir", "Output directory");
    opt("--workers", "workers", "Concurrent workers");
    opt("--dispersion-file", "dispersion_file", "External dispersion data file");
    opt("--theta2-mrad", "theta2_mrad", "Fixed partner angle for coincidence cuts");
    opt("--curve-points", "curve_points", "Samples per 1-D curve");
    opt("--coord-points", "coord_points", "Samples per coordinate cut");
    opt("--schmidt-points", "schmidt_points", "Grid points per axis for the SVD");
    opt("--schmidt-span-mrad", "schmidt_span_mrad", "Half-extent of the SVD grid");
}

RunConfig resolve_config(const FlagValues& fv) {
    RunConfig cfg;
    if (!fv.config_file.empty()) {
        std::ifstream in(fv.config_file, std::ios::binary);
        if (!in) throw config_error("cannot open config file " + fv.config_file);
        std::ostringstream ss;
        ss << in.rdbuf();
        cfg = parse_config(ss.str());
    }
    for (const auto& [key, value] : fv.overrides) {
        apply_override(cfg, key, value, "flag --" + key);
    }
    validate(cfg);
    return cfg;
}

int cmd_crystal(const RunConfig& cfg, const std::string& name) {
    const auto show = [&](const std::string& n, double lambda_nm) {
        std::printf("%-6s  ", n.c_str());
        try {
            const auto o = solve_phase_matching(find_model(n), lambda_nm);
            std::printf("pump %.1f nm  n_o(pump) %.6f  n_o(signal) %.6f  phi0 %.4f deg  np' %+.6f\n",
                        lambda_nm, o.n_o_pump, o.n_o_signal, o.phi0_rad * 180.0 / pi,
                        o.np_prime);
        } catch (const std::exception& e) {
            std::printf("pump %.1f nm  %s\n", lambda_nm, e.what());
        }
    };
    if (!name.empty()) {
        show(name, cfg.lambda_nm);
        return 0;
    }
    for (const auto& n : list_crystals()) show(n, cfg.lambda_nm);
    return 0;
}

int cmd_widths(const RunConfig& cfg) {
    const ScenarioBundle b = build_scenario(cfg, false);
    const WidthReport wc = coincidence_width(b.scenario, cfg.theta2_mrad * 1e-3,
                                             cfg.curve_points);
    const WidthReport ws = single_width(b.scenario, cfg.curve_points);
    const double rk = ratio_r(ws, wc);
    std::printf("np_eff %+.6f (%s)\n", b.scenario.np_eff, b.np_source.c_str());
    std::printf("coincidence FWHM  %.6g mrad\n", wc.fwhm * 1e3);
    std::printf("single FWHM       %.6g mrad\n", ws.fwhm * 1e3);
    std::printf("R_k               %.6g\n", rk);
    const auto v = validity_check(b.scenario);
    std::printf("validity lhs %.6g rhs %.6g ratio %.4g (%s)\n", v.lhs, v.rhs, v.ratio,
                v.ok ? "ok" : "delta-approximation invalid");
    return 0;
}

int cmd_curves(const RunConfig& cfg) {
    const ScenarioBundle b = build_scenario(cfg, false);
    const ScenarioConfig& s = b.scenario;
    fs::create_directories(fs::path(cfg.out_dir) / "curves");
    auto dump = [&](const SampledCurve& c, const std::string& name) {
        const auto path = fs::path(cfg.out_dir) / "curves" / name;
        write_csv_file(c, path.string());
        std::printf("wrote %s\n", path.string().c_str());
    };
    const double alpha = s.pump.alpha_fwhm_rad;
    const double wc = std::min(expected_sinc_fwhm(s), 2.0 * alpha);
    dump(coincidence_curve(s, cfg.theta2_mrad * 1e-3, {-1.6 * wc, 1.6 * wc, cfg.curve_points}),
         "coincidence.csv");
    if (s.np_eff != 0.0 && validity_check(s).ok) {
        const double a = std::abs(s.np_eff);
        const double scale = std::sqrt(alpha * a);
        dump(single_particle_analytic(
                 s, {-std::max(0.55 * a, 3 * scale) - 2 * alpha, 5.5 * scale + 4 * alpha,
                     cfg.curve_points}),
             "single.csv");
        const double b4 = ln2 / (2.0 * alpha * alpha * s.np_eff * s.np_eff);
        const double te = std::pow(b4, -0.25);
        const double wm = 2.7954 / te;
        const double wsum = 2.497 * a / (te * te);
        dump(coordinate_cut(s, CoordinateCut::coincidence, {-1.5 * wm, 1.5 * wm, cfg.coord_points}),
             "coordinate_coincidence.csv");
        dump(coordinate_cut(s, CoordinateCut::sum_diagonal,
                            {-2.3 * wsum, 2.3 * wsum, cfg.coord_points}),
             "coordinate_sum_cut.csv");
        dump(coordinate_cut(s, CoordinateCut::difference_diagonal,
                            {-0.8 * wm, 0.8 * wm, cfg.coord_points}),
             "coordinate_difference_cut.csv");
    } else {
        const double w = 0.5 * expected_sinc_fwhm(s) + alpha;
        dump(single_particle_quadrature(s, {-4 * w, 4 * w, 801}), "single.csv");
    }
    SampledCurve pump_curve;
    pump_curve.axis = linspace(-4.0 * alpha, 4.0 * alpha, cfg.curve_points);
    for (double t : pump_curve.axis) {
        const double a = pump_amplitude(s.pump, t);
        pump_curve.density.push_back(a * a);
    }
    pump_curve.normalization = Normalization::peak_one;
    pump_curve.label = "pump_intensity";
    pump_curve.units = "rad";
    dump(pump_curve, "pump_intensity.csv");
    return 0;
}

int cmd_schmidt(const RunConfig& cfg) {
    const ScenarioBundle b = build_scenario(cfg, false);
    const double span = cfg.schmidt_span_mrad * 1e-3;
    const GridSpec spec{-span, span, cfg.schmidt_points, -span, span, cfg.schmidt_points};
    const auto fine = schmidt_from_grid(amplitude_grid(b.scenario, spec, cfg.workers));
    const GridSpec half{-span, span, cfg.schmidt_points / 2, -span, span,
                        cfg.schmidt_points / 2};
    const auto coarse = schmidt_from_grid(amplitude_grid(b.scenario, half, cfg.workers));
    std::printf("schmidt K = %.6g  (refinement delta %.3g%%, grid %d^2, span ±%g mrad)\n",
                fine.k, 100.0 * std::abs(fine.k - coarse.k) / fine.k, cfg.schmidt_points,
                cfg.schmidt_span_mrad);
    std::printf("leading coefficients:");
    for (std::size_t i = 0; i < fine.spectrum.size() && i < 8; ++i) {
        std::printf(" %.4g", fine.spectrum[i]);
    }
    std::printf("\n");
    return 0;
}

int cmd_reproduce(const RunConfig& cfg) {
    const ReproReport rep = run_reproduce(cfg, true);
    print_report(rep, std::cout);
    std::printf("outputs under %s\n", cfg.out_dir.c_str());
    return rep.all_pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, const std::string& parameter, double from, double to,
              int steps) {
    const auto rows = run_sweep(cfg, parameter, from, to, steps);
    fs::create_directories(cfg.out_dir);
    const auto path = fs::path(cfg.out_dir) / ("sweep_" + parameter + ".csv");
    std::ofstream out(path, std::ios::binary);
    write_sweep_csv(rows, parameter, out);
    std::printf("wrote %s (%zu rows)\n", path.string().c_str(), rows.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Biphoton anisotropy toolkit: angular and coordinate biphoton "
                 "distributions and entanglement measures for type-I collinear "
                 "degenerate down-conversion"};
    app.require_subcommand(1);

    FlagValues fv;
    std::string crystal_name, sweep_param;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_steps = 9;

    auto* c_curves = app.add_subcommand("curves", "Write distribution curves as CSV");
    add_common_flags(c_curves, fv);
    auto* c_widths = app.add_subcommand("widths", "Print FWHM widths and R_k");
    add_common_flags(c_widths, fv);
    auto* c_schmidt = app.add_subcommand("schmidt", "Schmidt number of the joint amplitude");
    add_common_flags(c_schmidt, fv);
    auto* c_sweep = app.add_subcommand("sweep", "Sweep np_eff | alpha | L");
    add_common_flags(c_sweep, fv);
    c_sweep->add_option("--param", sweep_param, "np_eff | alpha | L")->required();
    c_sweep->add_option("--from", sweep_from, "Range start")->required();
    c_sweep->add_option("--to", sweep_to, "Range end")->required();
    c_sweep->add_option("--steps", sweep_steps, "Number of steps (>= 2)");
    auto* c_crystal = app.add_subcommand("crystal", "Show bundled crystal constants");
    add_common_flags(c_crystal, fv);
    c_crystal->add_option("name", crystal_name, "Crystal to show (default: all)");
    auto* c_repro = app.add_subcommand(
        "reproduce", "Recompute every reference quantity and check tolerances");
    add_common_flags(c_repro, fv);

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = resolve_config(fv);
        if (c_curves->parsed()) return cmd_curves(cfg);
        if (c_widths->parsed()) return cmd_widths(cfg);
        if (c_schmidt->parsed()) return cmd_schmidt(cfg);
        if (c_sweep->parsed()) return cmd_sweep(cfg, sweep_param, sweep_from, sweep_to, sweep_steps);
        if (c_crystal->parsed()) return cmd_crystal(cfg, crystal_name);
        if (c_repro->parsed()) return cmd_reproduce(cfg);
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const quadrature_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const resolution_error& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
