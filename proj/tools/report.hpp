#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biphoton/crystal.hpp"
#include "biphoton/distributions.hpp"
#include "biphoton/entanglement.hpp"
#include "biphoton/scenario.hpp"
#include "config.hpp"

namespace biphoton::cli {

/// Crystal solution + scenario resolved from a RunConfig. np_source records
/// whether np_eff came from the preset pin, the dispersion solve, or a
/// custom value.
struct ScenarioBundle {
    CrystalOptics optics;
    ScenarioConfig scenario;
    std::string np_source;
};

/// reproduce_mode pins the parallel-geometry np_eff to the reference value
/// -0.1436 unless from_dispersion is set (then results are labeled
/// "prediction" instead of "reproduction").
ScenarioBundle build_scenario(const RunConfig& cfg, bool reproduce_mode);

inline constexpr double reference_np_eff = -0.1436;

enum class TolKind { relative, absolute };

struct AcceptanceEntry {
    std::string name;
    double target = 0.0;
    double tol = 0.0;
    TolKind kind = TolKind::relative;
    std::string tol_str;
};

/// Single source of truth for every checked reproduction quantity and its
/// tolerance; README's acceptance-criteria table must quote these strings
/// verbatim (enforced by a test).
const std::vector<AcceptanceEntry>& acceptance_table();

struct ReproRow {
    std::string name;
    double computed = 0.0;
    std::optional<double> target;
    double tol = 0.0;
    TolKind kind = TolKind::relative;
    std::string tol_str;
    double deviation = 0.0;   // relative or absolute per kind
    bool pass = true;
    bool context_only = false;
    std::string note;
};

struct ReproReport {
    std::string mode_label;   // "reproduction" or "prediction"
    std::vector<ReproRow> rows;
    bool all_pass = true;
    EntanglementReport entanglement;
};

/// Executes the full reference-quantity table on the configured scenario;
/// optionally writes curves/*.csv, report.json and provenance.json under
/// cfg.out_dir.
ReproReport run_reproduce(const RunConfig& cfg, bool write_files);

/// Expected near-zero sinc^2 peak FWHM for axis sizing.
double expected_sinc_fwhm(const ScenarioConfig& cfg);

/// Width helpers shared by commands (coincidence at theta2, marginals).
WidthReport coincidence_width(const ScenarioConfig& cfg, double theta2, int points);
WidthReport single_width(const ScenarioConfig& cfg, int points);

struct SweepRow {
    double value = 0.0;
    double coincidence_fwhm = 0.0;
    double single_fwhm = 0.0;
    double r_k = 0.0;
    double c_epr_ratio = 0.0;
    double schmidt_k = 0.0;
    std::string error;   // non-empty marks a NaN row with its reason
};

/// Sweeps one parameter (np_eff | alpha | L); failed steps become NaN rows
/// with a reason. Steps run concurrently up to cfg.workers; row order is the
/// parameter order regardless of worker count.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const std::string& parameter,
                                double from, double to, int steps);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& parameter,
                     std::ostream& out);

std::string report_json(const ReproReport& report, const RunConfig& cfg);
std::string provenance_json(const ReproReport& report, const RunConfig& cfg);

void print_report(const ReproReport& report, std::ostream& out);

}  // namespace biphoton::cli
