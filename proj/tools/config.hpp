#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace biphoton::cli {

enum class GeometryPreset { perp, parallel, custom };

/// One run setup. Defaults are the benchmark scenario: a 1.5 cm LiIO3
/// crystal pumped at 325 nm with a 4.114 mrad pump divergence.
struct RunConfig {
    std::string crystal = "LiIO3";
    double lambda_nm = 325.0;
    double L_cm = 1.5;
    double alpha_mrad = 4.114;
    GeometryPreset geometry = GeometryPreset::parallel;
    std::optional<double> np_eff;      // set iff geometry == custom
    bool from_dispersion = false;      // parallel runs: use the solved np' and
                                       // label results "prediction"
    std::string out_dir = "out";
    int workers = 1;
    std::optional<std::string> dispersion_file;
    double theta2_mrad = 0.0;          // fixed partner angle for coincidence
    int curve_points = 4001;
    int coord_points = 1601;
    int schmidt_points = 1024;
    double schmidt_span_mrad = 96.0;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Line-oriented `key = value` text with '#' comments. Unknown keys,
/// malformed values and invariant violations carry the line (or flag) name.
RunConfig parse_config(std::string_view text);

/// Applies one key=value override (CLI flags reuse the config key space).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value,
                    const std::string& source);

/// Validates cross-field invariants (positivity, preset/np_eff exclusivity).
void validate(const RunConfig& cfg);

/// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

bool operator==(const RunConfig& a, const RunConfig& b);

/// FNV-1a hash of the canonical serialization, for provenance records.
std::string config_hash(const RunConfig& cfg);

/// Detector position in the focal plane for a scattering angle:
/// x = F tan(theta). Requires |theta| < pi/2.
double detector_position_cm(double theta_rad, double focal_length_cm);
double detector_angle_rad(double position_cm, double focal_length_cm);

}  // namespace biphoton::cli
