#include "config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace biphoton::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_double(const std::string& v, const std::string& source) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error(source + ": malformed number '" + v + "'");
    }
}

int parse_int(const std::string& v, const std::string& source) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error(source + ": malformed integer '" + v + "'");
    }
}

bool parse_bool(const std::string& v, const std::string& source) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error(source + ": malformed boolean '" + v + "'");
}

void require_positive(double x, const std::string& key, const std::string& source) {
    if (!(x > 0.0)) {
        throw config_error(source + ": " + key + " must be positive, got " +
                           std::to_string(x));
    }
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value,
                    const std::string& source) {
    if (key == "crystal") {
        if (value.empty()) throw config_error(source + ": crystal must be non-empty");
        cfg.crystal = value;
    } else if (key == "lambda_nm") {
        cfg.lambda_nm = parse_double(value, source);
        require_positive(cfg.lambda_nm, key, source);
    } else if (key == "L_cm") {
        cfg.L_cm = parse_double(value, source);
        require_positive(cfg.L_cm, key, source);
    } else if (key == "alpha_mrad") {
        cfg.alpha_mrad = parse_double(value, source);
        require_positive(cfg.alpha_mrad, key, source);
    } else if (key == "geometry") {
        if (value == "perp")
            cfg.geometry = GeometryPreset::perp;
        else if (value == "parallel")
            cfg.geometry = GeometryPreset::parallel;
        else if (value == "custom")
            cfg.geometry = GeometryPreset::custom;
        else
            throw config_error(source + ": geometry must be perp|parallel|custom, got '" +
                               value + "'");
    } else if (key == "np_eff") {
        const double x = parse_double(value, source);
        if (!std::isfinite(x)) throw config_error(source + ": np_eff must be finite");
        cfg.np_eff = x;
    } else if (key == "from_dispersion") {
        cfg.from_dispersion = parse_bool(value, source);
    } else if (key == "out_dir") {
        cfg.out_dir = value;
    } else if (key == "workers") {
        cfg.workers = parse_int(value, source);
        if (cfg.workers < 1) throw config_error(source + ": workers must be >= 1");
    } else if (key == "dispersion_file") {
        cfg.dispersion_file = value;
    } else if (key == "theta2_mrad") {
        cfg.theta2_mrad = parse_double(value, source);
    } else if (key == "curve_points") {
        cfg.curve_points = parse_int(value, source);
        if (cfg.curve_points < 16) throw config_error(source + ": curve_points must be >= 16");
    } else if (key == "coord_points") {
        cfg.coord_points = parse_int(value, source);
        if (cfg.coord_points < 16) throw config_error(source + ": coord_points must be >= 16");
    } else if (key == "schmidt_points") {
        cfg.schmidt_points = parse_int(value, source);
        if (cfg.schmidt_points < 8) throw config_error(source + ": schmidt_points must be >= 8");
        if (cfg.schmidt_points > 4096)
            throw config_error(source + ": schmidt_points capped at 4096");
    } else if (key == "schmidt_span_mrad") {
        cfg.schmidt_span_mrad = parse_double(value, source);
        require_positive(cfg.schmidt_span_mrad, key, source);
    } else {
        throw config_error(source + ": unknown key '" + key + "'");
    }
}

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("line " + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw config_error("line " + std::to_string(lineno) + ": empty key");
        apply_override(cfg, key, value, "line " + std::to_string(lineno));
    }
    validate(cfg);
    return cfg;
}

void validate(const RunConfig& cfg) {
    if (cfg.geometry == GeometryPreset::custom && !cfg.np_eff) {
        throw config_error("geometry = custom requires np_eff");
    }
    if (cfg.geometry != GeometryPreset::custom && cfg.np_eff) {
        throw config_error("np_eff is only valid with geometry = custom "
                           "(preset and custom value are mutually exclusive)");
    }
    if (!(cfg.lambda_nm > 0.0 && cfg.L_cm > 0.0 && cfg.alpha_mrad > 0.0)) {
        throw config_error("lambda_nm, L_cm and alpha_mrad must be positive");
    }
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream os;
    os << "crystal = " << cfg.crystal << "\n";
    os << "lambda_nm = " << fmt(cfg.lambda_nm) << "\n";
    os << "L_cm = " << fmt(cfg.L_cm) << "\n";
    os << "alpha_mrad = " << fmt(cfg.alpha_mrad) << "\n";
    os << "geometry = "
       << (cfg.geometry == GeometryPreset::perp
               ? "perp"
               : cfg.geometry == GeometryPreset::parallel ? "parallel" : "custom")
       << "\n";
    if (cfg.np_eff) os << "np_eff = " << fmt(*cfg.np_eff) << "\n";
    os << "from_dispersion = " << (cfg.from_dispersion ? "true" : "false") << "\n";
    os << "out_dir = " << cfg.out_dir << "\n";
    os << "workers = " << cfg.workers << "\n";
    if (cfg.dispersion_file) os << "dispersion_file = " << *cfg.dispersion_file << "\n";
    os << "theta2_mrad = " << fmt(cfg.theta2_mrad) << "\n";
    os << "curve_points = " << cfg.curve_points << "\n";
    os << "coord_points = " << cfg.coord_points << "\n";
    os << "schmidt_points = " << cfg.schmidt_points << "\n";
    os << "schmidt_span_mrad = " << fmt(cfg.schmidt_span_mrad) << "\n";
    return os.str();
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return serialize_config(a) == serialize_config(b);
}

std::string config_hash(const RunConfig& cfg) {
    const std::string s = serialize_config(cfg);
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double detector_position_cm(double theta_rad, double focal_length_cm) {
    if (!(std::abs(theta_rad) < 1.5707963267948966)) {
        throw std::domain_error("detector_position: |theta| must be below pi/2");
    }
    return focal_length_cm * std::tan(theta_rad);
}

double detector_angle_rad(double position_cm, double focal_length_cm) {
    return std::atan(position_cm / focal_length_cm);
}

}  // namespace biphoton::cli
