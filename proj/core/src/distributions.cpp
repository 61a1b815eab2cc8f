#include "biphoton/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "biphoton/math.hpp"
#include "biphoton/quadrature.hpp"

namespace biphoton {

namespace {

void normalize_peak_one(SampledCurve& c) {
    const double m = *std::max_element(c.density.begin(), c.density.end());
    if (!(m > 0.0)) throw std::runtime_error("curve has no positive samples");
    for (double& v : c.density) v /= m;
    c.normalization = Normalization::peak_one;
}

std::vector<double> axis_points(const AxisSpec& spec) {
    return linspace(spec.min, spec.max, spec.n);
}

}  // namespace

SampledCurve coincidence_curve(const ScenarioConfig& cfg, double fixed_theta2,
                               const AxisSpec& axis) {
    SampledCurve c;
    c.axis = axis_points(axis);
    c.density.reserve(c.axis.size());
    for (double t1 : c.axis) {
        const double a = amplitude(cfg, t1, fixed_theta2);
        c.density.push_back(a * a);
    }
    normalize_peak_one(c);
    c.label = "coincidence";
    c.units = "rad";
    return c;
}

namespace {

// Integrand of the marginal over the partner angle, written in the partner
// sum th = theta1 + theta2 so the pump factor is pump(th/2).
double singles_integrand(const ScenarioConfig& cfg, double th, double theta1) {
    const double d = th - 2.0 * theta1;
    const double arg = cfg.length_cm * cfg.kp0_inv_cm / (16.0 * cfg.n_o) *
                       (4.0 * cfg.np_eff * th + d * d);
    const double a = pump_amplitude(cfg.pump, 0.5 * th) * sinc(arg);
    return a * a;
}

double pump_support_halfwidth(const ScenarioConfig& cfg) {
    // |E_p(th/2)|^2 = exp(-ln2 th^2/alpha^2) < 1e-10 beyond ~5.76 alpha
    const double alpha = cfg.pump.alpha_fwhm_rad;
    if (std::isinf(alpha)) {
        throw std::invalid_argument("marginal over a flat pump does not converge");
    }
    return 5.7555 * alpha;
}

}  // namespace

SampledCurve single_particle_quadrature(const ScenarioConfig& cfg, const AxisSpec& axis,
                                        const QuadratureSpec& spec) {
    SampledCurve c;
    c.axis = axis_points(axis);
    c.density.reserve(c.axis.size());
    const double w = pump_support_halfwidth(cfg);
    for (double t1 : c.axis) {
        std::vector<double> brk;
        if (cfg.np_eff != 0.0) {
            const double disc = cfg.np_eff * cfg.np_eff - 2.0 * cfg.np_eff * t1;
            if (disc >= 0.0) {
                const double s = std::sqrt(disc);
                for (double r : {2.0 * (t1 - cfg.np_eff - s), 2.0 * (t1 - cfg.np_eff + s)}) {
                    if (r > -w && r < w) {
                        // bracket each sinc^2 spike with a few lobe widths
                        const double slope = cfg.length_cm * cfg.kp0_inv_cm /
                                             (16.0 * cfg.n_o) *
                                             std::abs(4.0 * cfg.np_eff +
                                                      2.0 * (r - 2.0 * t1));
                        const double lobe = slope > 0.0 ? pi / slope : 0.0;
                        brk.push_back(r);
                        if (lobe > 0.0 && lobe < w) {
                            brk.push_back(r - 8.0 * lobe);
                            brk.push_back(r + 8.0 * lobe);
                        }
                    }
                }
            }
        }
        const double v = integrate_adaptive(
            [&](double th) { return singles_integrand(cfg, th, t1); }, -w, w, brk,
            spec.rel_tol, spec.max_depth);
        c.density.push_back(v);
    }
    normalize_peak_one(c);
    c.label = "single_particle_quadrature";
    c.units = "rad";
    return c;
}

PmRoots pm_roots(const ScenarioConfig& cfg, double theta1) {
    if (cfg.np_eff == 0.0) {
        throw std::domain_error(
            "pm_roots: degenerate case np_eff = 0 (both roots merge); use the "
            "quadrature path");
    }
    const double disc = cfg.np_eff * cfg.np_eff - 2.0 * cfg.np_eff * theta1;
    if (disc < 0.0) {
        throw std::domain_error("pm_roots: no real phase-matching direction at theta1 = " +
                                std::to_string(theta1));
    }
    const double s = std::sqrt(disc);
    PmRoots r{2.0 * (theta1 - cfg.np_eff - s), 2.0 * (theta1 - cfg.np_eff + s)};
    if (std::abs(r.small_root) > std::abs(r.large_root)) std::swap(r.small_root, r.large_root);
    return r;
}

SampledCurve single_particle_analytic(const ScenarioConfig& cfg, const AxisSpec& axis) {
    if (cfg.np_eff == 0.0) {
        throw std::domain_error(
            "single_particle_analytic requires np_eff != 0; use the quadrature path");
    }
    const ValidityReport v = validity_check(cfg);
    if (!v.ok) {
        std::ostringstream os;
        os << "delta-approximation invalid: lhs/rhs = " << v.ratio << " < 10";
        throw std::domain_error(os.str());
    }
    SampledCurve c;
    c.axis = axis_points(axis);
    c.density.reserve(c.axis.size());
    for (double t1 : c.axis) {
        const double disc = cfg.np_eff * cfg.np_eff - 2.0 * cfg.np_eff * t1;
        if (disc <= 0.0) {
            c.density.push_back(0.0);
            continue;
        }
        const double th_a = 2.0 * (t1 - cfg.np_eff - std::sqrt(disc));
        const double p = pump_amplitude(cfg.pump, 0.5 * th_a);
        c.density.push_back(p * p / std::sqrt(disc));
    }
    normalize_peak_one(c);
    c.label = "single_particle_analytic";
    c.units = "rad";
    return c;
}

ValidityReport validity_check(const ScenarioConfig& cfg) {
    ValidityReport r;
    r.lhs = cfg.length_cm * cfg.kp0_inv_cm * std::abs(cfg.np_eff) / (2.0 * cfg.n_o);
    r.rhs = 2.0 / cfg.pump.alpha_fwhm_rad;
    r.ratio = r.lhs / r.rhs;
    r.ok = r.ratio >= 10.0;
    return r;
}

namespace {

struct CoordinateKernel {
    double b;        // quartic envelope coefficient
    double tmax;     // envelope truncation (env < 1e-10 beyond)
    double np_eff;

    explicit CoordinateKernel(const ScenarioConfig& cfg) {
        const double alpha = cfg.pump.alpha_fwhm_rad;
        np_eff = cfg.np_eff;
        b = ln2 / (2.0 * alpha * alpha * np_eff * np_eff);
        tmax = std::pow(std::log(1e10) / b, 0.25);
    }

    std::complex<double> eval(double xi1, double xi2) const {
        const double chirp = -(xi1 + xi2) / (2.0 * np_eff);
        const double linear = xi1 - xi2;
        return integrate_oscillatory([this](double t) { return std::exp(-b * t * t * t * t); },
                                     tmax, chirp, linear);
    }
};

void require_coordinate_validity(const ScenarioConfig& cfg) {
    if (cfg.np_eff == 0.0) {
        throw std::domain_error(
            "coordinate transform needs np_eff != 0 (delta-approximation regime)");
    }
    const ValidityReport v = validity_check(cfg);
    if (!v.ok) {
        std::ostringstream os;
        os << "delta-approximation invalid for coordinate transform: lhs/rhs = "
           << v.ratio << " < 10";
        throw std::domain_error(os.str());
    }
}

}  // namespace

AmplitudeGrid coordinate_wavefunction(const ScenarioConfig& cfg,
                                      const std::vector<double>& xi1,
                                      const std::vector<double>& xi2) {
    require_coordinate_validity(cfg);
    const CoordinateKernel kernel(cfg);
    AmplitudeGrid grid;
    grid.axis1 = xi1;
    grid.axis2 = xi2;
    grid.domain = GridDomain::coordinate;
    grid.values.resize(static_cast<Eigen::Index>(xi1.size()),
                       static_cast<Eigen::Index>(xi2.size()));
    for (std::size_t i = 0; i < xi1.size(); ++i) {
        for (std::size_t j = 0; j < xi2.size(); ++j) {
            grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                kernel.eval(xi1[i], xi2[j]);
        }
    }
    return grid;
}

SampledCurve coordinate_cut(const ScenarioConfig& cfg, CoordinateCut cut,
                            const AxisSpec& axis) {
    require_coordinate_validity(cfg);
    const CoordinateKernel kernel(cfg);
    SampledCurve c;
    c.axis = axis_points(axis);
    c.density.reserve(c.axis.size());
    double partner = 0.0;
    switch (cut) {
        case CoordinateCut::coincidence: partner = 0.0; break;
        case CoordinateCut::sum_diagonal: partner = 1.0; break;
        case CoordinateCut::difference_diagonal: partner = -1.0; break;
    }
    for (double xi : c.axis) {
        const std::complex<double> a = kernel.eval(xi, partner * xi);
        c.density.push_back(std::norm(a));
    }
    normalize_peak_one(c);
    switch (cut) {
        case CoordinateCut::coincidence: c.label = "coordinate_coincidence"; break;
        case CoordinateCut::sum_diagonal: c.label = "coordinate_sum_cut"; break;
        case CoordinateCut::difference_diagonal: c.label = "coordinate_difference_cut"; break;
    }
    c.units = "x*kp0/2";
    return c;
}

namespace {

double interp_crossing(double x0, double y0, double x1, double y1, double level) {
    // linear segment inversion; exact for the sampled polyline
    if (y1 == y0) return 0.5 * (x0 + x1);
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0);
}

}  // namespace

WidthReport fwhm(const SampledCurve& curve, PeakPolicy policy) {
    const auto& x = curve.axis;
    const auto& y = curve.density;
    const std::size_t n = y.size();
    if (n < 3) throw std::runtime_error("fwhm: need at least 3 samples");

    const double ymax = *std::max_element(y.begin(), y.end());
    if (!(ymax > 0.0)) throw std::runtime_error("fwhm: no positive samples");
    const double gate = 0.5 * ymax;

    // candidate interior maxima above half the global max
    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (y[i] >= y[i - 1] && y[i] >= y[i + 1] && y[i] > gate) {
            if (y[i] == y[i - 1]) continue;  // keep the first sample of a plateau
            candidates.push_back(i);
        }
    }
    if (candidates.empty()) throw std::runtime_error("fwhm: no interior peak found");

    // merge candidates not separated by a dip below half-height
    std::vector<std::size_t> peaks;
    for (std::size_t c : candidates) {
        if (peaks.empty()) {
            peaks.push_back(c);
            continue;
        }
        const std::size_t prev = peaks.back();
        const double valley = *std::min_element(y.begin() + static_cast<long>(prev),
                                                y.begin() + static_cast<long>(c) + 1);
        if (valley < gate) {
            peaks.push_back(c);
        } else if (y[c] > y[prev]) {
            peaks.back() = c;
        }
    }

    std::size_t sel = peaks[0];
    std::size_t sel_idx = 0;
    for (std::size_t k = 0; k < peaks.size(); ++k) {
        const std::size_t p = peaks[k];
        const bool better = (policy == PeakPolicy::nearest_zero)
                                ? std::abs(x[p]) < std::abs(x[sel])
                                : y[p] > y[sel];
        if (better) {
            sel = p;
            sel_idx = k;
        }
    }

    const double half = 0.5 * y[sel];
    WidthReport r;
    r.peak_location = x[sel];
    r.peak_value = y[sel];
    r.n_peaks_detected = static_cast<int>(peaks.size());
    r.selected_peak_index = static_cast<int>(sel_idx);
    r.axis_units = curve.units;

    // walk outward to the first crossings of the selected peak's half height
    std::size_t li = sel;
    while (li > 0 && y[li] > half) --li;
    if (y[li] > half) {
        throw std::runtime_error(
            "fwhm: left half-height crossing outside the sampled axis; widen it");
    }
    r.left_crossing = interp_crossing(x[li], y[li], x[li + 1], y[li + 1], half);

    std::size_t ri = sel;
    while (ri + 1 < n && y[ri] > half) ++ri;
    if (y[ri] > half) {
        throw std::runtime_error(
            "fwhm: right half-height crossing outside the sampled axis; widen it");
    }
    r.right_crossing = interp_crossing(x[ri - 1], y[ri - 1], x[ri], y[ri], half);

    r.fwhm = r.right_crossing - r.left_crossing;
    return r;
}

namespace {

const char* normalization_name(Normalization n) {
    return n == Normalization::peak_one ? "peak_one" : "unit_area";
}

}  // namespace

void write_csv(const SampledCurve& curve, std::ostream& out) {
    if (curve.label.find(',') != std::string::npos ||
        curve.units.find(',') != std::string::npos) {
        throw std::invalid_argument("csv: label/units must not contain commas");
    }
    out << "# " << curve.label << ", " << normalization_name(curve.normalization)
        << ", " << curve.units << "\n";
    char buf[96];
    for (std::size_t i = 0; i < curve.axis.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", curve.axis[i], curve.density[i]);
        out << buf;
    }
}

SampledCurve read_csv(std::istream& in) {
    SampledCurve c;
    std::string line;
    if (!std::getline(in, line) || line.size() < 2 || line[0] != '#') {
        throw std::runtime_error("csv: missing header line");
    }
    {
        std::string meta = line.substr(1);
        const auto p1 = meta.find(',');
        const auto p2 = meta.find(',', p1 + 1);
        if (p1 == std::string::npos || p2 == std::string::npos) {
            throw std::runtime_error("csv: header must be '# label, normalization, units'");
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        c.label = trim(meta.substr(0, p1));
        const std::string norm = trim(meta.substr(p1 + 1, p2 - p1 - 1));
        c.units = trim(meta.substr(p2 + 1));
        if (norm == "peak_one")
            c.normalization = Normalization::peak_one;
        else if (norm == "unit_area")
            c.normalization = Normalization::unit_area;
        else
            throw std::runtime_error("csv: unknown normalization '" + norm + "'");
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error("csv line " + std::to_string(lineno) +
                                     ": expected 'axis,density'");
        }
        std::size_t used1 = 0, used2 = 0;
        const double a = std::stod(line.substr(0, comma), &used1);
        const double d = std::stod(line.substr(comma + 1), &used2);
        c.axis.push_back(a);
        c.density.push_back(d);
    }
    return c;
}

void write_csv_file(const SampledCurve& curve, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(curve, out);
}

SampledCurve read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_csv(in);
}

}  // namespace biphoton
