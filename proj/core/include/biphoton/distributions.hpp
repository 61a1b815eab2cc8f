#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "biphoton/amplitude.hpp"
#include "biphoton/scenario.hpp"

namespace biphoton {

enum class Normalization { peak_one, unit_area };

/// 1-D sampled probability density. Momentum curves use rad on the axis;
/// coordinate curves use the dimensionless photon coordinate xi = x' kp0/2.
struct SampledCurve {
    std::vector<double> axis;
    std::vector<double> density;
    Normalization normalization = Normalization::peak_one;
    std::string label;
    std::string units;
};

struct AxisSpec {
    double min = 0.0, max = 0.0;
    int n = 0;
};

enum class PeakPolicy { nearest_zero, global_max };

/// Half-maximum width analysis of one selected peak. The width is the
/// distance between the two half-height crossings; peak_location is the
/// maximum itself (curves here can be strongly asymmetric).
struct WidthReport {
    double fwhm = 0.0;
    double peak_location = 0.0;
    double peak_value = 0.0;
    double left_crossing = 0.0;
    double right_crossing = 0.0;
    int n_peaks_detected = 0;
    int selected_peak_index = 0;
    std::string axis_units;
};

/// Coincidence density |amplitude(theta1, fixed_theta2)|^2, peak-one.
SampledCurve coincidence_curve(const ScenarioConfig& cfg, double fixed_theta2,
                               const AxisSpec& axis);

struct QuadratureSpec {
    double rel_tol = 1e-5;
    int max_depth = 40;
};

/// Single-particle (marginal) density by direct integration over the partner
/// angle. The integration domain covers the pump support; when np_eff != 0
/// the known phase-matching roots seed the subdivision so the narrow sinc^2
/// spikes are never missed.
SampledCurve single_particle_quadrature(const ScenarioConfig& cfg, const AxisSpec& axis,
                                        const QuadratureSpec& spec = {});

/// The two partner-sum roots of the in-crystal detuning at given theta1:
/// theta_{a,b} = 2[theta1 - np -+ sqrt(np^2 - 2 np theta1)]. small_root is
/// the near-axis one. Requires np_eff != 0 (degenerate case -> quadrature
/// path) and a non-negative discriminant.
struct PmRoots {
    double small_root = 0.0;
    double large_root = 0.0;
};
PmRoots pm_roots(const ScenarioConfig& cfg, double theta1);

/// Delta-approximation single-particle density
///   |E_p(theta_a/2)|^2 / sqrt(np^2 - 2 np theta1),
/// zero where the discriminant is negative. Requires np_eff != 0 and the
/// narrow-sinc validity condition (validity_check).
SampledCurve single_particle_analytic(const ScenarioConfig& cfg, const AxisSpec& axis);

/// Validity of the delta-approximation: lhs = L kp0 |np|/(2 n_o) must exceed
/// rhs = 2/alpha by a wide margin (ok iff lhs/rhs >= 10).
struct ValidityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool ok = false;
};
ValidityReport validity_check(const ScenarioConfig& cfg);

/// Coordinate-space bipartite amplitude on a (xi1, xi2) grid,
/// xi_i = x'_i kp0/2, evaluated through the stationary sinc reduction: one
/// oscillatory integral per point with quartic pump envelope
/// exp[-ln2 th^4/(2 alpha^2 np^2)] truncated where it falls below 1e-10.
AmplitudeGrid coordinate_wavefunction(const ScenarioConfig& cfg,
                                      const std::vector<double>& xi1,
                                      const std::vector<double>& xi2);

/// Cut lines through the coordinate-space density, parametrized by the
/// photon-1 coordinate xi = x'_1 kp0/2 along each line.
enum class CoordinateCut {
    coincidence,           // x'_2 = 0
    sum_diagonal,          // x'_2 = +x'_1
    difference_diagonal,   // x'_2 = -x'_1
};
SampledCurve coordinate_cut(const ScenarioConfig& cfg, CoordinateCut cut,
                            const AxisSpec& axis);

/// Peak detection + half-maximum width. Local maxima above half the global
/// maximum separated by dips below half-height count as peaks; the policy
/// picks one; crossings come from linear interpolation on the samples.
/// Throws std::runtime_error when there is no interior peak or a crossing
/// leaves the sampled axis (asking the caller to widen it).
WidthReport fwhm(const SampledCurve& curve,
                 PeakPolicy policy = PeakPolicy::nearest_zero);

/// CSV: one comment line "# label, normalization, units", then
/// "axis,density" rows at 17 significant digits; round-trips bit-exactly.
void write_csv(const SampledCurve& curve, std::ostream& out);
SampledCurve read_csv(std::istream& in);
void write_csv_file(const SampledCurve& curve, const std::string& path);
SampledCurve read_csv_file(const std::string& path);

}  // namespace biphoton
