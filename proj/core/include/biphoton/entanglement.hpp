#pragma once

#include <optional>
#include <string>
#include <vector>

#include "biphoton/amplitude.hpp"
#include "biphoton/distributions.hpp"

namespace biphoton {

/// exp[-(alpha x1 + beta x2)^2/(2a^2)] * exp[-(gamma x1 + delta x2)^2/(2b^2)].
/// The two linear forms must be independent (alpha*delta != beta*gamma).
struct DoubleGaussianModel {
    double a = 1.0, b = 1.0;
    double alpha = 1.0, beta = 1.0;
    double gamma = 1.0, delta = -1.0;
};

double double_gaussian_eval(const DoubleGaussianModel& m, double x1, double x2);

struct SchmidtResult {
    double k = 0.0;                  // 1 / sum(lambda^2)
    std::vector<double> spectrum;    // non-increasing, sums to 1, cutoff applied
};

/// Schmidt number of a sampled bipartite amplitude: values are weighted by
/// sqrt(d_axis1 * d_axis2) trapezoid quadrature weights, the singular spectrum
/// of the weighted matrix is normalized to lambda_n summing to one, and
/// K = 1/sum lambda_n^2. The spectrum is truncated at `cutoff` relative to
/// its head. Throws std::invalid_argument on empty/degenerate grids.
SchmidtResult schmidt_from_grid(const AmplitudeGrid& grid, double cutoff = 1e-6);

/// Width ratio R = single/coincidence. Throws on unit mismatch or
/// non-positive widths.
double ratio_r(const WidthReport& single_width, const WidthReport& coincidence_width);

enum class WidthConvention { half_max, variance };

/// EPR-related parameter 1/(dk * dx) with its no-entanglement baseline:
/// (4 ln2)^-1 under half-max widths, 2 under variance (sigma) widths.
struct EprResult {
    double c_epr = 0.0;
    double baseline = 0.0;
    double ratio_to_baseline = 0.0;
    WidthConvention convention = WidthConvention::half_max;
};
EprResult c_epr(double dk_width, double dx_width,
                WidthConvention convention = WidthConvention::half_max);

/// Aggregated entanglement quantifiers for one scenario.
struct EntanglementReport {
    double r_k = 0.0;
    std::optional<double> r_x;       // needs coordinate singles; may be absent
    double c_epr_halfmax = 0.0;
    double c_epr_ratio = 0.0;        // c_epr_halfmax * 4 ln2
    double schmidt_k = 0.0;
    std::vector<double> schmidt_spectrum;
    double schmidt_convergence_delta = 0.0;  // |K - K_coarser|/K
};

/// JSON without any run-variant data (provenance is written separately).
std::string entanglement_report_json(const EntanglementReport& report);

}  // namespace biphoton
