#pragma once

#include <Eigen/Core>
#include <complex>
#include <vector>

#include "biphoton/scenario.hpp"

namespace biphoton {

/// Longitudinal detuning from the full square roots, wide-crystal rule
/// k_p_xi = k1_xi + k2_xi. All wavenumbers in cm^-1; the caller chooses the
/// magnitude set (vacuum or in-medium). Throws std::domain_error in the
/// evanescent regime (any transverse component at or beyond its magnitude).
double detuning_exact(double k1_xi, double k2_xi, double k1, double k2, double kp);

/// Near-axis detuning in terms of external scattering angles,
///   (kp0/8) * [4 np_eff (t1+t2) + (t1-t2)^2],
/// the external-angle convention: the in-crystal detuning is this value
/// divided by n_o (see phase_mismatch).
double detuning_angles(const ScenarioConfig& cfg, double theta1, double theta2);

/// Sinc argument (L/2) * detuning / n_o = (L kp0 / 16 n_o)[...]; one place
/// owns the n_o scale so every distribution stays consistent.
double phase_mismatch(const ScenarioConfig& cfg, double theta1, double theta2);

/// Momentum-space joint amplitude pump((t1+t2)/2) * sinc(phase_mismatch).
/// Real-valued; exchange-symmetric by construction.
double amplitude(const ScenarioConfig& cfg, double theta1, double theta2);

enum class GridDomain { momentum, coordinate };

/// 2-D sampled bipartite amplitude. Rectangular: values(i, j) is the sample
/// at (axis1[i], axis2[j]); both axes strictly increasing.
struct AmplitudeGrid {
    std::vector<double> axis1;
    std::vector<double> axis2;
    Eigen::MatrixXcd values;
    GridDomain domain = GridDomain::momentum;
};

struct GridSpec {
    double min1 = 0.0, max1 = 0.0;
    int n1 = 0;
    double min2 = 0.0, max2 = 0.0;
    int n2 = 0;
};

std::vector<double> linspace(double lo, double hi, int n);

/// Tabulates amplitude() over the tensor grid. Rows may be computed in
/// parallel; each row is filled by exactly one worker in index order, so the
/// result is bit-identical for any worker count.
AmplitudeGrid amplitude_grid(const ScenarioConfig& cfg, const GridSpec& spec,
                             int workers = 1);

}  // namespace biphoton
