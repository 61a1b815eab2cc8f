#include "biphoton/amplitude.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace biphoton {

double detuning_exact(double k1_xi, double k2_xi, double k1, double k2, double kp) {
    const double kp_xi = k1_xi + k2_xi;
    if (!(std::abs(k1_xi) < k1 && std::abs(k2_xi) < k2 && std::abs(kp_xi) < kp)) {
        std::ostringstream os;
        os << "evanescent regime: |transverse| must stay below the wave-vector "
              "magnitude (k1_xi=" << k1_xi << ", k1=" << k1 << ", k2_xi=" << k2_xi
           << ", k2=" << k2 << ", kp_xi=" << kp_xi << ", kp=" << kp << ")";
        throw std::domain_error(os.str());
    }
    return std::sqrt(kp * kp - kp_xi * kp_xi) - std::sqrt(k1 * k1 - k1_xi * k1_xi) -
           std::sqrt(k2 * k2 - k2_xi * k2_xi);
}

double detuning_angles(const ScenarioConfig& cfg, double theta1, double theta2) {
    const double sum = theta1 + theta2;
    const double diff = theta1 - theta2;
    return cfg.kp0_inv_cm / 8.0 * (4.0 * cfg.np_eff * sum + diff * diff);
}

double phase_mismatch(const ScenarioConfig& cfg, double theta1, double theta2) {
    return 0.5 * cfg.length_cm * detuning_angles(cfg, theta1, theta2) / cfg.n_o;
}

double amplitude(const ScenarioConfig& cfg, double theta1, double theta2) {
    return pump_amplitude(cfg.pump, 0.5 * (theta1 + theta2)) *
           sinc(phase_mismatch(cfg, theta1, theta2));
}

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 2) throw std::invalid_argument("linspace needs at least 2 points");
    if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
        throw std::invalid_argument("linspace needs finite increasing bounds");
    }
    std::vector<double> x(static_cast<std::size_t>(n));
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = lo + step * i;
    x.back() = hi;
    return x;
}

AmplitudeGrid amplitude_grid(const ScenarioConfig& cfg, const GridSpec& spec,
                             int workers) {
    AmplitudeGrid grid;
    grid.axis1 = linspace(spec.min1, spec.max1, spec.n1);
    grid.axis2 = linspace(spec.min2, spec.max2, spec.n2);
    grid.values.resize(spec.n1, spec.n2);
    grid.domain = GridDomain::momentum;

    auto fill_rows = [&](int row_begin, int row_end) {
        for (int i = row_begin; i < row_end; ++i) {
            const double t1 = grid.axis1[static_cast<std::size_t>(i)];
            for (int j = 0; j < spec.n2; ++j) {
                grid.values(i, j) =
                    amplitude(cfg, t1, grid.axis2[static_cast<std::size_t>(j)]);
            }
        }
    };

    const int nw = std::max(1, std::min(workers, spec.n1));
    if (nw == 1) {
        fill_rows(0, spec.n1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(nw));
        const int chunk = (spec.n1 + nw - 1) / nw;
        for (int w = 0; w < nw; ++w) {
            const int b = w * chunk;
            const int e = std::min(spec.n1, b + chunk);
            if (b >= e) break;
            pool.emplace_back(fill_rows, b, e);
        }
        for (auto& t : pool) t.join();
    }
    return grid;
}

}  // namespace biphoton
