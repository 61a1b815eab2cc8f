#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "biphoton/crystal.hpp"
#include "biphoton/distributions.hpp"
#include "biphoton/math.hpp"
#include "oracles.hpp"

using namespace biphoton;

namespace {

// Reduced-scale setup where the grids stay small but the narrow-sinc
// condition still holds comfortably (lhs/rhs ~ 18).
ScenarioConfig reduced_scenario() {
    const auto li = solve_phase_matching(find_model("LiIO3"), 325.0);
    return make_scenario(0.1, 325.0, li.n_o_signal, -0.1436, 0.05);
}

}  // namespace

TEST_CASE("unitary FFT preserves total power to machine precision") {
    const auto cfg = reduced_scenario();
    const int n = 256;
    const auto grid = amplitude_grid(cfg, {-0.42, 0.42, n, -0.42, 0.42, n});

    // row-column 2-D transform of the sampled amplitude
    std::vector<std::vector<std::complex<double>>> a(
        n, std::vector<std::complex<double>>(n));
    double power_in = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = grid.values(i, j);
            power_in += std::norm(grid.values(i, j));
        }
    }
    for (auto& row : a) oracles::fft_radix2(row, false);
    for (int j = 0; j < n; ++j) {
        std::vector<std::complex<double>> col(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        oracles::fft_radix2(col, false);
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(i)];
    }
    double power_out = 0.0;
    for (const auto& row : a) {
        for (const auto& v : row) power_out += std::norm(v);
    }
    CHECK(std::abs(power_out - power_in) / power_in < 1e-6);
}

TEST_CASE("dense double Fourier transform confirms the stationary-sinc cuts") {
    const auto cfg = reduced_scenario();
    REQUIRE(validity_check(cfg).ok);

    // dense momentum grid of the full amplitude (no delta approximation)
    const int n = 768;
    const double span = 0.42;
    const auto grid = amplitude_grid(cfg, {-span, span, n, -span, span, n});

    struct Case {
        CoordinateCut cut;
        double partner;
        double extent;
    } cases[] = {{CoordinateCut::coincidence, 0.0, 45.0},
                 {CoordinateCut::difference_diagonal, -1.0, 25.0},
                 {CoordinateCut::sum_diagonal, 1.0, 110.0}};
    for (const auto& c : cases) {
        const auto dft = fwhm(oracles::dft_cut(grid, c.partner, c.extent, 361));
        const auto quad = fwhm(coordinate_cut(cfg, c.cut, {-c.extent, c.extent, 361}));
        CHECK(std::abs(dft.fwhm - quad.fwhm) / quad.fwhm < 0.05);
    }
}
