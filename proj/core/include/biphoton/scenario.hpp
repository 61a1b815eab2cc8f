#pragma once

#include <cmath>
#include <stdexcept>

#include "biphoton/crystal.hpp"
#include "biphoton/math.hpp"

namespace biphoton {

/// Gaussian pump beam described by its angular intensity FWHM alpha.
struct PumpProfile {
    double alpha_fwhm_rad = 0.0;   // > 0; +infinity means a plane-wave-flat pump
};

/// Field amplitude at pump tilt theta_p: exp[-2 ln2 theta_p^2 / alpha^2],
/// so the intensity halves at theta_p = +-alpha/2.
inline double pump_amplitude(const PumpProfile& pump, double theta_p_rad) {
    if (std::isinf(pump.alpha_fwhm_rad)) return 1.0;
    const double r = theta_p_rad / pump.alpha_fwhm_rad;
    return std::exp(-2.0 * ln2 * r * r);
}

/// One simulation setup. Units fixed across the library: angles rad,
/// lengths cm, wavenumbers cm^-1, wavelengths nm at API boundaries.
struct ScenarioConfig {
    double length_cm = 0.0;      // crystal length L
    double lambda_p_nm = 0.0;    // pump wavelength
    double kp0_inv_cm = 0.0;     // vacuum pump wavenumber 2*pi/lambda_p
    double n_o = 0.0;            // signal ordinary index at 2*lambda_p
    double np_eff = 0.0;         // effective anisotropy derivative
    PumpProfile pump;
};

enum class Geometry {
    perpendicular,   // scan plane perpendicular to the (optical axis, beam) plane
    parallel,        // scan plane containing the optical axis: np_eff = crystal np'
    custom,
};

inline ScenarioConfig make_scenario(double length_cm, double lambda_p_nm, double n_o,
                                    double np_eff, double alpha_fwhm_rad) {
    if (!(length_cm > 0.0)) throw std::invalid_argument("crystal length must be > 0");
    if (!(lambda_p_nm > 0.0)) throw std::invalid_argument("pump wavelength must be > 0");
    if (!(n_o > 0.0)) throw std::invalid_argument("ordinary index must be > 0");
    if (!std::isfinite(np_eff)) throw std::invalid_argument("np_eff must be finite");
    if (!(alpha_fwhm_rad > 0.0)) throw std::invalid_argument("pump width must be > 0");
    return ScenarioConfig{length_cm, lambda_p_nm, vacuum_wavenumber_inv_cm(lambda_p_nm),
                          n_o, np_eff, PumpProfile{alpha_fwhm_rad}};
}

inline ScenarioConfig scenario_from_crystal(const CrystalOptics& optics, double length_cm,
                                            Geometry geometry, double alpha_fwhm_rad,
                                            double custom_np_eff = 0.0) {
    double np_eff = 0.0;
    switch (geometry) {
        case Geometry::perpendicular: np_eff = 0.0; break;
        case Geometry::parallel: np_eff = optics.np_prime; break;
        case Geometry::custom: np_eff = custom_np_eff; break;
    }
    return make_scenario(length_cm, optics.lambda_p_nm, optics.n_o_signal, np_eff,
                         alpha_fwhm_rad);
}

}  // namespace biphoton
