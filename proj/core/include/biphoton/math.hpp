#pragma once

#include <cmath>

namespace biphoton {

inline constexpr double ln2 = 0.69314718055994530942;
inline constexpr double pi = 3.14159265358979323846;

/// sin(u)/u with a series fallback near zero to avoid 0/0 cancellation.
inline double sinc(double u) {
    const double a = std::abs(u);
    if (a < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0);
    }
    return std::sin(u) / u;
}

/// Vacuum wavenumber 2*pi/lambda in cm^-1 for lambda in nm.
inline double vacuum_wavenumber_inv_cm(double lambda_nm) {
    return 2.0 * pi / (lambda_nm * 1e-7);
}

}  // namespace biphoton
