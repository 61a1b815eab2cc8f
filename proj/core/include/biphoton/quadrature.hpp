#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace biphoton {

/// Raised when adaptive refinement hits its depth cap; carries the tolerance
/// actually achieved so callers can report it.
struct quadrature_error : std::runtime_error {
    double achieved_tol;
    explicit quadrature_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_tol(achieved) {}
};

/// Raised when an oscillatory integrand would need more panels than the guard
/// allows (the requested output grid is too fine for the integrand).
struct resolution_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive Simpson over [a, b] with optional interior breakpoints (e.g. known
/// integrand spikes). Refines until successive estimates differ by less than
/// rel_tol relative (with a tiny absolute floor); throws quadrature_error past
/// max_depth.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const std::vector<double>& breakpoints = {},
                          double rel_tol = 1e-5, int max_depth = 40);

/// Integral of env(t) * exp(i (A t^2 + B t)) over [-tmax, tmax] by fixed-order
/// Gauss-Legendre panels sized from the local phase gradient. Deterministic
/// for given arguments. panel_cap guards against unresolvable oscillation.
std::complex<double> integrate_oscillatory(const std::function<double(double)>& env,
                                           double tmax, double chirp, double linear,
                                           int panel_cap = 200000);

}  // namespace biphoton
