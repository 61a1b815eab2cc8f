#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace biphoton {

/// One Sellmeier sheet, wavelengths in micrometres:
///   n^2 = c0 + c1/(S - c2) + c3/(S - c4) + c5*S + c6*S^2,   S = lambda^2.
struct SellmeierForm {
    std::array<double, 7> c{};
    double lo_um = 0.0;   // validity interval, inclusive
    double hi_um = 0.0;

    double n_squared(double lambda_um) const;
};

/// Dispersion model of one uniaxial crystal: ordinary sheet (sphere) and
/// principal extraordinary sheet (ellipsoid semi-axis).
struct DispersionModel {
    std::string name;
    SellmeierForm ordinary;
    SellmeierForm extraordinary;
    std::string source;   // citation comment carried from the data file
};

/// n_o(lambda). Throws std::domain_error outside the record's valid range,
/// naming the interval. Boundaries are inclusive.
double index_ordinary(const DispersionModel& model, double lambda_nm);

/// Principal extraordinary index n_e(lambda).
double index_extraordinary(const DispersionModel& model, double lambda_nm);

/// Index seen by an extraordinary wave propagating at angle phi from the
/// optical axis: [cos^2(phi)/n_o^2 + sin^2(phi)/n_e^2]^(-1/2).
/// Requires phi in [0, pi/2].
double index_extraordinary_angle(const DispersionModel& model, double lambda_nm,
                                 double phi_rad);

/// Closed-form d n_e(phi)/d phi at the given angle and wavelength.
double index_angle_derivative(const DispersionModel& model, double lambda_nm,
                              double phi_rad);

/// Collinear degenerate type-I phase matching solution for one pump line.
struct CrystalOptics {
    DispersionModel model;
    double lambda_p_nm = 0.0;   // pump wavelength
    double n_o_pump = 0.0;      // n_o at lambda_p
    double n_o_signal = 0.0;    // n_o at 2*lambda_p (= n_e(phi0; lambda_p))
    double phi0_rad = 0.0;      // angle between pump wave vector and optical axis
    double np_prime = 0.0;      // d n_e(phi; lambda_p)/d phi at phi0
};

/// Solves n_e(phi0; lambda_p) = n_o(2*lambda_p) by bracketed bisection on
/// (0, pi/2) to 1e-12 rad and evaluates the analytic angular derivative.
/// Throws std::runtime_error when no bracketing sign change exists
/// ("no collinear degenerate type-I phase matching").
CrystalOptics solve_phase_matching(const DispersionModel& model, double lambda_p_nm);

/// Parses the line-oriented dispersion data format. Malformed lines are
/// rejected with their line number in the exception message.
std::vector<DispersionModel> parse_dispersion_data(std::string_view text);

/// Models embedded from data/dispersion.dat at build time.
const std::vector<DispersionModel>& bundled_models();

const DispersionModel& find_model(std::string_view name);
const DispersionModel& find_model(const std::vector<DispersionModel>& models,
                                  std::string_view name);

/// Names of all bundled models, in file order (stable across calls).
std::vector<std::string> list_crystals();

}  // namespace biphoton
