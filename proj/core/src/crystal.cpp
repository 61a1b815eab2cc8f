#include "biphoton/crystal.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "biphoton/math.hpp"
#include "embedded_dispersion.hpp"

namespace biphoton {

double SellmeierForm::n_squared(double lambda_um) const {
    const double s = lambda_um * lambda_um;
    return c[0] + c[1] / (s - c[2]) + c[3] / (s - c[4]) + c[5] * s + c[6] * s * s;
}

namespace {

double checked_index(const DispersionModel& model, const SellmeierForm& form,
                     double lambda_nm) {
    const double um = lambda_nm * 1e-3;
    if (!(um >= form.lo_um && um <= form.hi_um)) {
        std::ostringstream os;
        os << model.name << ": wavelength " << lambda_nm
           << " nm outside valid range [" << form.lo_um * 1e3 << ", "
           << form.hi_um * 1e3 << "] nm";
        throw std::domain_error(os.str());
    }
    const double n2 = form.n_squared(um);
    if (!(n2 > 0.0)) {
        std::ostringstream os;
        os << model.name << ": non-physical n^2 = " << n2 << " at " << lambda_nm
           << " nm";
        throw std::domain_error(os.str());
    }
    return std::sqrt(n2);
}

}  // namespace

double index_ordinary(const DispersionModel& model, double lambda_nm) {
    return checked_index(model, model.ordinary, lambda_nm);
}

double index_extraordinary(const DispersionModel& model, double lambda_nm) {
    return checked_index(model, model.extraordinary, lambda_nm);
}

double index_extraordinary_angle(const DispersionModel& model, double lambda_nm,
                                 double phi_rad) {
    if (!(phi_rad >= 0.0 && phi_rad <= pi / 2)) {
        throw std::domain_error(model.name + ": angle must lie in [0, pi/2]");
    }
    const double no = index_ordinary(model, lambda_nm);
    const double ne = index_extraordinary(model, lambda_nm);
    const double c = std::cos(phi_rad);
    const double s = std::sin(phi_rad);
    return 1.0 / std::sqrt(c * c / (no * no) + s * s / (ne * ne));
}

double index_angle_derivative(const DispersionModel& model, double lambda_nm,
                              double phi_rad) {
    const double no = index_ordinary(model, lambda_nm);
    const double ne = index_extraordinary(model, lambda_nm);
    const double np = index_extraordinary_angle(model, lambda_nm, phi_rad);
    // d/dphi [cos^2/no^2 + sin^2/ne^2]^(-1/2)
    return -0.5 * np * np * np * std::sin(2.0 * phi_rad) *
           (1.0 / (ne * ne) - 1.0 / (no * no));
}

CrystalOptics solve_phase_matching(const DispersionModel& model, double lambda_p_nm) {
    CrystalOptics out;
    out.model = model;
    out.lambda_p_nm = lambda_p_nm;
    out.n_o_pump = index_ordinary(model, lambda_p_nm);
    out.n_o_signal = index_ordinary(model, 2.0 * lambda_p_nm);

    const double target = out.n_o_signal;
    auto f = [&](double phi) {
        return index_extraordinary_angle(model, lambda_p_nm, phi) - target;
    };

    double lo = 0.0;
    double hi = pi / 2;
    double flo = f(lo);
    double fhi = f(hi);
    if (flo * fhi > 0.0) {
        throw std::runtime_error(
            model.name + ": no collinear degenerate type-I phase matching at " +
            std::to_string(lambda_p_nm) + " nm (no sign change on (0, pi/2))");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (flo * fm <= 0.0) {
            hi = mid;
            fhi = fm;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    out.phi0_rad = 0.5 * (lo + hi);
    out.np_prime = index_angle_derivative(model, lambda_p_nm, out.phi0_rad);
    return out;
}

namespace {

std::vector<DispersionModel> parse_lines(std::string_view text) {
    std::vector<DispersionModel> models;
    std::map<std::string, std::size_t> by_name;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string source;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            source = line.substr(hash + 1);
            if (auto b = source.find_first_not_of(" \t"); b != std::string::npos)
                source = source.substr(b);
            else
                source.clear();
            line = line.substr(0, hash);
        }
        std::istringstream ls(line);
        std::string name, axis;
        if (!(ls >> name)) continue;  // blank or comment-only line
        auto fail = [&](const std::string& what) {
            throw std::runtime_error("dispersion data line " +
                                     std::to_string(lineno) + ": " + what);
        };
        if (!(ls >> axis)) fail("missing axis field");
        if (axis != "o" && axis != "e") fail("axis must be 'o' or 'e', got '" + axis + "'");
        SellmeierForm form;
        if (!(ls >> form.lo_um >> form.hi_um)) fail("missing wavelength range");
        if (!(form.lo_um > 0.0 && form.hi_um > form.lo_um)) fail("invalid wavelength range");
        for (int i = 0; i < 7; ++i) {
            if (!(ls >> form.c[i])) fail("expected 7 coefficients");
        }
        std::string extra;
        if (ls >> extra) fail("unexpected trailing field '" + extra + "'");

        std::size_t idx;
        if (auto it = by_name.find(name); it != by_name.end()) {
            idx = it->second;
        } else {
            idx = models.size();
            by_name.emplace(name, idx);
            models.push_back(DispersionModel{name, {}, {}, source});
        }
        if (axis == "o")
            models[idx].ordinary = form;
        else
            models[idx].extraordinary = form;
        if (!source.empty() && models[idx].source.find(source) == std::string::npos) {
            if (!models[idx].source.empty()) models[idx].source += "; ";
            models[idx].source += source;
        }
    }
    for (const auto& m : models) {
        if (m.ordinary.hi_um == 0.0 || m.extraordinary.hi_um == 0.0) {
            throw std::runtime_error("dispersion data: crystal '" + m.name +
                                     "' is missing an o or e record");
        }
    }
    return models;
}

}  // namespace

std::vector<DispersionModel> parse_dispersion_data(std::string_view text) {
    return parse_lines(text);
}

const std::vector<DispersionModel>& bundled_models() {
    static const std::vector<DispersionModel> models =
        parse_lines(detail::embedded_dispersion_data);
    return models;
}

const DispersionModel& find_model(const std::vector<DispersionModel>& models,
                                  std::string_view name) {
    for (const auto& m : models) {
        if (m.name == name) return m;
    }
    throw std::runtime_error("unknown crystal '" + std::string(name) + "'");
}

const DispersionModel& find_model(std::string_view name) {
    return find_model(bundled_models(), name);
}

std::vector<std::string> list_crystals() {
    std::vector<std::string> names;
    for (const auto& m : bundled_models()) names.push_back(m.name);
    return names;
}

}  // namespace biphoton
