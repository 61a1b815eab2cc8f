#include "biphoton/entanglement.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "biphoton/math.hpp"

namespace biphoton {

double double_gaussian_eval(const DoubleGaussianModel& m, double x1, double x2) {
    const double u = m.alpha * x1 + m.beta * x2;
    const double v = m.gamma * x1 + m.delta * x2;
    return std::exp(-u * u / (2.0 * m.a * m.a)) * std::exp(-v * v / (2.0 * m.b * m.b));
}

namespace {

std::vector<double> trapezoid_weights(const std::vector<double>& axis) {
    const std::size_t n = axis.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = axis[i + 1] - axis[i];
        if (!(h > 0.0)) throw std::invalid_argument("grid axes must be strictly increasing");
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}

}  // namespace

SchmidtResult schmidt_from_grid(const AmplitudeGrid& grid, double cutoff) {
    const auto n1 = grid.values.rows();
    const auto n2 = grid.values.cols();
    if (n1 < 2 || n2 < 2 || grid.axis1.size() != static_cast<std::size_t>(n1) ||
        grid.axis2.size() != static_cast<std::size_t>(n2)) {
        throw std::invalid_argument("schmidt_from_grid: malformed grid");
    }
    const auto w1 = trapezoid_weights(grid.axis1);
    const auto w2 = trapezoid_weights(grid.axis2);

    // Gram matrix of the quadrature-weighted kernel on the smaller side;
    // its eigenvalues are the squared singular values.
    const bool rows_small = n1 <= n2;
    const auto m = rows_small ? n1 : n2;
    Eigen::MatrixXd gram(m, m);

    if (grid.values.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::MatrixXd w = grid.values.real();
        for (Eigen::Index i = 0; i < n1; ++i) {
            const double si = std::sqrt(w1[static_cast<std::size_t>(i)]);
            w.row(i) *= si;
        }
        for (Eigen::Index j = 0; j < n2; ++j) {
            w.col(j) *= std::sqrt(w2[static_cast<std::size_t>(j)]);
        }
        if (rows_small)
            gram.noalias() = w * w.transpose();
        else
            gram.noalias() = w.transpose() * w;
    } else {
        Eigen::MatrixXcd w = grid.values;
        for (Eigen::Index i = 0; i < n1; ++i) w.row(i) *= std::sqrt(w1[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < n2; ++j) w.col(j) *= std::sqrt(w2[static_cast<std::size_t>(j)]);
        if (rows_small)
            gram = (w * w.adjoint()).real();
        else
            gram = (w.adjoint() * w).real();
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram, Eigen::EigenvaluesOnly);
    Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const double total = ev.sum();
    if (!(total > 0.0)) throw std::invalid_argument("schmidt_from_grid: zero total power");

    std::vector<double> lambda(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        lambda[static_cast<std::size_t>(i)] = ev(ev.size() - 1 - i) / total;  // descending
    }
    double sum_sq = 0.0;
    for (double l : lambda) sum_sq += l * l;

    SchmidtResult out;
    out.k = 1.0 / sum_sq;
    const double head = lambda.front();
    for (double l : lambda) {
        if (l < cutoff * head) break;
        out.spectrum.push_back(l);
    }
    return out;
}

double ratio_r(const WidthReport& single_width, const WidthReport& coincidence_width) {
    if (single_width.axis_units != coincidence_width.axis_units) {
        throw std::invalid_argument("ratio_r: width unit mismatch ('" +
                                    single_width.axis_units + "' vs '" +
                                    coincidence_width.axis_units + "')");
    }
    if (!(single_width.fwhm > 0.0 && coincidence_width.fwhm > 0.0)) {
        throw std::invalid_argument("ratio_r: widths must be positive");
    }
    return single_width.fwhm / coincidence_width.fwhm;
}

EprResult c_epr(double dk_width, double dx_width, WidthConvention convention) {
    if (!(dk_width > 0.0 && dx_width > 0.0)) {
        throw std::invalid_argument("c_epr: widths must be positive");
    }
    EprResult r;
    r.convention = convention;
    r.c_epr = 1.0 / (dk_width * dx_width);
    r.baseline = convention == WidthConvention::half_max ? 1.0 / (4.0 * ln2) : 2.0;
    r.ratio_to_baseline = r.c_epr / r.baseline;
    return r;
}

std::string entanglement_report_json(const EntanglementReport& report) {
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    std::ostringstream os;
    os << "{\n";
    os << "  \"r_k\": " << num(report.r_k) << ",\n";
    if (report.r_x)
        os << "  \"r_x\": " << num(*report.r_x) << ",\n";
    else
        os << "  \"r_x\": null,\n";
    os << "  \"c_epr_halfmax\": " << num(report.c_epr_halfmax) << ",\n";
    os << "  \"c_epr_ratio\": " << num(report.c_epr_ratio) << ",\n";
    os << "  \"schmidt_k\": " << num(report.schmidt_k) << ",\n";
    os << "  \"schmidt_convergence_delta\": " << num(report.schmidt_convergence_delta)
       << ",\n";
    os << "  \"schmidt_spectrum\": [";
    for (std::size_t i = 0; i < report.schmidt_spectrum.size(); ++i) {
        if (report.schmidt_spectrum[i] <= 1e-6) break;
        if (i) os << ", ";
        os << num(report.schmidt_spectrum[i]);
    }
    os << "]\n}\n";
    return os.str();
}

}  // namespace biphoton
