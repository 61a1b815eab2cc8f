#include "biphoton/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "biphoton/math.hpp"

namespace biphoton {

namespace {

struct SimpsonState {
    const std::function<double(double)>* f;
    double rel_tol;
    int max_depth;
    double scale;        // magnitude reference for the relative test
    double worst = 0.0;  // worst (relative) interval error seen at the cap
    bool capped = false;
};

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(SimpsonState& st, double a, double b, double fa, double fm, double fb,
             double whole, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = (*st.f)(lm);
    const double frm = (*st.f)(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double err = left + right - whole;
    const double tol = st.rel_tol * std::max(st.scale, std::abs(left + right));
    if (std::abs(err) <= 15.0 * tol || b - a < 1e-15 * st.scale) {
        return left + right + err / 15.0;
    }
    if (depth >= st.max_depth) {
        st.capped = true;
        st.worst = std::max(st.worst, std::abs(err) / std::max(st.scale, 1e-300));
        return left + right + err / 15.0;
    }
    return adapt(st, a, m, fa, flm, fm, left, depth + 1) +
           adapt(st, m, b, fm, frm, fb, right, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const std::vector<double>& breakpoints, double rel_tol,
                          int max_depth) {
    std::vector<double> knots{a, b};
    for (double x : breakpoints) {
        if (x > a && x < b) knots.push_back(x);
    }
    std::sort(knots.begin(), knots.end());

    // first pass for a magnitude scale
    double scale = 0.0;
    std::vector<double> coarse(knots.size() - 1);
    std::vector<std::array<double, 3>> fvals(knots.size() - 1);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double lo = knots[i], hi = knots[i + 1];
        const double flo = f(lo), fmid = f(0.5 * (lo + hi)), fhi = f(hi);
        fvals[i] = {flo, fmid, fhi};
        coarse[i] = simpson(flo, fmid, fhi, lo, hi);
        scale += std::abs(coarse[i]);
    }
    if (scale == 0.0) scale = 1e-300;

    SimpsonState st{&f, rel_tol, max_depth, scale};
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        total += adapt(st, knots[i], knots[i + 1], fvals[i][0], fvals[i][1],
                       fvals[i][2], coarse[i], 0);
    }
    if (st.capped && st.worst > rel_tol) {
        throw quadrature_error(
            "adaptive quadrature did not converge to the requested tolerance "
            "(achieved about " + std::to_string(st.worst) + ")",
            st.worst);
    }
    return total;
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double gl_x[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double gl_w[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

}  // namespace

std::complex<double> integrate_oscillatory(const std::function<double(double)>& env,
                                           double tmax, double chirp, double linear,
                                           int panel_cap) {
    // phase f(t) = chirp t^2 + linear t; max |f'| on [-tmax, tmax]
    const double grad = 2.0 * std::abs(chirp) * tmax + std::abs(linear);
    const double total_phase = grad * 2.0 * tmax;
    // ~1.5 rad of phase per panel keeps 16-point panels far beyond converged
    int panels = static_cast<int>(total_phase / 1.5) + 16;
    if (panels > panel_cap) {
        throw resolution_error(
            "oscillatory integrand needs " + std::to_string(panels) +
            " panels (cap " + std::to_string(panel_cap) +
            "); coarsen the requested grid or shrink its extent");
    }
    const double h = 2.0 * tmax / panels;
    std::complex<double> acc{0.0, 0.0};
    for (int p = 0; p < panels; ++p) {
        const double c = -tmax + (p + 0.5) * h;
        std::complex<double> panel{0.0, 0.0};
        for (int k = 0; k < 8; ++k) {
            for (double sgn : {-1.0, 1.0}) {
                const double t = c + sgn * 0.5 * h * gl_x[k];
                const double ph = (chirp * t + linear) * t;
                panel += gl_w[k] * env(t) * std::complex<double>(std::cos(ph), std::sin(ph));
            }
        }
        acc += panel * (0.5 * h);
    }
    return acc;
}

}  // namespace biphoton
