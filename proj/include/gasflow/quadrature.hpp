#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>

#include "gasflow/common.hpp"

namespace gasflow {

// Adaptive Gauss-Kronrod 7/15 quadrature; multidimensional integrals are
// iterated one-dimensional integrals over an axis-aligned box.

struct QuadResult {
    double value = 0;
    double error = 0;
    std::int64_t evals = 0;
    bool converged = true;
};

namespace gk_detail {
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& result, double& err,
                 std::int64_t& evals) {
    const double c = 0.5 * (a + b);
    const double hl = 0.5 * (b - a);
    double fc = f(c);
    double res_g = fc * wg[3];
    double res_k = fc * wgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = hl * xgk[static_cast<std::size_t>(j)];
        double f1 = f(c - x), f2 = f(c + x);
        res_k += wgk[static_cast<std::size_t>(j)] * (f1 + f2);
        if (j % 2 == 1) res_g += wg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
    }
    result = res_k * hl;
    err = std::fabs((res_k - res_g) * hl);
    evals += 15;
}
}  // namespace gk_detail

namespace quad_detail {
// The first two levels always refine: a lone GK15 panel can report a spuriously
// small error when the integrand's support falls between its nodes (e.g. a
// narrow bump with a zero at the panel centre on a wide truncated-tail box).
template <class F>
inline void adapt(const F& f, double a, double b, double tol, int depth, QuadResult& acc) {
    double v, e;
    gk_detail::gk15(f, a, b, v, e, acc.evals);
    if ((e <= tol && depth >= 2) || depth >= 48) {
        acc.value += v;
        acc.error += e;
        if (e > tol && depth >= 48) acc.converged = false;
        return;
    }
    double m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth + 1, acc);
    adapt(f, m, b, 0.5 * tol, depth + 1, acc);
}
}  // namespace quad_detail

inline QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10) {
    if (!(b > a)) throw ValidationError("integrate_1d: empty interval");
    QuadResult acc;
    quad_detail::adapt(f, a, b, tol, 0, acc);
    return acc;
}

inline QuadResult integrate_2d(const std::function<double(double, double)>& f, double ax,
                               double bx, double ay, double by, double tol = 1e-9) {
    QuadResult acc;
    bool inner_ok = true;
    std::int64_t inner_evals = 0;
    double inner_err = 0;
    // inner tolerance scaled by the outer width, floored so that very wide
    // (truncated-tail) boxes do not demand sub-machine-precision slices
    const double tol_inner = std::max(0.1 * tol / (bx - ax), 1e-12);
    auto outer = [&](double x) {
        QuadResult inner;
        quad_detail::adapt([&](double y) { return f(x, y); }, ay, by, tol_inner, 0, inner);
        inner_evals += inner.evals;
        inner_err = std::max(inner_err, inner.error);
        if (!inner.converged) inner_ok = false;
        return inner.value;
    };
    quad_detail::adapt(outer, ax, bx, tol, 0, acc);
    acc.evals = inner_evals;
    acc.converged = acc.converged && inner_ok;
    acc.error += inner_err * (bx - ax);
    return acc;
}

inline QuadResult integrate_3d(const std::function<double(double, double, double)>& f,
                               double ax, double bx, double ay, double by, double az,
                               double bz, double tol = 1e-8) {
    QuadResult acc;
    bool inner_ok = true;
    std::int64_t inner_evals = 0;
    const double tol_inner = std::max(0.1 * tol / (bx - ax), 1e-12);
    auto outer = [&](double x) {
        QuadResult plane = integrate_2d([&](double y, double z) { return f(x, y, z); }, ay,
                                        by, az, bz, tol_inner);
        inner_evals += plane.evals;
        if (!plane.converged) inner_ok = false;
        return plane.value;
    };
    quad_detail::adapt(outer, ax, bx, tol, 0, acc);
    acc.evals = inner_evals;
    acc.converged = acc.converged && inner_ok;
    return acc;
}

// Truncation radius for algebraically decaying integrands ~ scale*(1+r^2)^(-s):
// the tail of the radial integral beyond R is below `tail_tol`.
inline double truncation_radius(double decay_s, int dim, double tail_tol, double scale = 1.0) {
    if (2.0 * decay_s <= dim + 0.5)
        throw ValidationError("truncation_radius: integral does not converge");
    double R = 5.0;
    auto tail = [&](double r) {
        // surface factor ~ r^{dim-1}; bound (1+r^2)^{-s} <= r^{-2s}
        double expo = static_cast<double>(dim) - 2.0 * decay_s;
        double area = (dim == 2) ? 2.0 * M_PI : 4.0 * M_PI;
        return scale * area * std::pow(r, expo) / (2.0 * decay_s - dim);
    };
    while (tail(R) > tail_tol && R < 1e6) R *= 1.25;
    return R;
}

}  // namespace gasflow
