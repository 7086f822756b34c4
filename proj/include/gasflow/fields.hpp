#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gasflow/common.hpp"
#include "gasflow/geometry.hpp"
#include "gasflow/integrate.hpp"
#include "gasflow/linalg.hpp"

namespace gasflow {

// Scalar function of one variable with an optional exact derivative; falls
// back to 4th-order central differences when no derivative is supplied.
struct SmoothFn {
    std::function<double(double)> f;
    std::function<double(double)> df;

    double operator()(double x) const { return f(x); }

    double deriv(double x) const {
        if (df) return df(x);
        double h = 1e-4 * std::max(1.0, std::fabs(x));
        return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
    }

    static SmoothFn constant(double c) {
        return {[c](double) { return c; }, [](double) { return 0.0; }};
    }
    static SmoothFn linear(double k, double b) {
        return {[k, b](double x) { return k * x + b; }, [k](double) { return k; }};
    }
    static SmoothFn tanh_fn(double scale = 1.0) {
        return {[scale](double x) { return std::tanh(scale * x); },
                [scale](double x) { return scale / sqr(std::cosh(scale * x)); }};
    }
    // sum of amp*sin(freq*x + phase) terms
    static SmoothFn trig_poly(std::vector<std::array<double, 3>> terms) {
        auto val = [terms](double x) {
            double s = 0;
            for (const auto& t : terms) s += t[0] * std::sin(t[1] * x + t[2]);
            return s;
        };
        auto der = [terms](double x) {
            double s = 0;
            for (const auto& t : terms) s += t[0] * t[1] * std::cos(t[1] * x + t[2]);
            return s;
        };
        return {val, der};
    }
};

// A time-independent contravariant vector field on a chart.
struct FieldSpec {
    ChartMetric chart;
    std::function<Vec(const Vec&)> eval;
    std::function<Mat(const Vec&)> jacobian;  // partial derivatives; optional
    std::string family = "custom";
    std::optional<Box> field_domain;  // tighter than the chart domain if set

    void check_point(const Vec& x) const {
        chart.check_point(x);
        if (field_domain && !field_domain->contains(x))
            throw DomainError("field: point outside the field's validity region");
    }
};

inline Mat field_jacobian(const FieldSpec& field, const Vec& x) {
    if (field.jacobian) return field.jacobian(x);
    const int n = field.chart.dim;
    Mat J(n);
    for (int j = 0; j < n; ++j) {
        double h = 1e-4 * std::max(1.0, std::fabs(x[static_cast<std::size_t>(j)]));
        Vec xp2 = x, xp1 = x, xm1 = x, xm2 = x;
        xp2[static_cast<std::size_t>(j)] += 2 * h;
        xp1[static_cast<std::size_t>(j)] += h;
        xm1[static_cast<std::size_t>(j)] -= h;
        xm2[static_cast<std::size_t>(j)] -= 2 * h;
        Vec fp2 = field.eval(xp2), fp1 = field.eval(xp1), fm1 = field.eval(xm1),
            fm2 = field.eval(xm2);
        for (int i = 0; i < n; ++i)
            J(i, j) = (-fp2[static_cast<std::size_t>(i)] + 8 * fp1[static_cast<std::size_t>(i)] -
                       8 * fm1[static_cast<std::size_t>(i)] + fm2[static_cast<std::size_t>(i)]) /
                      (12 * h);
    }
    return J;
}

// nabla_j Lambda^i = d Lambda^i / dx^j + Gamma^i_{jk} Lambda^k  (row i, col j)
inline Mat covariant_derivative(const ChartMetric& chart, const FieldSpec& field,
                                const Vec& x) {
    field.check_point(x);
    const int n = chart.dim;
    Mat B = field_jacobian(field, x);
    if (chart.kind != ChartKind::euclidean) {
        Christoffel G = christoffel(chart, x);
        Vec lam = field.eval(x);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int k = 0; k < n; ++k) s += G.at(i, j, k) * lam[static_cast<std::size_t>(k)];
                B(i, j) += s;
            }
    }
    return B;
}

inline double divergence(const ChartMetric& chart, const FieldSpec& field, const Vec& x) {
    return trace(covariant_derivative(chart, field, x));
}

// deviation of the covariant derivative from the best multiple of the identity
struct A1Report {
    Mat residual;
    double c = 0;
    double max_abs = 0;
};

inline A1Report a1_residual(const ChartMetric& chart, const FieldSpec& field, const Vec& x) {
    Mat B = covariant_derivative(chart, field, x);
    A1Report rep;
    rep.c = trace(B) / chart.dim;
    rep.residual = B;
    for (int i = 0; i < chart.dim; ++i) rep.residual(i, i) -= rep.c;
    for (int i = 0; i < chart.dim; ++i)
        for (int j = 0; j < chart.dim; ++j)
            rep.max_abs = std::max(rep.max_abs, std::fabs(rep.residual(i, j)));
    return rep;
}

// Lambda^i - Lambda^j nabla_j Lambda^i
inline Vec a2_residual(const ChartMetric& chart, const FieldSpec& field, const Vec& x) {
    Mat B = covariant_derivative(chart, field, x);
    Vec lam = field.eval(x);
    Vec r(static_cast<std::size_t>(chart.dim));
    for (int i = 0; i < chart.dim; ++i) {
        double s = 0;
        for (int j = 0; j < chart.dim; ++j) s += lam[static_cast<std::size_t>(j)] * B(i, j);
        r[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i)] - s;
    }
    return r;
}

struct JmReport {
    int m = 0;
    double value = 0;
    double divergence = 0;
    // residuals of the divergence/J_m identities that the constant-divergence
    // theory predicts: "quadratic", "cubic" (dim >= 3), "alternating"
    std::map<std::string, double> identity_residuals;
};

namespace jm_detail {
// sum of principal m x m minors of B, each minor expanded as an explicit
// signed permutation sum (the subset/permutation form of the representation)
inline double principal_minor_sum(const Mat& B, int m) {
    const int n = B.n;
    std::vector<int> subset(static_cast<std::size_t>(m));
    std::iota(subset.begin(), subset.end(), 0);
    double total = 0;
    auto minor_det = [&](const std::vector<int>& S) {
        std::vector<int> perm = S;
        std::sort(perm.begin(), perm.end());
        double acc = 0;
        do {
            // parity by inversion count relative to the sorted subset
            int inv = 0;
            for (std::size_t a = 0; a < perm.size(); ++a)
                for (std::size_t b = a + 1; b < perm.size(); ++b)
                    if (perm[a] > perm[b]) ++inv;
            double prod = 1;
            for (std::size_t a = 0; a < S.size(); ++a)
                prod *= B(S[a], perm[a]);
            acc += ((inv % 2) ? -1.0 : 1.0) * prod;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return acc;
    };
    // iterate subsets of size m
    while (true) {
        total += minor_det(subset);
        int i = m - 1;
        while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - m + i) --i;
        if (i < 0) break;
        ++subset[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < m; ++j)
            subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    return total;
}
}  // namespace jm_detail

inline JmReport jm(const ChartMetric& chart, const FieldSpec& field, const Vec& x, int m) {
    const int n = chart.dim;
    if (m < 2 || m > n) throw ValidationError("jm: order must satisfy 2 <= m <= dim");
    Mat B = covariant_derivative(chart, field, x);
    JmReport rep;
    rep.m = m;
    rep.value = jm_detail::principal_minor_sum(B, m);
    double D = trace(B);
    rep.divergence = D;
    double J2 = jm_detail::principal_minor_sum(B, 2);
    rep.identity_residuals["quadratic"] = D - (D * D - 2 * J2);
    if (n >= 3) {
        double J3 = jm_detail::principal_minor_sum(B, 3);
        rep.identity_residuals["cubic"] = D - (D * D * D + 3 * J3 - 3 * D * J2);
    }
    double alt = 1.0 - D;
    double sign = 1.0;
    for (int k = 2; k <= n; ++k) {
        alt += sign * jm_detail::principal_minor_sum(B, k);
        sign = -sign;
    }
    rep.identity_residuals["alternating"] = alt;
    return rep;
}

// --- admissible constant divergencies -------------------------------------

namespace poly_detail {
using Poly = std::vector<double>;  // coefficients, ascending powers

inline Poly mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}
inline Poly add(Poly a, const Poly& b, double s = 1.0) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += s * b[i];
    return a;
}
inline Poly scale(Poly a, double s) {
    for (double& v : a) v *= s;
    return a;
}
inline double eval(const Poly& p, double x) {
    double v = 0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}
}  // namespace poly_detail

// For a constant-divergence field satisfying the admissibility identities, all
// power sums of the gradient's eigenvalues equal D; eliminating the subset
// sums J_2..J_n leaves a degree-n polynomial in D whose real roots are the
// admissible divergencies.
inline std::vector<double> divergence_roots(int n) {
    if (n < 2 || n > 4) throw ValidationError("divergence_roots: n must be 2, 3, or 4");
    using namespace poly_detail;
    const Poly D{0.0, 1.0};
    std::vector<Poly> J(static_cast<std::size_t>(n) + 1);
    J[0] = {1.0};
    J[1] = D;
    // Newton recursion with every power sum equal to D:
    //   D = sum_{i=1..m-1} (-1)^{i-1} J_i * D + (-1)^{m-1} m J_m
    for (int m = 2; m <= n; ++m) {
        Poly rhs = D;  // left side moved over
        double sign = 1.0;
        for (int i = 1; i <= m - 1; ++i) {
            rhs = add(rhs, mul(J[static_cast<std::size_t>(i)], D), -sign);
            sign = -sign;
        }
        J[static_cast<std::size_t>(m)] = scale(rhs, ((m % 2) ? 1.0 : -1.0) / m);
    }
    // det(I - gradient) = 0: alternating sum of the subset sums vanishes
    Poly P{1.0};
    double sign = -1.0;
    for (int m = 1; m <= n; ++m) {
        P = add(P, J[static_cast<std::size_t>(m)], sign);
        sign = -sign;
    }
    // bracketed bisection on [0, n+1]
    std::vector<double> roots;
    const double step = 1.0 / 16.0;
    double a = 0.0;
    double fa = eval(P, a);
    for (double b = step; b <= n + 1 + 1e-12; b += step) {
        double fb = eval(P, b);
        if (fa == 0.0) roots.push_back(a);
        if (fa * fb < 0) {
            double lo = a, hi = b;
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                double fm = eval(P, mid);
                if (fa * fm <= 0)
                    hi = mid;
                else
                    lo = mid;
                if (hi - lo < 1e-15) break;
            }
            roots.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Hess(Phi) - Laplace(Phi) + 1 on a 2D chart; zero is necessary for the
// gradient of Phi to be an admissible stationary profile.
inline double potential_condition(const ChartMetric& chart,
                                  const std::function<double(const Vec&)>& phi,
                                  const Vec& x) {
    if (chart.dim != 2) throw ValidationError("potential_condition: dim must be 2");
    chart.check_point(x);
    auto h_for = [&](int i) {
        return 1e-4 * std::max(1.0, std::fabs(x[static_cast<std::size_t>(i)]));
    };
    auto shifted = [&](int i, double di, int j, double dj) {
        Vec y = x;
        y[static_cast<std::size_t>(i)] += di;
        y[static_cast<std::size_t>(j)] += dj;
        return phi(y);
    };
    double grad[2], hess[2][2];
    for (int i = 0; i < 2; ++i) {
        double h = h_for(i);
        grad[i] = (shifted(i, h, i, 0) - shifted(i, -h, i, 0)) / (2 * h);
        hess[i][i] = (shifted(i, h, i, 0) - 2 * phi(x) + shifted(i, -h, i, 0)) / (h * h);
    }
    {
        double h0 = h_for(0), h1 = h_for(1);
        hess[0][1] = hess[1][0] =
            (shifted(0, h0, 1, h1) - shifted(0, h0, 1, -h1) - shifted(0, -h0, 1, h1) +
             shifted(0, -h0, 1, -h1)) /
            (4 * h0 * h1);
    }
    Christoffel G = christoffel(chart, x);
    Mat T(2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double v = hess[i][j];
            for (int k = 0; k < 2; ++k) v -= G.at(k, i, j) * grad[k];
            T(i, j) = v;
        }
    Mat mixed = chart.metric_inverse(x) * T;
    return det(mixed) - trace(mixed) + 1.0;
}

// --- plane families --------------------------------------------------------

// constant-datum family: Lambda1 = x1 + phi(x2 - K x1), Lambda2 = K * Lambda1
inline FieldSpec plane_shear_field(double K, SmoothFn phi) {
    FieldSpec fs;
    fs.chart = ChartMetric::euclidean(2);
    fs.family = "plane-shear";
    fs.eval = [K, phi](const Vec& x) {
        double l1 = x[0] + phi(x[1] - K * x[0]);
        return Vec{l1, K * l1};
    };
    fs.jacobian = [K, phi](const Vec& x) {
        double dp = phi.deriv(x[1] - K * x[0]);
        Mat J(2);
        J(0, 0) = 1 - K * dp;
        J(0, 1) = dp;
        J(1, 0) = K * J(0, 0);
        J(1, 1) = K * J(0, 1);
        return J;
    };
    return fs;
}

struct CharSolveResult {
    double z = 0;
    double lambda1 = 0;
    double lambda2 = 0;
};

namespace char_detail {
// Safeguarded Newton for z = F(x2 - z*x1) with bisection fallback.
inline double solve_z(const SmoothFn& F, double x1, double x2) {
    auto g = [&](double z) { return z - F(x2 - z * x1); };
    auto dg = [&](double z) { return 1.0 + x1 * F.deriv(x2 - z * x1); };
    double z = F(x2);
    double lo = z, hi = z;
    bool bracketed = false;
    double flo = 0, fhi = 0;
    // expand a bracket around the initial guess
    double span = 0.5 * (1.0 + std::fabs(z));
    for (int k = 0; k < 60 && !bracketed; ++k) {
        lo = z - span;
        hi = z + span;
        flo = g(lo);
        fhi = g(hi);
        if (flo == 0) return lo;
        if (fhi == 0) return hi;
        if (flo * fhi < 0)
            bracketed = true;
        else
            span *= 1.6;
    }
    if (!bracketed) {
        // estimate where characteristics first cross: x1* = min(-1/F') over F'<0
        double x1c = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 400; ++i) {
            double xi = x2 - 10.0 + 20.0 * i / 400.0;
            double fp = F.deriv(xi);
            if (fp < 0) x1c = std::min(x1c, -1.0 / fp);
        }
        throw ShockRegionError(x1c, "characteristics: implicit equation has no bracketed root");
    }
    for (int it = 0; it < 100; ++it) {
        double gz = g(z);
        if (std::fabs(gz) < 1e-14 * (1.0 + std::fabs(z))) return z;
        double d = dg(z);
        double znew = (d != 0.0) ? z - gz / d : 0.5 * (lo + hi);
        if (!(znew > lo && znew < hi)) znew = 0.5 * (lo + hi);
        double gn = g(znew);
        if (flo * gn <= 0) {
            hi = znew;
            fhi = gn;
        } else {
            lo = znew;
            flo = gn;
        }
        z = znew;
        if (hi - lo < 1e-15 * (1.0 + std::fabs(z))) return z;
    }
    double x1c = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 400; ++i) {
        double xi = x2 - 10.0 + 20.0 * i / 400.0;
        double fp = F.deriv(xi);
        if (fp < 0) x1c = std::min(x1c, -1.0 / fp);
    }
    throw ShockRegionError(x1c, "characteristics: Newton iteration did not converge");
}
}  // namespace char_detail

// Solve the implicit slope relation and carry the datum along the straight
// characteristic from x1 = 0. Without a source the first component is simply
// x1 + datum(xi); with a source Xi(x1, x2, |Lambda|) the transport ODE is
// integrated numerically along the characteristic.
inline CharSolveResult characteristics_solve(
    const SmoothFn& F, const Vec& x, const SmoothFn& datum = SmoothFn::constant(0.0),
    const std::function<double(double, double, double)>* source = nullptr) {
    CharSolveResult out;
    out.z = char_detail::solve_z(F, x[0], x[1]);
    const double xi = x[1] - out.z * x[0];
    if (!source) {
        out.lambda1 = x[0] + datum(xi);
    } else {
        auto rhs = [&](double s, const Vec& y, Vec& dy) {
            double l1 = y[0];
            double lmag = std::fabs(l1) * std::sqrt(1.0 + out.z * out.z);
            dy[0] = (*source)(s, xi + out.z * s, lmag);
        };
        if (x[0] == 0.0) {
            out.lambda1 = datum(xi);
        } else {
            double sgn = (x[0] > 0) ? 1.0 : -1.0;
            OdeOptions opt;
            opt.atol = opt.rtol = 1e-12;
            opt.store_dense = false;
            auto fwd = [&](double s, const Vec& y, Vec& dy) {
                Vec tmp(1);
                rhs(sgn * s, y, tmp);
                dy[0] = sgn * tmp[0];
            };
            OdeResult r = integrate_ode(fwd, Vec{datum(xi)}, 0.0, std::fabs(x[0]), opt);
            if (r.event) throw NumericalEvent(r.event->kind, r.event->t,
                                              "characteristics: transport integration stopped");
            out.lambda1 = r.states.back()[0];
        }
    }
    out.lambda2 = out.z * out.lambda1;
    return out;
}

// Field built from the implicit characteristic construction.
inline FieldSpec implicit_characteristic_field(SmoothFn F,
                                               SmoothFn datum = SmoothFn::constant(0.0)) {
    FieldSpec fs;
    fs.chart = ChartMetric::euclidean(2);
    fs.family = "implicit-characteristic";
    fs.eval = [F, datum](const Vec& x) {
        CharSolveResult r = characteristics_solve(F, x, datum);
        return Vec{r.lambda1, r.lambda2};
    };
    fs.jacobian = [F, datum](const Vec& x) {
        CharSolveResult r = characteristics_solve(F, x, datum);
        double xi = x[1] - r.z * x[0];
        double fp = F.deriv(xi);
        double den = 1.0 + x[0] * fp;
        double dz_dx1 = -r.z * fp / den;
        double dz_dx2 = fp / den;
        double dxi_dx1 = -r.z / den;
        double dxi_dx2 = 1.0 / den;
        double dp = datum.deriv(xi);
        Mat J(2);
        J(0, 0) = 1.0 + dp * dxi_dx1;
        J(0, 1) = dp * dxi_dx2;
        J(1, 0) = dz_dx1 * r.lambda1 + r.z * J(0, 0);
        J(1, 1) = dz_dx2 * r.lambda1 + r.z * J(0, 1);
        return J;
    };
    return fs;
}

// --- sphere strip family ----------------------------------------------------

namespace sphere_detail {
struct SphereParts {
    double z = 0, u = 0, v = 0;
};

inline SphereParts eval_plus(double C, double r, const SmoothFn& psi1, double phi,
                             double theta) {
    double s = std::sin(theta), c = std::cos(theta);
    double rad = C * s * s - 1.0;
    if (rad < -1e-12) throw DomainError("sphere field: outside the admissible strip");
    double z = std::sqrt(std::max(rad, 0.0));
    double W = -(r / std::sqrt(C)) * std::asin(std::clamp(
                   std::sqrt(C) * c / std::sqrt(C - 1.0), -1.0, 1.0));
    // characteristic phase: R'(theta) = 1/(sin(theta) z), using
    // z^2 + cos^2(theta) = (C - 1) sin^2(theta)
    double R = -std::atan2(c, z);
    double u = (W + psi1(phi - R)) / s;
    double v = z * u;
    return {z, u, v};
}
}  // namespace sphere_detail

// Admissible field on the spherical strip |sin theta| >= 1/sqrt(C); physical
// components converted to contravariant ones. The minus branch is the mirror
// image phi -> -phi of the plus branch.
inline FieldSpec sphere_field(double C, SmoothFn psi1, int branch, double radius = 1.0) {
    if (!(C > 1.0)) throw ValidationError("sphere_field: requires C > 1");
    if (branch != 1 && branch != -1) throw ValidationError("sphere_field: branch must be +-1");
    FieldSpec fs;
    fs.chart = ChartMetric::sphere(radius);
    fs.family = "sphere-strip";
    double theta_min = std::asin(1.0 / std::sqrt(C));
    Box dom;
    dom.lo = {-M_PI, theta_min};
    dom.hi = {M_PI, M_PI - theta_min};
    fs.field_domain = dom;
    double r = radius;
    fs.eval = [C, psi1, branch, r](const Vec& x) {
        double phi = x[0], theta = x[1];
        sphere_detail::SphereParts p =
            (branch == 1) ? sphere_detail::eval_plus(C, r, psi1, phi, theta)
                          : sphere_detail::eval_plus(C, r, psi1, -phi, theta);
        double u = (branch == 1) ? p.u : -p.u;
        double v = p.v;
        double s = std::sin(theta);
        return Vec{u / (r * s), v / r};
    };
    return fs;
}

// --- rotating-frame ansatz ---------------------------------------------------

// (e U)^i = e^i_j U^j with e_{12} = +sqrt(det g)
inline Vec perp(const ChartMetric& chart, const Vec& x, const Vec& u) {
    double sg = std::sqrt(chart.metric_det(x));
    Mat ginv = chart.metric_inverse(x);
    return Vec{sg * ginv(0, 0) * u[1], -sg * ginv(1, 1) * u[0]};
}

struct AnsatzResiduals {
    double r1 = 0, r2 = 0, r3 = 0;
};

// Residuals of the stationary/rotating pair of compatibility equations for
// fields Lambda (advected) and Xi (stationary) in a frame rotating at rate l.
inline AnsatzResiduals coriolis_ansatz_residual(const ChartMetric& chart,
                                                const FieldSpec& lambda,
                                                const FieldSpec& xi,
                                                const std::function<double(const Vec&)>& l,
                                                const std::vector<Vec>& samples) {
    if (chart.dim != 2) throw ValidationError("coriolis_ansatz_residual: dim must be 2");
    AnsatzResiduals out;
    for (const Vec& x : samples) {
        Vec rA2 = a2_residual(chart, lambda, x);
        for (double v : rA2) out.r1 = std::max(out.r1, std::fabs(v));

        Mat Bx = covariant_derivative(chart, xi, x);
        Mat Bl = covariant_derivative(chart, lambda, x);
        Vec xv = xi.eval(x), lv = lambda.eval(x);
        double lc = l(x);
        Vec ex = perp(chart, x, xv), el = perp(chart, x, lv);
        for (int i = 0; i < 2; ++i) {
            double xi_adv = 0, cross = 0;
            for (int j = 0; j < 2; ++j) {
                xi_adv += xv[static_cast<std::size_t>(j)] * Bx(i, j);
                cross += xv[static_cast<std::size_t>(j)] * Bl(i, j) +
                         lv[static_cast<std::size_t>(j)] * Bx(i, j);
            }
            out.r2 = std::max(out.r2, std::fabs(xi_adv - lc * ex[static_cast<std::size_t>(i)]));
            out.r3 = std::max(out.r3, std::fabs(cross - lc * el[static_cast<std::size_t>(i)]));
        }
    }
    return out;
}

// --- several admissible fields with coupled amplitudes ----------------------

struct MultiFieldResult {
    std::vector<double> times;
    std::vector<Vec> states;
    bool blew_up = false;
    double blow_up_time = 0;
};

// a_k' = -a_k^2 - beta_k a_k sum_{l != k} a_l
inline MultiFieldResult multi_field_coeffs(const std::vector<double>& beta, const Vec& a0,
                                           double t_end, double tol) {
    if (beta.size() != a0.size() && !(beta.empty() && a0.size() == 1))
        throw ValidationError("multi_field_coeffs: beta/a0 size mismatch");
    if (!(tol > 0)) throw ValidationError("multi_field_coeffs: tol must be positive");
    const std::size_t n = a0.size();
    auto rhs = [&](double, const Vec& a, Vec& da) {
        double total = 0;
        for (double v : a) total += v;
        for (std::size_t k = 0; k < n; ++k) {
            double bk = beta.empty() ? 0.0 : beta[k];
            da[k] = -a[k] * a[k] - bk * a[k] * (total - a[k]);
        }
    };
    OdeOptions opt;
    opt.atol = opt.rtol = tol;
    opt.blowup_norm = 1.0 / tol;
    OdeResult r = integrate_ode(rhs, a0, 0.0, t_end, opt);
    MultiFieldResult out;
    out.times = r.times;
    out.states = r.states;
    if (r.event && (r.event->kind == "blow_up" || r.event->kind == "stiffness")) {
        out.blew_up = true;
        out.blow_up_time = r.event->t;
    }
    return out;
}

}  // namespace gasflow
