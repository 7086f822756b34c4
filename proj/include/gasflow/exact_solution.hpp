#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gasflow/common.hpp"
#include "gasflow/integrate.hpp"
#include "gasflow/linalg.hpp"
#include "gasflow/quadrature.hpp"

namespace gasflow {

// ---- initial data ----------------------------------------------------------

// closed form of int |x|^{2m} (1+|x|^2)^{-s} dx over R^n
inline double algebraic_moment(int n, double s, int m) {
    double nn = static_cast<double>(n), mm = static_cast<double>(m);
    if (!(s - mm - nn / 2 > 0)) throw ValidationError("algebraic_moment: divergent integral");
    double lg = 0.5 * nn * std::log(M_PI) + std::lgamma(mm + nn / 2) +
                std::lgamma(s - mm - nn / 2) - std::lgamma(nn / 2) - std::lgamma(s);
    return std::exp(lg);
}

struct InitialData {
    std::string family = "custom";
    int dim = 2;
    double a = 4, gamma = 1.4, G1_0 = 1, Ep0 = 1;
    double rho_scale = 1;    // multiplier of (1+|r|^2)^{-(a+1)}
    double decay_s_rho = 5;  // rho0 ~ (1+r^2)^{-decay_s_rho}
    double decay_s_p = 4;
    std::function<double(const Vec&)> rho0, p0;
    std::function<Vec(const Vec&)> grad_p0;  // optional exact gradient

    // normalized entropy profile, zero at the origin
    double S0(const Vec& x) const {
        double r2 = 0;
        for (double v : x) r2 += v * v;
        if (family == "algebraic") return (a * (gamma - 1) + gamma) * std::log1p(r2);
        double num = p0(x), den = rho0(x);
        double num0 = p0(Vec(x.size(), 0.0)), den0 = rho0(Vec(x.size(), 0.0));
        return std::log(num / std::pow(den, gamma)) -
               std::log(num0 / std::pow(den0, gamma));
    }

    double mass() const {
        return rho_scale * algebraic_moment(dim, a + 1, 0);
    }
    double second_moment_half() const {  // G(0) = (1/2) int rho0 |x|^2
        return 0.5 * rho_scale * algebraic_moment(dim, a + 1, 1);
    }
    double potential_energy() const {  // from p0
        return algebraic_moment(dim, a, 0) / (gamma - 1);
    }
};

// The Ep0 for which the algebraic data closes its own moment relations:
// G(0) recomputed from rho0 equals 1/G1_0 for every G1_0.
inline double matched_ep0(double a, double gamma, int dim = 2) {
    return a * algebraic_moment(dim, a + 1, 1) / (gamma - 1);
}

inline InitialData algebraic_initial_data(double a, double gamma, double G1_0, double Ep0,
                                      int dim = 2) {
    if (!(a > 3)) throw ValidationError("algebraic_initial_data: requires a > 3");
    if (!(gamma > 1) || !(G1_0 > 0) || !(Ep0 > 0))
        throw ValidationError("algebraic_initial_data: bad parameters");
    InitialData d;
    d.family = "algebraic";
    d.dim = dim;
    d.a = a;
    d.gamma = gamma;
    d.G1_0 = G1_0;
    d.Ep0 = Ep0;
    d.rho_scale = 2 * a / ((gamma - 1) * G1_0 * Ep0);
    d.decay_s_rho = a + 1;
    d.decay_s_p = a;
    double c = d.rho_scale;
    d.p0 = [a](const Vec& x) {
        double r2 = 0;
        for (double v : x) r2 += v * v;
        return std::pow(1.0 + r2, -a);
    };
    d.rho0 = [a, c](const Vec& x) {
        double r2 = 0;
        for (double v : x) r2 += v * v;
        return c * std::pow(1.0 + r2, -(a + 1.0));
    };
    d.grad_p0 = [a](const Vec& x) {
        double r2 = 0;
        for (double v : x) r2 += v * v;
        double f = -2.0 * a * std::pow(1.0 + r2, -(a + 1.0));
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = f * x[i];
        return g;
    };
    return d;
}

inline Vec grad_p0_of(const InitialData& d, const Vec& x) {
    if (d.grad_p0) return d.grad_p0(x);
    Vec g(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        double h = 1e-4 * std::max(1.0, std::fabs(x[j]));
        Vec xp2 = x, xp1 = x, xm1 = x, xm2 = x;
        xp2[j] += 2 * h;
        xp1[j] += h;
        xm1[j] -= h;
        xm2[j] -= 2 * h;
        g[j] = (-d.p0(xp2) + 8 * d.p0(xp1) - 8 * d.p0(xm1) + d.p0(xm2)) / (12 * h);
    }
    return g;
}

// ---- flow-map transport ----------------------------------------------------

struct FundamentalMatrix {
    Mat X;
    double det = 1;
    std::optional<Mat> inverse;
};

inline FundamentalMatrix fundamental_matrix(const std::function<Mat(double)>& A, int dim,
                                            double t, double tol = 1e-11,
                                            bool want_inverse = false) {
    FundamentalMatrix out;
    if (t == 0.0) {
        out.X = Mat::identity(dim);
        out.det = 1;
        if (want_inverse) out.inverse = Mat::identity(dim);
        return out;
    }
    if (t < 0) throw ValidationError("fundamental_matrix: t must be nonnegative");
    const int n2 = dim * dim;
    // state: X, Y (= X^{-1}), q = int tr A
    Vec y0(static_cast<std::size_t>(2 * n2 + 1), 0.0);
    for (int i = 0; i < dim; ++i) {
        y0[static_cast<std::size_t>(i * dim + i)] = 1;
        y0[static_cast<std::size_t>(n2 + i * dim + i)] = 1;
    }
    auto rhs = [&](double tau, const Vec& y, Vec& dy) {
        Mat At = A(tau);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double sx = 0, sy = 0;
                for (int k = 0; k < dim; ++k) {
                    sx += At(i, k) * y[static_cast<std::size_t>(k * dim + j)];
                    sy += y[static_cast<std::size_t>(n2 + i * dim + k)] * At(k, j);
                }
                dy[static_cast<std::size_t>(i * dim + j)] = sx;
                dy[static_cast<std::size_t>(n2 + i * dim + j)] = -sy;
            }
        dy[static_cast<std::size_t>(2 * n2)] = trace(At);
    };
    OdeOptions opt;
    opt.atol = opt.rtol = tol;
    opt.store_dense = false;
    OdeResult r = integrate_ode(rhs, y0, 0.0, t, opt);
    if (r.event)
        throw NumericalEvent(r.event->kind, r.event->t, "fundamental_matrix: integration stopped");
    const Vec& yf = r.states.back();
    out.X = Mat(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out.X(i, j) = yf[static_cast<std::size_t>(i * dim + j)];
    out.det = det(out.X);
    if (std::fabs(out.det) < 1e-12)
        throw NumericalEvent("degenerate_flow", t, "fundamental_matrix: flow map degenerate");
    if (want_inverse) {
        Mat Y(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                Y(i, j) = yf[static_cast<std::size_t>(n2 + i * dim + j)];
        out.inverse = Y;
    }
    return out;
}

// Exact gas state carried along the linear-profile flow: the initial density
// and pressure are transported by the flow map of V = A(t)x + b(t).
struct GasSolution {
    int dim = 2;
    double gamma = 1.4;
    std::function<Mat(double)> A;
    std::function<Vec(double)> b;
    std::function<double(const Vec&)> rho0, p0;
    double t_max = 0;
    OdeResult transport;  // [X (n^2), Y (n^2), shift (n), q (1)] with dense output

    struct Frame {
        Mat M, Minv;
        Vec shift;
        double q = 0;  // int_0^t tr A
    };

    Frame frame(double t) const {
        if (t < -1e-12 || t > t_max + 1e-9)
            throw ValidationError("gas solution: time outside assembled span");
        Vec y = transport.eval(std::max(t, 0.0));
        const int n2 = dim * dim;
        Frame f;
        f.M = Mat(dim);
        f.Minv = Mat(dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                f.M(i, j) = y[static_cast<std::size_t>(i * dim + j)];
                f.Minv(i, j) = y[static_cast<std::size_t>(n2 + i * dim + j)];
            }
        f.shift.assign(static_cast<std::size_t>(dim), 0.0);
        for (int i = 0; i < dim; ++i) f.shift[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(2 * n2 + i)];
        f.q = y[static_cast<std::size_t>(2 * n2 + dim)];
        return f;
    }

    Vec pull_back(const Frame& f, const Vec& x) const {
        Vec u = mat_vec(f.Minv, x);
        for (int i = 0; i < dim; ++i) u[static_cast<std::size_t>(i)] -= f.shift[static_cast<std::size_t>(i)];
        return u;
    }

    double rho(double t, const Vec& x) const {
        Frame f = frame(t);
        return std::exp(-f.q) * rho0(pull_back(f, x));
    }
    double p(double t, const Vec& x) const {
        Frame f = frame(t);
        return std::exp(-gamma * f.q) * p0(pull_back(f, x));
    }
    // entropy ln(p / rho^gamma); NaN sentinel where the density vanishes
    double S(double t, const Vec& x) const {
        double r = rho(t, x);
        if (!(r > 0)) return std::numeric_limits<double>::quiet_NaN();
        return std::log(p(t, x)) - gamma * std::log(r);
    }
    Vec V(double t, const Vec& x) const {
        Vec v = mat_vec(A(t), x);
        Vec bt = b(t);
        for (int i = 0; i < dim; ++i) v[static_cast<std::size_t>(i)] += bt[static_cast<std::size_t>(i)];
        return v;
    }
};

inline GasSolution assemble(int dim, std::function<Mat(double)> A,
                            std::function<Vec(double)> b,
                            std::function<double(const Vec&)> rho0,
                            std::function<double(const Vec&)> p0, double gamma,
                            double t_max, double tol = 1e-11) {
    if (!(t_max > 0)) throw ValidationError("assemble: t_max must be positive");
    GasSolution sol;
    sol.dim = dim;
    sol.gamma = gamma;
    sol.A = std::move(A);
    sol.b = std::move(b);
    sol.rho0 = std::move(rho0);
    sol.p0 = std::move(p0);
    sol.t_max = t_max;
    const int n2 = dim * dim;
    Vec y0(static_cast<std::size_t>(2 * n2 + dim + 1), 0.0);
    for (int i = 0; i < dim; ++i) {
        y0[static_cast<std::size_t>(i * dim + i)] = 1;
        y0[static_cast<std::size_t>(n2 + i * dim + i)] = 1;
    }
    auto rhs = [dim, n2, &sol](double tau, const Vec& y, Vec& dy) {
        Mat At = sol.A(tau);
        Vec bt = sol.b(tau);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double sx = 0, sy = 0;
                for (int k = 0; k < dim; ++k) {
                    sx += At(i, k) * y[static_cast<std::size_t>(k * dim + j)];
                    sy += y[static_cast<std::size_t>(n2 + i * dim + k)] * At(k, j);
                }
                dy[static_cast<std::size_t>(i * dim + j)] = sx;
                dy[static_cast<std::size_t>(n2 + i * dim + j)] = -sy;
            }
        // shift' = M^{-1} b
        for (int i = 0; i < dim; ++i) {
            double s = 0;
            for (int k = 0; k < dim; ++k)
                s += y[static_cast<std::size_t>(n2 + i * dim + k)] * bt[static_cast<std::size_t>(k)];
            dy[static_cast<std::size_t>(2 * n2 + i)] = s;
        }
        dy[static_cast<std::size_t>(2 * n2 + dim)] = trace(At);
    };
    OdeOptions opt;
    opt.atol = opt.rtol = tol;
    OdeResult r = integrate_ode(rhs, y0, 0.0, t_max, opt);
    if (r.event)
        throw NumericalEvent(r.event->kind, r.event->t, "assemble: transport integration stopped");
    sol.transport = std::move(r);
    return sol;
}

// ---- compatibility reports -------------------------------------------------

struct CompatReport {
    double max_residual = 0;
    int excluded = 0;  // grid points with vanishing density
    // affine mode: fitted gradient relation grad p0 / rho0 = C x + c0
    Mat C;
    Vec c0;
    double phi = 0;  // forced mode: fitted scalar
};

enum class CompatMode { radial, affine, forced };

inline CompatReport compat_residual(const InitialData& data, CompatMode mode,
                                    const std::vector<Vec>& grid,
                                    const std::function<Vec(const Vec&)>* lambda = nullptr,
                                    const std::function<Vec(const Vec&)>* forcing = nullptr) {
    CompatReport rep;
    const int n = data.dim;
    std::vector<Vec> pts;
    std::vector<Vec> gradients;  // grad p0 / rho0
    for (const Vec& x : grid) {
        double r = data.rho0(x);
        if (!(r > 0)) {
            ++rep.excluded;
            continue;
        }
        pts.push_back(x);
        Vec gp = grad_p0_of(data, x);
        for (double& v : gp) v /= r;
        gradients.push_back(std::move(gp));
    }
    switch (mode) {
        case CompatMode::radial: {
            double kcoef = (data.gamma - 1) * data.G1_0 * data.Ep0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (int c = 0; c < n; ++c)
                    rep.max_residual = std::max(
                        rep.max_residual,
                        std::fabs(gradients[i][static_cast<std::size_t>(c)] +
                                  kcoef * pts[i][static_cast<std::size_t>(c)]));
            break;
        }
        case CompatMode::affine: {
            // unknowns: C (n*n) then c0 (n)
            std::vector<Vec> rows;
            Vec rhs;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (int c = 0; c < n; ++c) {
                    Vec row(static_cast<std::size_t>(n * n + n), 0.0);
                    for (int j = 0; j < n; ++j)
                        row[static_cast<std::size_t>(c * n + j)] = pts[i][static_cast<std::size_t>(j)];
                    row[static_cast<std::size_t>(n * n + c)] = 1.0;
                    rows.push_back(std::move(row));
                    rhs.push_back(gradients[i][static_cast<std::size_t>(c)]);
                }
            Vec sol = least_squares(rows, rhs);
            rep.C = Mat(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) rep.C(i, j) = sol[static_cast<std::size_t>(i * n + j)];
            rep.c0.assign(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < n; ++i) rep.c0[static_cast<std::size_t>(i)] = sol[static_cast<std::size_t>(n * n + i)];
            for (std::size_t r = 0; r < rows.size(); ++r) {
                double fit = 0;
                for (std::size_t c = 0; c < rows[r].size(); ++c) fit += rows[r][c] * sol[c];
                rep.max_residual = std::max(rep.max_residual, std::fabs(fit - rhs[r]));
            }
            break;
        }
        case CompatMode::forced: {
            if (!lambda) throw ValidationError("compat forced: needs the separated field");
            // grad p0 / rho0 = phi * (Lambda - F(Lambda)), one scalar phi fit
            double num = 0, den = 0;
            std::vector<Vec> basis;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                Vec u = (*lambda)(pts[i]);
                if (forcing) {
                    Vec fv = (*forcing)(pts[i]);
                    for (int c = 0; c < n; ++c) u[static_cast<std::size_t>(c)] -= fv[static_cast<std::size_t>(c)];
                }
                for (int c = 0; c < n; ++c) {
                    num += u[static_cast<std::size_t>(c)] * gradients[i][static_cast<std::size_t>(c)];
                    den += sqr(u[static_cast<std::size_t>(c)]);
                }
                basis.push_back(std::move(u));
            }
            rep.phi = (den > 0) ? num / den : 0.0;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (int c = 0; c < n; ++c)
                    rep.max_residual = std::max(
                        rep.max_residual,
                        std::fabs(gradients[i][static_cast<std::size_t>(c)] -
                                  rep.phi * basis[i][static_cast<std::size_t>(c)]));
            break;
        }
    }
    return rep;
}

// ---- near-vacuum symmetrizing variable ------------------------------------

inline double makino_kappa(double gamma) { return 2.0 * std::sqrt(gamma) / (gamma - 1.0); }

inline double makino_variable(double p, double gamma) {
    if (p < 0) throw ValidationError("makino_variable: negative pressure");
    return makino_kappa(gamma) * std::pow(p, (gamma - 1.0) / (2.0 * gamma));
}

inline double makino_inverse(double Pi, double gamma) {
    if (Pi < 0) throw ValidationError("makino_inverse: negative argument");
    return std::pow(Pi / makino_kappa(gamma), 2.0 * gamma / (gamma - 1.0));
}

// ---- smallness-region feasibility -----------------------------------------

struct FeasibleRegion {
    bool feasible = false;
    double eps = 0, q = 0;   // witness
    double q_bar = 0;
};

// Inequality system for the weighted-decay parameters (eps, q): q < 1,
// eps >= 1/(1-q), eps <= (gamma-1) n/(2q), eps*delta > 1, and eps <= 2 when
// mu = 0. Grid scan over (0, q_bar) x (1, 4].
inline FeasibleRegion corollary_feasible_params(double mu, double delta, double gamma,
                                                int n) {
    if (!(gamma > 1) || (n != 2 && n != 3))
        throw ValidationError("corollary_feasible_params: bad gamma or n");
    FeasibleRegion out;
    double qb1 = delta * n * (gamma - 1) / 2.0;
    double qb2 = n * (gamma - 1) / (2.0 + n * (gamma - 1));
    out.q_bar = std::min(qb1, qb2);
    const int NQ = 400, NE = 400;
    for (int iq = 1; iq <= NQ && !out.feasible; ++iq) {
        double q = out.q_bar * iq / (NQ + 1);
        if (!(q > 0) || q >= 1) continue;
        for (int ie = 1; ie <= NE; ++ie) {
            double eps = 1.0 + 3.0 * ie / NE;
            if (eps < 1.0 / (1.0 - q)) continue;
            if (eps > (gamma - 1) * n / (2.0 * q)) continue;
            if (!(eps * delta > 1.0)) continue;
            if (mu == 0.0 && eps > 2.0) continue;
            out.feasible = true;
            out.eps = eps;
            out.q = q;
            break;
        }
    }
    return out;
}

}  // namespace gasflow
