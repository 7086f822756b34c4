#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gasflow/common.hpp"
#include "gasflow/exact_solution.hpp"
#include "gasflow/fields.hpp"
#include "gasflow/geometry.hpp"
#include "gasflow/linalg.hpp"
#include "gasflow/quadrature.hpp"

namespace gasflow {

// ---- quadrature control ----------------------------------------------------

struct QuadSpec {
    double tol = 1e-9;        // absolute tolerance per integral
    double tail_tol = 1e-10;  // admissible truncation-tail contribution
    double radius = 0;        // manual truncation radius; 0 = automatic
};

// ---- integral functionals of a transported gas state -----------------------

struct FunctionalSnapshot {
    double t = 0;
    int dim = 2;
    // shared moments
    double mass = 0, G = 0;
    double N1 = 0, N2 = 0, N3 = 0;   // first moments of rho
    double I1 = 0, I2 = 0, I3 = 0;   // momentum components
    double Ek = 0, Ep = 0, E = 0;
    // planar moments
    double F1 = 0;                   // int rho (V, r)
    double F2 = 0;                   // int rho (V, r_perp), r_perp = (y, -x)
    double Gx = 0, Gy = 0, Gxy = 0;  // half second moments
    double Delta = 0;                // Gx*Gy - Gxy^2
    // spatial (dim 3) moments about the rotation axis omega
    double F2t = 0;  // int rho (V, omega x r)
    double F3 = 0;   // int rho (V x omega, omega x r)
    double H = 0;    // (1/2) int rho |omega x r|^2
    double quad_error = 0;
    bool converged = true;
};

namespace verify_detail {

inline double op_norm_bound(const Mat& m) {
    double s = 0;
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

inline Vec cross(const Vec& a, const Vec& b) {
    return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
               a[0] * b[1] - a[1] * b[0]};
}

}  // namespace verify_detail

// Quadrature of all integral functionals the solution's dimension supports.
// Integrals are evaluated in the transported (initial) coordinates, where the
// density keeps its initial algebraic decay, over a truncated box whose tail
// contribution stays below the requested bound.
inline FunctionalSnapshot functionals(const GasSolution& sol, double decay_s_rho,
                                      double decay_s_p, double t,
                                      const QuadSpec& spec = {},
                                      const Vec& omega = {0, 0, 1}) {
    const int n = sol.dim;
    GasSolution::Frame fr = sol.frame(t);
    Mat At = sol.A(t);
    Vec bt = sol.b(t);

    // weight growth under x = M (u + shift)
    double mscale = verify_detail::op_norm_bound(fr.M);
    double shn = 0;
    for (double v : fr.shift) shn += v * v;
    shn = std::sqrt(shn);
    double ascale = verify_detail::op_norm_bound(At);
    double scale = sqr((1 + mscale) * (1 + shn)) * sqr(1 + ascale);

    double s_eff = std::min(decay_s_rho, decay_s_p) - 1.0;
    double R = spec.radius;
    if (R <= 0) R = truncation_radius(s_eff, n, spec.tail_tol, scale);
    if (!(R < 1e6))
        throw ValidationError(
            "functionals: truncation radius exceeds 1e6; integrals inconclusive");

    const double jac_rho = std::exp(-fr.q) * std::fabs(det(fr.M));
    const double jac_p = std::exp(-sol.gamma * fr.q) * std::fabs(det(fr.M));

    FunctionalSnapshot snap;
    snap.t = t;
    snap.dim = n;

    auto physical = [&](const Vec& u) {
        Vec w = u;
        for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i)] += fr.shift[static_cast<std::size_t>(i)];
        return mat_vec(fr.M, w);
    };
    auto velocity = [&](const Vec& x) {
        Vec v = mat_vec(At, x);
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] += bt[static_cast<std::size_t>(i)];
        return v;
    };

    // weight(x, V) integrated against rho (density = true) or p
    auto moment = [&](bool density,
                      const std::function<double(const Vec&, const Vec&)>& weight) {
        QuadResult q;
        if (n == 2) {
            q = integrate_2d(
                [&](double u1, double u2) {
                    Vec u{u1, u2};
                    double base = density ? sol.rho0(u) : sol.p0(u);
                    if (base == 0.0) return 0.0;
                    Vec x = physical(u);
                    return base * weight(x, velocity(x));
                },
                -R, R, -R, R, spec.tol);
        } else {
            q = integrate_3d(
                [&](double u1, double u2, double u3) {
                    Vec u{u1, u2, u3};
                    double base = density ? sol.rho0(u) : sol.p0(u);
                    if (base == 0.0) return 0.0;
                    Vec x = physical(u);
                    return base * weight(x, velocity(x));
                },
                -R, R, -R, R, -R, R, std::max(spec.tol, 1e-8));
        }
        snap.quad_error += q.error;
        snap.converged = snap.converged && q.converged;
        return (density ? jac_rho : jac_p) * q.value;
    };

    auto dot = [n](const Vec& a, const Vec& b) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        return s;
    };

    snap.mass = moment(true, [](const Vec&, const Vec&) { return 1.0; });
    snap.G = moment(true, [&](const Vec& x, const Vec&) { return 0.5 * dot(x, x); });
    snap.N1 = moment(true, [](const Vec& x, const Vec&) { return x[0]; });
    snap.N2 = moment(true, [](const Vec& x, const Vec&) { return x[1]; });
    snap.I1 = moment(true, [](const Vec&, const Vec& v) { return v[0]; });
    snap.I2 = moment(true, [](const Vec&, const Vec& v) { return v[1]; });
    snap.Ek = moment(true, [&](const Vec&, const Vec& v) { return 0.5 * dot(v, v); });
    snap.Ep = moment(false, [](const Vec&, const Vec&) { return 1.0; }) / (sol.gamma - 1);
    snap.E = snap.Ek + snap.Ep;
    snap.F1 = moment(true, [&](const Vec& x, const Vec& v) { return dot(x, v); });

    if (n == 2) {
        snap.F2 = moment(true, [](const Vec& x, const Vec& v) {
            return v[0] * x[1] - v[1] * x[0];
        });
        snap.Gx = moment(true, [](const Vec& x, const Vec&) { return 0.5 * x[0] * x[0]; });
        snap.Gy = moment(true, [](const Vec& x, const Vec&) { return 0.5 * x[1] * x[1]; });
        snap.Gxy = moment(true, [](const Vec& x, const Vec&) { return 0.5 * x[0] * x[1]; });
        snap.Delta = snap.Gx * snap.Gy - snap.Gxy * snap.Gxy;
    } else {
        snap.N3 = moment(true, [](const Vec& x, const Vec&) { return x[2]; });
        snap.I3 = moment(true, [](const Vec&, const Vec& v) { return v[2]; });
        snap.F2t = moment(true, [&](const Vec& x, const Vec& v) {
            return dot(v, verify_detail::cross(omega, x));
        });
        snap.F3 = moment(true, [&](const Vec& x, const Vec& v) {
            return dot(verify_detail::cross(v, omega), verify_detail::cross(omega, x));
        });
        snap.H = moment(true, [&](const Vec& x, const Vec&) {
            Vec w = verify_detail::cross(omega, x);
            return 0.5 * dot(w, w);
        });
    }
    return snap;
}

// ---- moment-evolution identities -------------------------------------------

struct IdentityRow {
    double t = 0;
    std::map<std::string, double> residual;  // relative residual per identity
};

struct IdentityTable {
    std::vector<IdentityRow> rows;
    std::map<std::string, double> max_residual;
    bool energy_monotone = true;  // E(t2) <= E(t1) + tolerance for t2 > t1
    std::vector<double> energies;
};

// Central-difference time derivative of each functional against the closed
// evolution laws for the forcing -mu V + l J V:
//   G' = F1, N_i' = I_i, I1' = -mu I1 + l I2, I2' = -mu I2 - l I1,
//   F1' = 2(g-1) Ep + 2 Ek - l F2 - mu F1, F2' = l F1 - mu F2, E' = -2 mu Ek.
inline IdentityTable functional_identities(const GasSolution& sol, double decay_s_rho,
                                           double decay_s_p, double mu, double l,
                                           const std::vector<double>& times,
                                           const QuadSpec& spec = {},
                                           double fd_step = 1e-3) {
    IdentityTable table;
    const double g = sol.gamma;
    std::vector<FunctionalSnapshot> c(times.size()), fwd(times.size()), bwd(times.size());
    parallel_for(times.size(), [&](std::size_t i) {
        double t = times[i];
        double h = std::min(fd_step, 0.5 * std::max(t, fd_step));
        if (t - h < 0) h = 0.5 * t > 0 ? 0.5 * t : fd_step;
        c[i] = functionals(sol, decay_s_rho, decay_s_p, t, spec);
        fwd[i] = functionals(sol, decay_s_rho, decay_s_p, t + h, spec);
        bwd[i] = functionals(sol, decay_s_rho, decay_s_p, std::max(t - h, 0.0), spec);
    });
    for (std::size_t i = 0; i < times.size(); ++i) {
        double t = times[i];
        double tp = fwd[i].t, tm = bwd[i].t;
        double inv = 1.0 / (tp - tm);
        auto fd = [&](double vp, double vm) { return (vp - vm) * inv; };
        auto rel = [](double lhs, double rhs, double scale) {
            double den = std::max({std::fabs(lhs), std::fabs(rhs), std::fabs(scale), 1e-30});
            return std::fabs(lhs - rhs) / den;
        };
        const FunctionalSnapshot& s = c[i];
        IdentityRow row;
        row.t = t;
        row.residual["G'"] = rel(fd(fwd[i].G, bwd[i].G), s.F1, s.G);
        row.residual["N1'"] = rel(fd(fwd[i].N1, bwd[i].N1), s.I1, s.mass);
        row.residual["N2'"] = rel(fd(fwd[i].N2, bwd[i].N2), s.I2, s.mass);
        row.residual["I1'"] =
            rel(fd(fwd[i].I1, bwd[i].I1), -mu * s.I1 + l * s.I2, s.mass);
        row.residual["I2'"] =
            rel(fd(fwd[i].I2, bwd[i].I2), -mu * s.I2 - l * s.I1, s.mass);
        row.residual["F1'"] = rel(fd(fwd[i].F1, bwd[i].F1),
                                  2 * (g - 1) * s.Ep + 2 * s.Ek - l * s.F2 - mu * s.F1,
                                  s.E);
        if (sol.dim == 2)
            row.residual["F2'"] =
                rel(fd(fwd[i].F2, bwd[i].F2), l * s.F1 - mu * s.F2, s.E);
        row.residual["E'"] = rel(fd(fwd[i].E, bwd[i].E), -2 * mu * s.Ek, s.E);
        table.rows.push_back(std::move(row));
        table.energies.push_back(s.E);
    }
    for (const IdentityRow& row : table.rows)
        for (const auto& kv : row.residual) {
            auto it = table.max_residual.find(kv.first);
            if (it == table.max_residual.end())
                table.max_residual[kv.first] = kv.second;
            else
                it->second = std::max(it->second, kv.second);
        }
    for (std::size_t i = 1; i < table.energies.size(); ++i) {
        double slack = 1e-8 * std::fabs(table.energies[0]) + c[i].quad_error +
                       c[i - 1].quad_error;
        if (table.energies[i] > table.energies[i - 1] + slack)
            table.energy_monotone = false;
    }
    return table;
}

// ---- PDE residuals on space-time grids -------------------------------------

struct ResidualGrid {
    double t0 = 0.5, t1 = 1.5;
    Box box;  // spatial box; default [-2,2]^dim
    double h_x = 0.1, h_t = 0.1;
};

struct ResidualLevel {
    double h_x = 0, h_t = 0;
    double max_continuity = 0, rms_continuity = 0;
    double max_momentum = 0, rms_momentum = 0;
    double max_pressure = 0, rms_pressure = 0;
    long nodes = 0;
    int excluded = 0;
};

struct ResidualReport {
    ResidualGrid grid;
    ResidualLevel coarse, fine;
    bool two_levels = true;
    double order_continuity = 0, order_momentum = 0, order_pressure = 0;
    double order_overall = 0;
};

// momentum forcing F(t, x, V)
using ForcingFn = std::function<Vec(double, const Vec&, const Vec&)>;

namespace verify_detail {

inline ResidualLevel residual_level(const GasSolution& sol, const ForcingFn& forcing,
                                    const ResidualGrid& grid, double hx, double ht) {
    const int n = sol.dim;
    ResidualLevel lev;
    lev.h_x = hx;
    lev.h_t = ht;

    std::vector<Vec> nodes;
    {
        // interior nodes: the 4th-order space stencil needs a 2-cell margin
        std::vector<int> counts(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d)
            counts[static_cast<std::size_t>(d)] = static_cast<int>(
                std::floor((grid.box.hi[static_cast<std::size_t>(d)] -
                            grid.box.lo[static_cast<std::size_t>(d)]) / hx + 0.5)) + 1;
        std::vector<int> idx(static_cast<std::size_t>(n), 2);
        bool done = false;
        while (!done) {
            Vec x(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d)
                x[static_cast<std::size_t>(d)] =
                    grid.box.lo[static_cast<std::size_t>(d)] + hx * idx[static_cast<std::size_t>(d)];
            nodes.push_back(std::move(x));
            int d = 0;
            for (; d < n; ++d) {
                if (++idx[static_cast<std::size_t>(d)] <= counts[static_cast<std::size_t>(d)] - 3) break;
                idx[static_cast<std::size_t>(d)] = 2;
            }
            if (d == n) done = true;
        }
    }

    std::vector<double> slice_times;
    for (double t = grid.t0 + ht; t < grid.t1 - ht + 1e-12; t += ht)
        slice_times.push_back(t);

    struct SliceAcc {
        double max_c = 0, ss_c = 0, max_m = 0, ss_m = 0, max_p = 0, ss_p = 0;
        long nodes = 0;
        int excluded = 0;
    };
    std::vector<SliceAcc> acc(slice_times.size());

    parallel_for(slice_times.size(), [&](std::size_t si) {
        double t = slice_times[si];
        GasSolution::Frame f0 = sol.frame(t);
        GasSolution::Frame fp = sol.frame(t + ht);
        GasSolution::Frame fm = sol.frame(t - ht);
        Mat At = sol.A(t);
        Vec b0 = sol.b(t);
        Vec vp_b = sol.b(t + ht), vm_b = sol.b(t - ht);
        Mat Ap = sol.A(t + ht), Am = sol.A(t - ht);
        auto rho_at = [&](const GasSolution::Frame& f, const Vec& x) {
            return std::exp(-f.q) * sol.rho0(sol.pull_back(f, x));
        };
        auto p_at = [&](const GasSolution::Frame& f, const Vec& x) {
            return std::exp(-sol.gamma * f.q) * sol.p0(sol.pull_back(f, x));
        };
        // density floor from the slice maximum
        double rho_max = 0;
        for (const Vec& x : nodes) rho_max = std::max(rho_max, rho_at(f0, x));
        double rho_floor = 1e-12 * rho_max;

        SliceAcc& a = acc[si];
        for (const Vec& x : nodes) {
            double rho_c = rho_at(f0, x);
            if (!(rho_c > rho_floor)) {
                ++a.excluded;
                continue;
            }
            double p_c = p_at(f0, x);
            double rho_t = (rho_at(fp, x) - rho_at(fm, x)) / (2 * ht);
            double p_t = (p_at(fp, x) - p_at(fm, x)) / (2 * ht);
            Vec v_c = mat_vec(At, x);
            for (int i = 0; i < n; ++i) v_c[static_cast<std::size_t>(i)] += b0[static_cast<std::size_t>(i)];
            Vec v_t(static_cast<std::size_t>(n));
            {
                Vec vp = mat_vec(Ap, x), vm = mat_vec(Am, x);
                for (int i = 0; i < n; ++i)
                    v_t[static_cast<std::size_t>(i)] =
                        (vp[static_cast<std::size_t>(i)] + vp_b[static_cast<std::size_t>(i)] -
                         vm[static_cast<std::size_t>(i)] - vm_b[static_cast<std::size_t>(i)]) / (2 * ht);
            }
            // 4th-order central space derivatives of rho and p
            Vec drho(static_cast<std::size_t>(n)), dp(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d) {
                Vec x1 = x, x2 = x, x3 = x, x4 = x;
                x1[static_cast<std::size_t>(d)] += 2 * hx;
                x2[static_cast<std::size_t>(d)] += hx;
                x3[static_cast<std::size_t>(d)] -= hx;
                x4[static_cast<std::size_t>(d)] -= 2 * hx;
                drho[static_cast<std::size_t>(d)] =
                    (-rho_at(f0, x1) + 8 * rho_at(f0, x2) - 8 * rho_at(f0, x3) +
                     rho_at(f0, x4)) / (12 * hx);
                dp[static_cast<std::size_t>(d)] =
                    (-p_at(f0, x1) + 8 * p_at(f0, x2) - 8 * p_at(f0, x3) + p_at(f0, x4)) /
                    (12 * hx);
            }
            double divV = trace(At);
            // continuity: (rho_t + div(rho V)) / rho
            double cont = rho_t + rho_c * divV;
            for (int d = 0; d < n; ++d)
                cont += drho[static_cast<std::size_t>(d)] * v_c[static_cast<std::size_t>(d)];
            cont /= rho_c;
            // momentum: V_t + (V,grad)V + grad p / rho - F
            Vec force(static_cast<std::size_t>(n), 0.0);
            if (forcing) force = forcing(t, x, v_c);
            double mom = 0;
            for (int i = 0; i < n; ++i) {
                double r = v_t[static_cast<std::size_t>(i)] +
                           dp[static_cast<std::size_t>(i)] / rho_c -
                           force[static_cast<std::size_t>(i)];
                for (int j = 0; j < n; ++j)
                    r += v_c[static_cast<std::size_t>(j)] * At(i, j);
                mom = std::max(mom, std::fabs(r));
            }
            // pressure: p_t + (V, grad p) + gamma p div V
            double pres = p_t + sol.gamma * p_c * divV;
            for (int d = 0; d < n; ++d)
                pres += v_c[static_cast<std::size_t>(d)] * dp[static_cast<std::size_t>(d)];

            a.max_c = std::max(a.max_c, std::fabs(cont));
            a.ss_c += cont * cont;
            a.max_m = std::max(a.max_m, mom);
            a.ss_m += mom * mom;
            a.max_p = std::max(a.max_p, std::fabs(pres));
            a.ss_p += pres * pres;
            ++a.nodes;
        }
    });

    double ss_c = 0, ss_m = 0, ss_p = 0;
    for (const auto& a : acc) {
        lev.max_continuity = std::max(lev.max_continuity, a.max_c);
        lev.max_momentum = std::max(lev.max_momentum, a.max_m);
        lev.max_pressure = std::max(lev.max_pressure, a.max_p);
        ss_c += a.ss_c;
        ss_m += a.ss_m;
        ss_p += a.ss_p;
        lev.nodes += a.nodes;
        lev.excluded += a.excluded;
    }
    if (lev.nodes > 0) {
        double inv = 1.0 / static_cast<double>(lev.nodes);
        lev.rms_continuity = std::sqrt(ss_c * inv);
        lev.rms_momentum = std::sqrt(ss_m * inv);
        lev.rms_pressure = std::sqrt(ss_p * inv);
    }
    return lev;
}

}  // namespace verify_detail

inline ResidualReport pde_residual(const GasSolution& sol, const ForcingFn& forcing,
                                   ResidualGrid grid, bool two_levels = true) {
    if (grid.box.lo.empty()) {
        grid.box.lo.assign(static_cast<std::size_t>(sol.dim), -2.0);
        grid.box.hi.assign(static_cast<std::size_t>(sol.dim), 2.0);
    }
    if (!(grid.h_x > 0) || !(grid.h_t > 0) || !(grid.t1 > grid.t0))
        throw ValidationError("pde_residual: bad grid spec");
    if (grid.t0 - grid.h_t < 0)
        throw ValidationError("pde_residual: time stencil leaves the assembled span");
    ResidualReport rep;
    rep.grid = grid;
    rep.coarse = verify_detail::residual_level(sol, forcing, grid, grid.h_x, grid.h_t);
    rep.two_levels = two_levels;
    if (two_levels) {
        rep.fine =
            verify_detail::residual_level(sol, forcing, grid, 0.5 * grid.h_x, 0.5 * grid.h_t);
        auto order = [](double coarse, double fine) {
            if (!(coarse > 0) || !(fine > 0)) return 0.0;
            return std::log2(coarse / fine);
        };
        rep.order_continuity = order(rep.coarse.rms_continuity, rep.fine.rms_continuity);
        rep.order_momentum = order(rep.coarse.rms_momentum, rep.fine.rms_momentum);
        rep.order_pressure = order(rep.coarse.rms_pressure, rep.fine.rms_pressure);
        double cmax = std::max({rep.coarse.rms_continuity, rep.coarse.rms_momentum,
                                rep.coarse.rms_pressure});
        double fmax = std::max({rep.fine.rms_continuity, rep.fine.rms_momentum,
                                rep.fine.rms_pressure});
        rep.order_overall = order(cmax, fmax);
    }
    return rep;
}

// ---- functionals of a separated-velocity state ------------------------------

struct SeparatedFunctionals {
    double a = 0, gamma = 0;
    double mass = 0;
    std::array<double, 5> Gm{};  // (1/2) int rho |Lambda|^m, m = 0..4
    double G = 0;                // Gm[2]
    double F = 0;                // (1/2) int rho (grad|Lambda|^2, V)
    double Ek = 0, Ep = 0, E = 0;
    std::array<double, 7> Qm{};  // int p D^m, m = 0..6
    double Nfun = 0;             // int p (gamma D^2 - 3 D + 2)
    double J_correction = 0;     // 2 int rho J L1 L2 (1 - D), J = grad_2 L1 - grad_1 L2
    double lambda_gradD = 0;     // int p (Lambda, grad D)
    double gradD_reduced = 0;    // int p (3D - D^2 - 2)
    double quad_error = 0;
    bool converged = true;
};

// Static quadrature snapshot for a velocity field a * Lambda(x) over a given
// density/pressure pair on a planar box.
inline SeparatedFunctionals separated_functionals(
    const FieldSpec& field, const std::function<double(const Vec&)>& rho,
    const std::function<double(const Vec&)>& p, double amp, double gamma, const Box& box,
    double tol = 1e-9) {
    if (field.chart.dim != 2)
        throw ValidationError("separated_functionals: planar fields only");
    SeparatedFunctionals out;
    out.a = amp;
    out.gamma = gamma;

    auto quad = [&](const std::function<double(const Vec&)>& integrand) {
        QuadResult q = integrate_2d(
            [&](double x, double y) { return integrand(Vec{x, y}); }, box.lo[0], box.hi[0],
            box.lo[1], box.hi[1], tol);
        out.quad_error += q.error;
        out.converged = out.converged && q.converged;
        return q.value;
    };
    auto div_of = [&](const Vec& x) { return divergence(field.chart, field, x); };

    out.mass = quad(rho);
    for (int m = 0; m <= 4; ++m)
        out.Gm[static_cast<std::size_t>(m)] = quad([&](const Vec& x) {
            Vec lam = field.eval(x);
            double n2 = lam[0] * lam[0] + lam[1] * lam[1];
            return 0.5 * rho(x) * std::pow(n2, 0.5 * m);
        });
    out.G = out.Gm[2];
    out.F = quad([&](const Vec& x) {
        // (1/2)(grad|Lambda|^2, V) = amp * Lambda_i Lambda^j grad_j Lambda^i
        Mat B = covariant_derivative(field.chart, field, x);
        Vec lam = field.eval(x);
        double s = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s += lam[static_cast<std::size_t>(i)] * lam[static_cast<std::size_t>(j)] * B(i, j);
        return rho(x) * amp * s;
    });
    out.Ek = quad([&](const Vec& x) {
        Vec lam = field.eval(x);
        return 0.5 * rho(x) * amp * amp * (lam[0] * lam[0] + lam[1] * lam[1]);
    });
    out.Ep = quad(p) / (gamma - 1);
    out.E = out.Ek + out.Ep;
    for (int m = 0; m <= 6; ++m)
        out.Qm[static_cast<std::size_t>(m)] =
            quad([&](const Vec& x) { return p(x) * std::pow(div_of(x), m); });
    out.Nfun = quad([&](const Vec& x) {
        double D = div_of(x);
        return p(x) * (gamma * D * D - 3 * D + 2);
    });
    out.J_correction = quad([&](const Vec& x) {
        Mat B = covariant_derivative(field.chart, field, x);
        Vec lam = field.eval(x);
        double J = B(0, 1) - B(1, 0);  // grad_2 Lambda^1 - grad_1 Lambda^2
        double D = B(0, 0) + B(1, 1);
        return 2.0 * rho(x) * J * lam[0] * lam[1] * (1.0 - D);
    });
    out.lambda_gradD = quad([&](const Vec& x) {
        Vec lam = field.eval(x);
        double s = 0;
        for (int d = 0; d < 2; ++d) {
            double h = 1e-4 * std::max(1.0, std::fabs(x[static_cast<std::size_t>(d)]));
            Vec xp = x, xm = x;
            xp[static_cast<std::size_t>(d)] += h;
            xm[static_cast<std::size_t>(d)] -= h;
            s += lam[static_cast<std::size_t>(d)] * (div_of(xp) - div_of(xm)) / (2 * h);
        }
        return p(x) * s;
    });
    out.gradD_reduced = quad([&](const Vec& x) {
        double D = div_of(x);
        return p(x) * (3 * D - D * D - 2);
    });
    return out;
}

// ---- interpolation inequality ----------------------------------------------

struct Lemma51Result {
    double lhs = 0, rhs = 0, margin = 0;
    double int_f = 0, int_fgamma = 0, int_x2f = 0;
    bool converged = true;
};

// int f <= C (int f^g)^{2/((n+2)g-n)} (int |x|^2 f)^{n(g-1)/((n+2)g-n)} with
// C = 2 omega_n^{2(g-1)/((n+2)g-n)}, omega_n the unit-ball volume. Proof: split
// the integral at radius R (Hoelder inside, Chebyshev outside) and take
// R = (B/P)^{g/((n+2)g-n)}; both sides then scale identically under f -> c f
// and x -> x/s.
inline Lemma51Result lemma51_check(const std::function<double(const Vec&)>& f,
                                   double gamma, int n, double g_star = 1.0,
                                   double radius = 20.0, double tol = 1e-9) {
    if (!(gamma > 1) || (n != 2 && n != 3))
        throw ValidationError("lemma51_check: gamma must exceed 1 and n must be 2 or 3");
    Lemma51Result out;
    auto quad = [&](const std::function<double(const Vec&)>& integrand) {
        QuadResult q;
        if (n == 2)
            q = integrate_2d([&](double x, double y) { return integrand(Vec{x, y}); },
                             -radius, radius, -radius, radius, tol);
        else
            q = integrate_3d(
                [&](double x, double y, double z) { return integrand(Vec{x, y, z}); },
                -radius, radius, -radius, radius, -radius, radius, std::max(tol, 3e-7));
        out.converged = out.converged && q.converged;
        return q.value;
    };
    out.int_f = quad(f);
    out.int_fgamma = quad([&](const Vec& x) { return std::pow(f(x), gamma); });
    out.int_x2f = quad([&](const Vec& x) {
        double r2 = 0;
        for (double v : x) r2 += v * v;
        return r2 * f(x);
    });
    const double nn = static_cast<double>(n);
    const double denom = (nn + 2) * gamma - nn;
    const double e1 = 2 / denom;
    const double e2 = nn * (gamma - 1) / denom;
    const double omega_n = (n == 2) ? M_PI : 4.0 * M_PI / 3.0;
    const double C = std::pow(g_star, 0.5 * e2) *
                     2.0 * std::pow(omega_n, 2 * (gamma - 1) / denom);
    out.lhs = out.int_f;
    out.rhs = (out.int_f == 0.0)
                  ? 0.0
                  : C * std::pow(out.int_fgamma, e1) * std::pow(out.int_x2f, e2);
    out.margin = out.rhs - out.lhs;
    return out;
}

// ---- blow-up criterion -----------------------------------------------------

struct SingularityVerdict {
    bool criterion_met = false;
    double threshold = 0;
    bool necessary_ok = false;
    double necessary_bound = 0;
    double F0 = 0, lambda_sup = 0, D_minus = 0, mass = 0, energy = 0;
};

// Sufficient blow-up condition F(0) > Lambda_+ sqrt((g-1) D_- M E) (strict)
// and the necessary feasibility bound D_- <= M E / (g-1).
inline SingularityVerdict singularity_criterion(double F0, double lambda_sup,
                                                double inf_D, double mass, double energy,
                                                double gamma) {
    if (!(gamma > 1) || !(mass > 0) || !(energy >= 0) || !(lambda_sup >= 0))
        throw ValidationError("singularity_criterion: bad inputs");
    SingularityVerdict v;
    v.F0 = F0;
    v.lambda_sup = lambda_sup;
    v.D_minus = std::max(0.0, -inf_D);
    v.mass = mass;
    v.energy = energy;
    v.threshold = lambda_sup * std::sqrt((gamma - 1) * v.D_minus * mass * energy);
    v.criterion_met = F0 > v.threshold;
    v.necessary_bound = mass * energy / (gamma - 1);
    v.necessary_ok = v.D_minus <= v.necessary_bound;
    return v;
}

}  // namespace gasflow
