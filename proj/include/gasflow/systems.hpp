#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gasflow/common.hpp"
#include "gasflow/integrate.hpp"
#include "gasflow/linalg.hpp"
#include "gasflow/quadrature.hpp"

namespace gasflow {

enum class SystemKind {
    TwoDSpecial,    // rotationally symmetric 2D profile (G1, beta, alpha)
    TwoDGeneral,    // full 2x2 matrix profile (G1, G2, G3, a, b, c, d)
    TwoDWithShift,  // symmetric profile plus drift (G, N1, N2, alpha, beta, b1, b2)
    ThreeD,         // axisymmetric 3D profile (alpha, beta, G1)
    ConstDiv,       // separated field, constant divergence (a, Gtilde)
    DryFriction,    // same with dry friction (a, Gtilde)
    AeroFriction,   // same with aerodynamic friction (a, Gtilde)
};

inline std::string to_string(SystemKind k) {
    switch (k) {
        case SystemKind::TwoDSpecial: return "2d-special";
        case SystemKind::TwoDGeneral: return "2d-general";
        case SystemKind::TwoDWithShift: return "2d-shift";
        case SystemKind::ThreeD: return "3d";
        case SystemKind::ConstDiv: return "const-div";
        case SystemKind::DryFriction: return "dry-friction";
        case SystemKind::AeroFriction: return "aero-friction";
    }
    return "?";
}

inline SystemKind parse_system_kind(const std::string& s) {
    if (s == "2d-special") return SystemKind::TwoDSpecial;
    if (s == "2d-general") return SystemKind::TwoDGeneral;
    if (s == "2d-shift") return SystemKind::TwoDWithShift;
    if (s == "3d") return SystemKind::ThreeD;
    if (s == "const-div") return SystemKind::ConstDiv;
    if (s == "dry-friction") return SystemKind::DryFriction;
    if (s == "aero-friction") return SystemKind::AeroFriction;
    throw ValidationError("unknown system kind: " + s);
}

struct ParamSet {
    double gamma = 1.4;
    double l = 0;      // rotation rate
    double mu = 0;     // linear drag
    double mu1 = 0;    // aerodynamic drag
    int delta_flag = 0;
    double D = 2;      // constant divergence of the spatial profile
    double M = 1;      // total mass
    double H0 = 0;     // vertical moment (3D)
    std::map<std::string, double> K;  // named pressure constants

    double k(const std::string& name) const {
        auto it = K.find(name);
        if (it == K.end()) throw ValidationError("missing pressure constant: " + name);
        return it->second;
    }
    double k_or(const std::string& name, double fallback) const {
        auto it = K.find(name);
        return it == K.end() ? fallback : it->second;
    }

    void validate(int n = 2) const {
        if (!(gamma > 1)) throw ValidationError("params: gamma must exceed 1");
        if (mu < 0 || mu1 < 0) throw ValidationError("params: friction must be nonnegative");
        if (!(M > 0)) throw ValidationError("params: mass must be positive");
        (void)n;  // gamma <= 1 + 2/n is only a physical-range warning, not an error
    }
    bool physical_gamma(int n) const { return gamma <= 1.0 + 2.0 / n; }
};

inline std::vector<std::string> state_layout(SystemKind k) {
    switch (k) {
        case SystemKind::TwoDSpecial: return {"G1", "beta", "alpha"};
        case SystemKind::TwoDGeneral: return {"G1", "G2", "G3", "a", "b", "c", "d"};
        case SystemKind::TwoDWithShift: return {"G", "N1", "N2", "alpha", "beta", "b1", "b2"};
        case SystemKind::ThreeD: return {"alpha", "beta", "G1"};
        case SystemKind::ConstDiv:
        case SystemKind::DryFriction:
        case SystemKind::AeroFriction: return {"a", "Gtilde"};
    }
    return {};
}

// Closure constant for the constant-divergence amplitude equation, derived
// from the potential-energy/moment relations: with Gtilde = 1/G,
//   a' = -a^2 + Ktilde * Gtilde^{((gamma-1)D+2)/2},
//   Ktilde = ((gamma-1) D / 2) * Ep0 * Gtilde0^{-(gamma-1)D/2}.
inline double const_div_ktilde(double gamma, double D, double Ep0, double Gtilde0) {
    return 0.5 * (gamma - 1.0) * D * Ep0 * std::pow(Gtilde0, -0.5 * (gamma - 1.0) * D);
}

namespace systems_detail {

struct ShiftAux {
    double I1, I2, F1, F2, Ek, Ep;
};

inline ShiftAux shift_aux(const Vec& s, const ParamSet& p) {
    double G = s[0], N1 = s[1], N2 = s[2], al = s[3], be = s[4], b1 = s[5], b2 = s[6];
    ShiftAux a;
    a.I1 = al * N1 + be * N2 + b1 * p.M;
    a.I2 = al * N2 - be * N1 + b2 * p.M;
    a.F1 = 2 * al * G + b1 * N1 + b2 * N2;
    a.F2 = 2 * be * G + b2 * N1 - b1 * N2;
    a.Ek = (al * al + be * be) * G + al * b1 * N1 + be * b1 * N2 + al * b2 * N2 +
           be * b2 * N1 + 0.5 * (b1 * b1 + b2 * b2) * p.M;
    a.Ep = p.k("K") * std::pow(G, 1.0 - p.gamma);
    return a;
}

}  // namespace systems_detail

inline void system_rhs(SystemKind kind, const ParamSet& p, double /*t*/, const Vec& s,
                       Vec& ds) {
    const double g = p.gamma, l = p.l, mu = p.mu;
    switch (kind) {
        case SystemKind::TwoDSpecial: {
            double G1 = s[0], be = s[1], al = s[2];
            double K = p.k("K");
            ds[0] = -2 * al * G1;
            ds[1] = al * (l - 2 * be) - mu * be;
            ds[2] = -al * al + be * be - l * be - mu * al + (g - 1) * K * std::pow(G1, g);
            break;
        }
        case SystemKind::TwoDGeneral: {
            double G1 = s[0], G2 = s[1], G3 = s[2], a = s[3], b = s[4], c = s[5], d = s[6];
            double K2 = p.k("K2");
            ds[0] = ((1 - g) * a - (1 + g) * d) * G1 + 2 * b * G3;
            ds[1] = ((1 - g) * d - (1 + g) * a) * G2 + 2 * c * G3;
            ds[2] = c * G1 + b * G2 - g * (a + d) * G3;
            ds[3] = -a * a - b * c + l * c - mu * a + K2 * G2;
            ds[4] = -b * (a + d) + l * d - mu * b - K2 * G3;
            ds[5] = -c * (a + d) - l * a - mu * c - K2 * G3;
            ds[6] = -d * d - b * c - l * b - mu * d + K2 * G1;
            break;
        }
        case SystemKind::TwoDWithShift: {
            double G = s[0], N1 = s[1], N2 = s[2], al = s[3], be = s[4], b1 = s[5],
                   b2 = s[6];
            auto aux = systems_detail::shift_aux(s, p);
            ds[0] = aux.F1;
            ds[1] = aux.I1;
            ds[2] = aux.I2;
            // remaining derivatives from the moment-evolution identities:
            //   I1' = -mu I1 + l I2, I2' = -mu I2 - l I1,
            //   F1' = 2(g-1)Ep + 2Ek - l F2 - mu F1, F2' = l F1 - mu F2
            Mat A(4);
            A(0, 0) = N1;  A(0, 1) = N2;  A(0, 2) = p.M; A(0, 3) = 0;
            A(1, 0) = N2;  A(1, 1) = -N1; A(1, 2) = 0;   A(1, 3) = p.M;
            A(2, 0) = 2 * G; A(2, 1) = 0; A(2, 2) = N1;  A(2, 3) = N2;
            A(3, 0) = 0;  A(3, 1) = 2 * G; A(3, 2) = -N2; A(3, 3) = N1;
            Vec rhs(4);
            rhs[0] = -mu * aux.I1 + l * aux.I2 - al * aux.I1 - be * aux.I2;
            rhs[1] = -mu * aux.I2 - l * aux.I1 - al * aux.I2 + be * aux.I1;
            rhs[2] = 2 * (g - 1) * aux.Ep + 2 * aux.Ek - l * aux.F2 - mu * aux.F1 -
                     2 * al * aux.F1 - b1 * aux.I1 - b2 * aux.I2;
            rhs[3] = l * aux.F1 - mu * aux.F2 - 2 * be * aux.F1 - b2 * aux.I1 + b1 * aux.I2;
            Vec pr = solve_mat(A, rhs);
            ds[3] = pr[0];
            ds[4] = pr[1];
            ds[5] = pr[2];
            ds[6] = pr[3];
            break;
        }
        case SystemKind::ThreeD: {
            double al = s[0], be = s[1], G1 = s[2];
            double Kt = p.k("Ktilde");
            double dl = static_cast<double>(p.delta_flag);
            ds[0] = -al * al - mu * al + be * be * G1 * p.H0 - dl * be * G1 * p.H0 +
                    1.5 * (g - 1) * Kt * std::pow(G1, 0.5 * (3 * g - 1));
            ds[1] = dl * al - mu * be;
            ds[2] = -2 * al * G1;
            break;
        }
        case SystemKind::ConstDiv:
        case SystemKind::DryFriction:
        case SystemKind::AeroFriction: {
            double a = s[0], Gt = s[1];
            double Kt = p.k("Ktilde");
            double press = Kt * std::pow(Gt, 0.5 * ((g - 1) * p.D + 2.0));
            double fr = 0;
            if (kind == SystemKind::DryFriction) fr = 0.5 * mu * p.k("Ks12") * a;
            if (kind == SystemKind::AeroFriction && a != 0.0)
                fr = 0.5 * p.mu1 * p.k("Ks12") * a * std::fabs(a) / std::sqrt(Gt);
            ds[0] = -a * a - fr + press;
            ds[1] = -2 * a * Gt;
            break;
        }
    }
}

struct Trajectory {
    SystemKind kind = SystemKind::TwoDSpecial;
    ParamSet params;
    std::vector<std::string> layout;
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<OdeEvent> events;
    OdeResult raw;  // keeps dense output for continuous evaluation
    double t_end_requested = 0;
};

namespace systems_detail {
inline std::optional<OdeEvent> guard(SystemKind kind, const ParamSet& p, double t,
                                     const Vec& s) {
    auto pos = [&](double v) { return v > 0; };
    switch (kind) {
        case SystemKind::TwoDSpecial:
            if (!pos(s[0])) return OdeEvent{"positivity_loss", t};
            break;
        case SystemKind::TwoDGeneral:
            if (!pos(s[0]) || !pos(s[1]) || !(s[0] * s[1] - s[2] * s[2] > 0))
                return OdeEvent{"positivity_loss", t};
            break;
        case SystemKind::TwoDWithShift: {
            if (!pos(s[0])) return OdeEvent{"positivity_loss", t};
            double G = s[0], nn = s[1] * s[1] + s[2] * s[2];
            if (!(4 * G * G * p.M * p.M - nn * nn > 0))
                return OdeEvent{"determinant_loss", t};
            break;
        }
        case SystemKind::ThreeD:
            if (!pos(s[2])) return OdeEvent{"positivity_loss", t};
            break;
        case SystemKind::ConstDiv:
        case SystemKind::DryFriction:
        case SystemKind::AeroFriction:
            if (s[1] < 0) return OdeEvent{"positivity_loss", t};
            break;
    }
    return std::nullopt;
}
}  // namespace systems_detail

inline Trajectory integrate_system(SystemKind kind, const Vec& state0, const ParamSet& p,
                                   double t_end, double tol,
                                   const std::vector<double>& sample_times = {}) {
    if (!(tol >= 1e-13 && tol <= 1e-3))
        throw ValidationError("integrate_system: tol must lie in [1e-13, 1e-3]");
    if (!(t_end > 0)) throw ValidationError("integrate_system: t_end must be positive");
    p.validate();
    if (state0.size() != state_layout(kind).size())
        throw ValidationError("integrate_system: state dimension mismatch");
    if (auto ev = systems_detail::guard(kind, p, 0.0, state0))
        throw NumericalEvent(ev->kind, 0.0, "integrate_system: inadmissible initial state");

    OdeOptions opt;
    opt.atol = opt.rtol = tol;
    opt.event_fn = [&, kind](double t, const Vec& s) {
        return systems_detail::guard(kind, p, t, s);
    };
    auto rhs = [&, kind](double t, const Vec& s, Vec& ds) { system_rhs(kind, p, t, s, ds); };

    Trajectory traj;
    traj.kind = kind;
    traj.params = p;
    traj.layout = state_layout(kind);
    traj.t_end_requested = t_end;
    traj.raw = integrate_ode(rhs, state0, 0.0, t_end, opt);
    if (traj.raw.event) traj.events.push_back(*traj.raw.event);

    if (sample_times.empty()) {
        traj.times = traj.raw.times;
        traj.states = traj.raw.states;
    } else {
        for (double t : sample_times) {
            if (t > traj.raw.t_reached + 1e-12) break;
            traj.times.push_back(t);
            traj.states.push_back(traj.raw.eval(t));
        }
    }
    return traj;
}

struct EnergyTriple {
    double ek = 0, ep = 0, total = 0;
};

inline EnergyTriple energy(SystemKind kind, const Vec& s, const ParamSet& p) {
    EnergyTriple e;
    const double g = p.gamma;
    switch (kind) {
        case SystemKind::TwoDSpecial: {
            double G1 = s[0], be = s[1], al = s[2];
            if (!(G1 > 0)) throw NumericalEvent("positivity_loss", 0, "energy: G1 <= 0");
            e.ek = (al * al + be * be) / G1;
            e.ep = p.k("K") * std::pow(G1, g - 1);
            break;
        }
        case SystemKind::TwoDGeneral: {
            double G1 = s[0], G2 = s[1], G3 = s[2], a = s[3], b = s[4], c = s[5], d = s[6];
            double disc = G1 * G2 - G3 * G3;
            if (!(disc > 0)) throw NumericalEvent("positivity_loss", 0, "energy: moment matrix");
            double Delta = std::pow(disc, -1.0 / g);
            double scale = std::pow(Delta, 0.5 * (g + 1));
            e.ek = scale * ((a * a + c * c) * G1 + (b * b + d * d) * G2 +
                            2 * (a * b + c * d) * G3);
            e.ep = (2.0 * p.k("K2") / (g - 1)) * std::pow(Delta, -0.5 * (g - 1));
            break;
        }
        case SystemKind::TwoDWithShift: {
            auto aux = systems_detail::shift_aux(s, p);
            e.ek = aux.Ek;
            e.ep = aux.Ep;
            break;
        }
        case SystemKind::ThreeD: {
            double al = s[0], be = s[1], G1 = s[2];
            if (!(G1 > 0)) throw NumericalEvent("positivity_loss", 0, "energy: G1 <= 0");
            e.ek = al * al / G1 + be * be * p.H0;
            e.ep = p.k("Ktilde") * std::pow(G1, 1.5 * (g - 1));
            break;
        }
        case SystemKind::ConstDiv:
        case SystemKind::DryFriction:
        case SystemKind::AeroFriction: {
            double a = s[0], Gt = s[1];
            if (!(Gt > 0)) throw NumericalEvent("positivity_loss", 0, "energy: Gtilde <= 0");
            e.ek = a * a / Gt;
            // Ep = (2 Ktilde / ((g-1) D)) * Gt^{(g-1)D/2}
            e.ep = 2.0 * p.k("Ktilde") / ((g - 1) * p.D) * std::pow(Gt, 0.5 * (g - 1) * p.D);
            break;
        }
    }
    e.total = e.ek + e.ep;
    return e;
}

// Quadrature form of the symmetric 2D system for mu = 0.
struct ClosedFormMu0 {
    double C1 = 0, C2 = 0, E0 = 0;
    double G1_0 = 0, alpha0 = 0;
    double l = 0, gamma = 0;

    double radicand(double G1) const {
        return C2 * std::pow(G1, gamma) - C1 * C1 * G1 * G1 + (E0 - l * C1) * G1 -
               0.25 * l * l;
    }
    double alpha(double G1) const {
        double r = radicand(G1);
        if (r < -1e-13 * std::max(1.0, std::fabs(C2)))
            throw NumericalEvent("turning_point", G1,
                                 "closed form: alpha changes branch before this G1");
        double sgn = (alpha0 >= 0) ? 1.0 : -1.0;
        return sgn * std::sqrt(std::max(r, 0.0));
    }
    double beta(double G1) const { return C1 * G1 + 0.5 * l; }
    double t_of(double G1_target) const {
        if (G1_target == G1_0) return 0.0;
        auto integrand = [&](double G1) { return -1.0 / (2.0 * G1 * alpha(G1)); };
        double a = std::min(G1_0, G1_target), b = std::max(G1_0, G1_target);
        QuadResult q = integrate_1d(integrand, a, b, 1e-12);
        return (G1_target > G1_0) ? q.value : -q.value;
    }
};

inline ClosedFormMu0 closed_form_mu0(const Vec& state0, const ParamSet& p) {
    if (p.mu != 0) throw ValidationError("closed_form_mu0: requires mu = 0");
    ClosedFormMu0 cf;
    double G1 = state0[0], be = state0[1], al = state0[2];
    cf.G1_0 = G1;
    cf.alpha0 = al;
    cf.l = p.l;
    cf.gamma = p.gamma;
    cf.E0 = energy(SystemKind::TwoDSpecial, state0, p).total;
    cf.C1 = (2 * be - p.l) / (2 * G1);
    cf.C2 = (al * al + cf.C1 * cf.C1 * G1 * G1 - (cf.E0 - p.l * cf.C1) * G1 +
             0.25 * p.l * p.l) /
            std::pow(G1, p.gamma);
    return cf;
}

struct Equilibrium {
    Vec state;
    std::string tag;  // stable, unstable, center, degenerate
    std::vector<Complex> eigenvalues;
};

inline std::vector<Equilibrium> equilibria(SystemKind kind, const ParamSet& p) {
    std::vector<Equilibrium> out;
    switch (kind) {
        case SystemKind::TwoDSpecial: {
            Equilibrium e;
            e.state = {0, 0, 0};
            e.eigenvalues = {Complex(0, 0), Complex(-p.mu, p.l), Complex(-p.mu, -p.l)};
            e.tag = (p.mu > 0) ? "stable" : (p.l != 0 ? "center" : "stable");
            out.push_back(e);
            break;
        }
        case SystemKind::ConstDiv: {
            Equilibrium e;
            e.state = {0, 0};
            e.eigenvalues = {Complex(0, 0), Complex(0, 0)};
            e.tag = "stable";  // degenerate linearization; nonlinearly stable center
            out.push_back(e);
            break;
        }
        case SystemKind::DryFriction: {
            double ks = p.k("Ks12");
            Equilibrium origin;
            origin.state = {0, 0};
            origin.eigenvalues = {Complex(-0.5 * p.mu * ks, 0), Complex(0, 0)};
            origin.tag = "stable";
            out.push_back(origin);
            Equilibrium second;
            double astar = -0.5 * ks * p.mu;
            second.state = {astar, 0};
            second.eigenvalues = {Complex(-2 * astar - 0.5 * p.mu * ks, 0),
                                  Complex(-2 * astar, 0)};
            second.tag = "unstable";
            out.push_back(second);
            break;
        }
        case SystemKind::AeroFriction: {
            Equilibrium e;
            e.state = {0, 0};
            e.eigenvalues = {Complex(0, 0), Complex(0, 0)};
            e.tag = "stable";
            out.push_back(e);
            break;
        }
        default:
            throw ValidationError("equilibria: unsupported system kind");
    }
    return out;
}

struct FitResult {
    double C = 0;     // prefactor
    double p = 0;     // power of t
    double rms = 0;   // fit residual in log space
    bool reliable = true;
    std::size_t n_samples = 0;
};

// least-squares fit of log|y| (optionally + mu t) against log t over the last
// decade of the trajectory
inline FitResult asymptotic_fit(const Trajectory& traj, std::size_t comp,
                                bool with_exp_decay = false, double mu = 0) {
    if (traj.times.empty()) throw ValidationError("asymptotic_fit: empty trajectory");
    double t_end = traj.times.back();
    double t_lo = t_end / 10.0;
    std::vector<double> lts, lys;
    int sign_ref = 0;
    FitResult fr;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        double t = traj.times[i];
        if (t < t_lo || t <= 0) continue;
        double y = traj.states[i][comp];
        int sgn = (y > 0) - (y < 0);
        if (sgn == 0) {
            fr.reliable = false;
            continue;
        }
        if (sign_ref == 0) sign_ref = sgn;
        if (sgn != sign_ref) fr.reliable = false;
        double ly = std::log(std::fabs(y));
        if (with_exp_decay) ly += mu * t;
        lts.push_back(std::log(t));
        lys.push_back(ly);
    }
    fr.n_samples = lts.size();
    if (lts.size() < 5) {
        fr.reliable = false;
        return fr;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lts.size(); ++i) {
        sx += lts[i];
        sy += lys[i];
        sxx += lts[i] * lts[i];
        sxy += lts[i] * lys[i];
    }
    double n = static_cast<double>(lts.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double inter = (sy - slope * sx) / n;
    fr.p = slope;
    fr.C = std::exp(inter);
    double ss = 0;
    for (std::size_t i = 0; i < lts.size(); ++i)
        ss += sqr(lys[i] - (inter + slope * lts[i]));
    fr.rms = std::sqrt(ss / n);
    return fr;
}

inline std::vector<double> log_spaced(double t_lo, double t_hi, std::size_t n) {
    std::vector<double> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(t_lo * std::pow(t_hi / t_lo, static_cast<double>(i) /
                                                        static_cast<double>(n - 1)));
    return out;
}

struct PortraitOrbit {
    Vec seed;
    Trajectory forward;
    Trajectory backward;  // times are |s| along reversed time
};

inline std::vector<PortraitOrbit> phase_portrait(SystemKind kind, const ParamSet& p,
                                                 const std::vector<Vec>& seeds,
                                                 double t_end, double tol = 1e-10) {
    std::vector<PortraitOrbit> out(seeds.size());
    parallel_for(seeds.size(), [&](std::size_t i) {
        PortraitOrbit orb;
        orb.seed = seeds[i];
        orb.forward = integrate_system(kind, seeds[i], p, t_end, tol);
        // backward branch: integrate the negated right-hand side
        ParamSet pc = p;
        Trajectory bwd;
        bwd.kind = kind;
        bwd.params = p;
        bwd.layout = state_layout(kind);
        OdeOptions opt;
        opt.atol = opt.rtol = tol;
        opt.event_fn = [&](double t, const Vec& s) {
            return systems_detail::guard(kind, pc, t, s);
        };
        auto rhs = [&](double t, const Vec& s, Vec& ds) {
            system_rhs(kind, pc, -t, s, ds);
            for (double& v : ds) v = -v;
        };
        bwd.raw = integrate_ode(rhs, seeds[i], 0.0, t_end, opt);
        bwd.times = bwd.raw.times;
        bwd.states = bwd.raw.states;
        if (bwd.raw.event) bwd.events.push_back(*bwd.raw.event);
        orb.backward = std::move(bwd);
        out[i] = std::move(orb);
    });
    return out;
}

}  // namespace gasflow
