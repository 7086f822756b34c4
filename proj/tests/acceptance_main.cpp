// End-to-end acceptance checks. Each check prints exactly one PASS/FAIL line;
// the process exits nonzero if any check fails.
//
// Usage: acceptance <cli-binary> <scratch-dir>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gasflow/exact_solution.hpp"
#include "gasflow/fields.hpp"
#include "gasflow/systems.hpp"
#include "gasflow/verify.hpp"
#include "helpers.hpp"

namespace fs = std::filesystem;
using namespace gasflow;
using nlohmann::json;
using gasflow_tests::make_algebraic_solution;
using gasflow_tests::radial_field;

namespace {

std::string g_cli;
fs::path g_work;

int run_cli(const std::string& args, const fs::path& log) {
    std::string cmd = g_cli + " " + args + " > " + log.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -2;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool approx(double got, double want, double rel, std::string& detail,
            const std::string& label) {
    double err = std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
    if (err <= rel) return true;
    detail += " " + label + "=" + format_double(got) + " want " + format_double(want) +
              " (rel err " + format_double(err) + ")";
    return false;
}

double tail_mean(const Trajectory& tr, std::size_t comp,
                 const std::function<double(double, double)>& xf, int count = 10) {
    double s = 0;
    int used = 0;
    for (std::size_t i = tr.times.size(); i-- > 0 && used < count;) {
        s += xf(tr.times[i], tr.states[i][comp]);
        ++used;
    }
    return s / used;
}

// ---- individual checks ------------------------------------------------------

bool check_field_roots_cli(std::string& detail) {
    bool ok = true;
    for (int n : {2, 3}) {
        fs::path dir = g_work / ("roots_n" + std::to_string(n));
        fs::create_directories(dir);
        int rc = run_cli("field roots --n " + std::to_string(n) + " --out " + dir.string(),
                         dir / "stdout.json");
        if (rc != 0) {
            detail += " exit code " + std::to_string(rc);
            return false;
        }
        json j = json::parse(slurp(dir / "roots.json"));
        auto roots = j.at("roots");
        if (static_cast<int>(roots.size()) != n) {
            detail += " expected " + std::to_string(n) + " roots";
            ok = false;
            continue;
        }
        for (int i = 0; i < n; ++i) {
            double r = roots[static_cast<std::size_t>(i)].get<double>();
            if (std::fabs(r - (i + 1.0)) > 1e-10) {
                detail += " root " + format_double(r) + " vs " + std::to_string(i + 1);
                ok = false;
            }
        }
    }
    return ok;
}

bool check_minor_sum_identities(std::string& detail) {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> ux(-3.0, 3.0);
    double worst = 0;
    for (int n : {2, 3}) {
        FieldSpec f = radial_field(n);
        for (int pt = 0; pt < 100; ++pt) {
            Vec x(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d) x[static_cast<std::size_t>(d)] = ux(rng);
            for (int m = 2; m <= n; ++m) {
                JmReport rep = jm(f.chart, f, x, m);
                for (const auto& kv : rep.identity_residuals)
                    worst = std::max(worst, std::fabs(kv.second));
            }
        }
    }
    std::uniform_real_distribution<double> uk(-0.8, 0.8), ua(0.2, 1.0), uf(0.3, 2.0),
        up(0.0, 2.0 * M_PI);
    std::uniform_int_distribution<int> unt(1, 3);
    for (int prof = 0; prof < 20; ++prof) {
        double K = uk(rng);
        std::vector<std::array<double, 3>> terms;
        int nt = unt(rng);
        for (int k = 0; k < nt; ++k) terms.push_back({ua(rng), uf(rng), up(rng)});
        FieldSpec f = plane_shear_field(K, SmoothFn::trig_poly(terms));
        for (int pt = 0; pt < 100; ++pt) {
            Vec x{ux(rng), ux(rng)};
            JmReport rep = jm(f.chart, f, x, 2);
            for (const auto& kv : rep.identity_residuals)
                worst = std::max(worst, std::fabs(kv.second));
        }
    }
    if (worst >= 1e-8) {
        detail += " max residual " + format_double(worst);
        return false;
    }
    return true;
}

bool check_transport_residuals(std::string& detail) {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uk(-0.8, 0.8), up(0.0, 2 * M_PI);
    double worst_plane = 0;
    for (int prof = 0; prof < 5; ++prof) {
        FieldSpec f = plane_shear_field(
            uk(rng), SmoothFn::trig_poly({{0.5, 1.1, up(rng)}, {0.25, 0.6, up(rng)}}));
        for (int pt = 0; pt < 200; ++pt) {
            Vec r = a2_residual(f.chart, f, Vec{ux(rng), ux(rng)});
            for (double v : r) worst_plane = std::max(worst_plane, std::fabs(v));
        }
    }
    FieldSpec impl = implicit_characteristic_field(
        SmoothFn::tanh_fn(0.5), SmoothFn::trig_poly({{0.4, 0.9, 0.3}}));
    for (int pt = 0; pt < 200; ++pt) {
        Vec r = a2_residual(impl.chart, impl, Vec{ux(rng), ux(rng)});
        for (double v : r) worst_plane = std::max(worst_plane, std::fabs(v));
    }
    bool ok = true;
    if (worst_plane >= 1e-9) {
        detail += " plane residual " + format_double(worst_plane);
        ok = false;
    }
    double worst_sphere = 0;
    SmoothFn psi1 = SmoothFn::trig_poly({{0.3, 1.0, 0.4}});
    std::uniform_real_distribution<double> uphi(-2.5, 2.5), ufrac(0.0, 1.0);
    for (double C : {2.0, 4.0}) {
        double s0 = 1.0 / std::sqrt(C) + 0.05;
        double th_lo = std::asin(s0), th_hi = M_PI - std::asin(s0);
        for (int branch : {1, -1}) {
            FieldSpec f = sphere_field(C, psi1, branch);
            for (int pt = 0; pt < 200; ++pt) {
                Vec x{uphi(rng), th_lo + ufrac(rng) * (th_hi - th_lo)};
                Vec r = a2_residual(f.chart, f, x);
                for (double v : r) worst_sphere = std::max(worst_sphere, std::fabs(v));
            }
        }
    }
    if (worst_sphere >= 1e-6) {
        detail += " sphere residual " + format_double(worst_sphere);
        ok = false;
    }
    return ok;
}

bool check_planar_asymptotics(std::string& detail) {
    const double gamma = 1.4, K1 = (gamma - 1.0) * 1.0;
    ParamSet p;
    p.gamma = gamma;
    p.mu = 0.3;
    p.l = 0.0;
    p.K["K"] = 1.0;
    auto samples = log_spaced(1.0, 1e4, 400);
    Trajectory tr = integrate_system(SystemKind::TwoDSpecial, Vec{1.0, 0.2, 0.5}, p, 1e4,
                                     1e-10, samples);
    if (!tr.events.empty()) {
        detail += " integration stopped: " + tr.events[0].kind;
        return false;
    }
    bool ok = true;
    double ta = tail_mean(tr, 2, [](double t, double y) { return t * y; });
    ok &= approx(ta, 1.0 / (2.0 * gamma), 0.02, detail, "t*alpha");
    FitResult fit = asymptotic_fit(tr, 0);
    ok &= approx(fit.p, -1.0 / gamma, 0.03, detail, "G1 exponent");

    p.l = 0.5;
    Trajectory tr2 = integrate_system(SystemKind::TwoDSpecial, Vec{1.0, 0.2, 0.5}, p, 1e4,
                                      1e-10, samples);
    if (!tr2.events.empty()) {
        detail += " rotating run stopped: " + tr2.events[0].kind;
        return false;
    }
    double want = std::pow((p.l * p.l + p.mu * p.mu) / (2.0 * K1 * p.mu * gamma),
                           1.0 / gamma);
    double got = tail_mean(tr2, 0,
                           [gamma](double t, double y) { return y * std::pow(t, 1.0 / gamma); });
    ok &= approx(got, want, 0.05, detail, "G1 prefactor");
    return ok;
}

bool check_general_moment_decay(std::string& detail) {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> ue(-0.5, 0.5);
    ParamSet p;
    p.gamma = 1.4;
    p.K["K2"] = 1.0;
    auto samples = log_spaced(1.0, 1e4, 200);
    bool ok = true;
    int accepted = 0;
    while (accepted < 10) {
        double a = ue(rng), b = ue(rng), c = ue(rng), d = ue(rng);
        Mat A0(2);
        A0(0, 0) = a;
        A0(0, 1) = b;
        A0(1, 0) = c;
        A0(1, 1) = d;
        bool on_negative_axis = false;
        for (const Complex& z : eigenvalues2(A0))
            if (std::fabs(z.imag()) < 1e-8 && z.real() <= 0) on_negative_axis = true;
        if (on_negative_axis) continue;
        ++accepted;
        Trajectory tr = integrate_system(SystemKind::TwoDGeneral,
                                         Vec{1.0, 1.0, 0.0, a, b, c, d}, p, 1e4, 1e-10,
                                         samples);
        if (!tr.events.empty()) {
            detail += " trial " + std::to_string(accepted) +
                      " stopped: " + tr.events[0].kind;
            ok = false;
            continue;
        }
        double da = tail_mean(tr, 3, [](double t, double y) { return t * y; }, 5);
        double dd = tail_mean(tr, 6, [](double t, double y) { return t * y; }, 5);
        double db = tail_mean(tr, 4, [](double t, double y) { return t * y; }, 5);
        double dc = tail_mean(tr, 5, [](double t, double y) { return t * y; }, 5);
        double delta = 0.5 * (da + dd);
        if (!(delta > 0.5)) {
            detail += " trial " + std::to_string(accepted) + " delta=" +
                      format_double(delta);
            ok = false;
        }
        if (std::fabs(da - dd) > 0.05 * std::fabs(delta)) {
            detail += " trial " + std::to_string(accepted) + " diag spread " +
                      format_double(std::fabs(da - dd) / delta);
            ok = false;
        }
        if (std::fabs(db) > 0.05 * delta || std::fabs(dc) > 0.05 * delta) {
            detail += " trial " + std::to_string(accepted) + " off-diag t*b=" +
                      format_double(db) + " t*c=" + format_double(dc);
            ok = false;
        }
    }
    return ok;
}

bool check_spatial_asymptotics(std::string& detail) {
    const double gamma = 1.4, rate = 1.0 / (3.0 * gamma - 1.0);
    auto samples = log_spaced(1.0, 1e4, 300);
    auto run = [&](double mu, int delta, double H0, Vec s0) {
        ParamSet p;
        p.gamma = gamma;
        p.mu = mu;
        p.delta_flag = delta;
        p.H0 = H0;
        p.K["Ktilde"] = 1.0;
        return integrate_system(SystemKind::ThreeD, s0, p, 1e4, 1e-10, samples);
    };
    bool ok = true;

    Trajectory free = run(0.0, 0, 0.0, Vec{0.5, 0.0, 1.0});
    double ta = tail_mean(free, 0, [](double t, double y) { return t * y; });
    ok &= approx(ta, 1.0, 0.05, detail, "undamped t*alpha");

    Trajectory damped = run(0.3, 0, 1.0, Vec{0.5, 0.3, 1.0});
    ta = tail_mean(damped, 0, [](double t, double y) { return t * y; });
    ok &= approx(ta, rate, 0.05, detail, "damped t*alpha");

    Trajectory rotating = run(0.3, 1, 1.0, Vec{0.5, 0.3, 1.0});
    ta = tail_mean(rotating, 0, [](double t, double y) { return t * y; });
    ok &= approx(ta, rate, 0.05, detail, "rotating t*alpha");
    double tb = tail_mean(rotating, 1, [](double t, double y) { return t * y; });
    ok &= approx(tb, rate / 0.3, 0.05, detail, "rotating t*beta");
    for (const Trajectory* tr : {&free, &damped, &rotating})
        if (!tr->events.empty()) {
            detail += " integration stopped: " + tr->events[0].kind;
            ok = false;
        }
    return ok;
}

bool check_energy_laws(std::string& detail) {
    bool ok = true;
    auto conserved = [&](SystemKind kind, ParamSet p, Vec s0, const char* label) {
        Trajectory tr = integrate_system(kind, s0, p, 10.0, 1e-11);
        double e0 = energy(kind, s0, p).total;
        double worst = 0;
        for (const Vec& s : tr.states)
            worst = std::max(worst,
                             std::fabs(energy(kind, s, p).total - e0) / std::fabs(e0));
        if (worst >= 1e-7) {
            detail += std::string(" ") + label + " energy drift " + format_double(worst);
            ok = false;
        }
    };
    ParamSet p2;
    p2.gamma = 1.4;
    p2.l = 0.5;
    p2.K["K"] = 1.0;
    conserved(SystemKind::TwoDSpecial, p2, Vec{1.0, 0.3, 0.2}, "planar");
    ParamSet pc;
    pc.gamma = 1.4;
    pc.D = 2.0;
    pc.K["Ktilde"] = 0.5;
    conserved(SystemKind::ConstDiv, pc, Vec{0.4, 0.9}, "amplitude");
    ParamSet p3;
    p3.gamma = 1.4;
    p3.H0 = 1.0;
    p3.K["Ktilde"] = 0.5;
    conserved(SystemKind::ThreeD, p3, Vec{0.3, 0.0, 1.0}, "spatial");

    auto dissipation = [&](SystemKind kind, ParamSet p, Vec s0, const char* label) {
        Trajectory tr = integrate_system(kind, s0, p, 10.0, 1e-11);
        const double h = 1e-3;
        for (double t = 1.0; t <= 8.0; t += 1.0) {
            Vec sp = tr.raw.eval(t + h), sm = tr.raw.eval(t - h), sc = tr.raw.eval(t);
            double de = (energy(kind, sp, p).total - energy(kind, sm, p).total) / (2 * h);
            EnergyTriple e = energy(kind, sc, p);
            double rhs = -2.0 * p.mu * e.ek;
            double rel = std::fabs(de - rhs) /
                         std::max({std::fabs(de), std::fabs(rhs), p.mu * e.total});
            if (rel >= 1e-5) {
                detail += std::string(" ") + label + " dissipation residual " +
                          format_double(rel) + " at t=" + format_double(t);
                ok = false;
                break;
            }
        }
    };
    p2.mu = 0.3;
    dissipation(SystemKind::TwoDSpecial, p2, Vec{1.0, 0.3, 0.2}, "planar");
    p3.mu = 0.3;
    p3.delta_flag = 1;
    p3.H0 = 0.0;
    dissipation(SystemKind::ThreeD, p3, Vec{0.3, 0.2, 1.0}, "spatial");
    return ok;
}

bool check_assembled_convergence(std::string& detail) {
    auto b = make_algebraic_solution(4.0, 1.4, 0.3, 0.5, 1.0, 0.2, 0.1, 1.7);
    ResidualGrid grid;  // defaults: t in [0.5, 1.5], box [-2,2]^2, h = 0.1
    ResidualReport rep = pde_residual(b.sol, b.forcing, grid, true);
    bool ok = true;
    if (!(rep.order_overall >= 1.8 && rep.order_overall <= 2.2)) {
        detail += " observed order " + format_double(rep.order_overall);
        ok = false;
    }
    auto bad = make_algebraic_solution(4.0, 1.4, 0.3, 0.5, 1.0, 0.2, 0.1, 1.7, 1e-11,
                                       0.01);
    ResidualReport rep_bad = pde_residual(bad.sol, bad.forcing, grid, true);
    if (!(rep_bad.order_overall < 1.0)) {
        detail += " perturbed control converged with order " +
                  format_double(rep_bad.order_overall);
        ok = false;
    }
    return ok;
}

bool check_initial_compatibility(std::string& detail) {
    double Ep0 = matched_ep0(4.0, 1.4, 2);
    InitialData d = algebraic_initial_data(4.0, 1.4, 1.0, Ep0, 2);
    std::mt19937_64 rng(505);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<Vec> grid;
    for (int i = 0; i < 1000; ++i) grid.push_back(Vec{u(rng), u(rng)});
    CompatReport rep = compat_residual(d, CompatMode::radial, grid);
    if (rep.max_residual >= 1e-12) {
        detail += " max residual " + format_double(rep.max_residual);
        return false;
    }
    return true;
}

bool check_functional_identities(std::string& detail) {
    auto b = make_algebraic_solution(4.0, 1.4, 0.0, 0.5, 1.0, 0.2, 0.1, 5.3, 1e-12);
    QuadSpec spec;
    spec.tol = 1e-9;
    spec.tail_tol = 1e-9;
    std::vector<double> times{0.5, 1.4, 2.3, 3.2, 4.1, 5.0};
    IdentityTable table = functional_identities(b.sol, b.data.decay_s_rho,
                                                b.data.decay_s_p, 0.0, 0.5, times, spec,
                                                2e-3);
    bool ok = true;
    for (const auto& kv : table.max_residual)
        if (kv.second >= 1e-5) {
            detail += " " + kv.first + " residual " + format_double(kv.second);
            ok = false;
        }
    return ok;
}

bool check_interpolation_inequality(std::string& detail) {
    std::mt19937_64 rng(77);
    bool ok = true;
    for (int n : {2, 3}) {
        for (double gamma : {1.2, 1.4, 5.0 / 3.0}) {
            std::vector<std::vector<gasflow_tests::GaussianTerm>> mixes;
            for (int tr = 0; tr < 100; ++tr)
                mixes.push_back(gasflow_tests::random_mixture(rng, n));
            std::vector<double> margins(mixes.size());
            parallel_for(mixes.size(), [&](std::size_t i) {
                auto f = [&](const Vec& x) {
                    return gasflow_tests::eval_mixture(mixes[i], x);
                };
                Lemma51Result r = lemma51_check(f, gamma, n, 1.0, n == 2 ? 16.0 : 14.0,
                                                n == 2 ? 1e-7 : 1e-5);
                margins[i] = r.margin;
            });
            for (std::size_t i = 0; i < margins.size(); ++i)
                if (!(margins[i] >= -1e-10)) {
                    detail += " n=" + std::to_string(n) + " gamma=" +
                              format_double(gamma) + " trial " + std::to_string(i) +
                              " margin " + format_double(margins[i]);
                    ok = false;
                }
        }
    }
    return ok;
}

bool check_amplitude_phase_structure(std::string& detail) {
    ParamSet p;
    p.gamma = 1.4;
    p.mu = 0.4;
    p.mu1 = 0.4;
    p.D = 2.0;
    p.K["Ktilde"] = 0.5;
    p.K["Ks12"] = 1.0;
    bool ok = true;

    auto eq_cd = equilibria(SystemKind::ConstDiv, p);
    if (eq_cd.size() != 1 || eq_cd[0].tag != "stable") {
        detail += " unexpected amplitude equilibria";
        ok = false;
    }
    auto eq_dry = equilibria(SystemKind::DryFriction, p);
    if (eq_dry.size() != 2 || eq_dry[0].tag != "stable" || eq_dry[1].tag != "unstable" ||
        std::fabs(eq_dry[1].state[0] + 0.5 * p.mu * p.k("Ks12")) > 1e-12) {
        detail += " unexpected dry-friction equilibria";
        ok = false;
    }
    auto eq_aero = equilibria(SystemKind::AeroFriction, p);
    if (eq_aero.size() != 1 || eq_aero[0].tag != "stable") {
        detail += " unexpected aerodynamic equilibria";
        ok = false;
    }
    for (SystemKind kind :
         {SystemKind::ConstDiv, SystemKind::DryFriction, SystemKind::AeroFriction})
        for (const Equilibrium& eq : equilibria(kind, p)) {
            Vec ds(eq.state.size(), 1.0);
            system_rhs(kind, p, 0.0, eq.state, ds);
            for (double v : ds)
                if (std::fabs(v) > 1e-12) {
                    detail += " equilibrium of " + to_string(kind) + " is not a rest point";
                    ok = false;
                }
        }

    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> ua(-0.8, 0.8), ug(0.1, 1.0);
    for (SystemKind kind :
         {SystemKind::ConstDiv, SystemKind::DryFriction, SystemKind::AeroFriction}) {
        std::vector<Vec> seeds;
        for (int i = 0; i < 8; ++i) seeds.push_back(Vec{ua(rng), ug(rng)});
        auto orbits = phase_portrait(kind, p, seeds, 4.0, 1e-10);
        for (const PortraitOrbit& orb : orbits)
            for (const Trajectory* tr : {&orb.forward, &orb.backward})
                for (const Vec& s : tr->states)
                    for (double v : s)
                        if (!std::isfinite(v)) {
                            detail += " non-finite portrait state in " + to_string(kind);
                            ok = false;
                        }
    }

    // undamped amplitude flow: orbits map onto each other under a -> -a
    for (int i = 0; i < 4; ++i) {
        Vec seed{0.2 + 0.15 * i, 0.3 + 0.2 * i};
        Vec mirrored{-seed[0], seed[1]};
        auto orbits = phase_portrait(SystemKind::ConstDiv, p, {seed, mirrored}, 3.0, 1e-11);
        double t_common = std::min(orbits[0].forward.raw.t_reached,
                                   orbits[1].backward.raw.t_reached);
        for (double t = 0.25; t < t_common; t += 0.5) {
            Vec f = orbits[0].forward.raw.eval(t);
            Vec m = orbits[1].backward.raw.eval(t);
            if (std::fabs(f[0] + m[0]) > 1e-6 || std::fabs(f[1] - m[1]) > 1e-6) {
                detail += " reflection symmetry broken at t=" + format_double(t);
                ok = false;
            }
        }
    }
    return ok;
}

bool check_decay_feasibility(std::string& detail) {
    bool ok = true;
    FeasibleRegion r1 = corollary_feasible_params(0.0, 1.0, 1.4, 2);
    if (!r1.feasible) {
        detail += " undamped unit-rate region empty";
        ok = false;
    }
    FeasibleRegion r2 = corollary_feasible_params(0.5, 1.0 / 2.8, 1.4, 2);
    if (!r2.feasible) {
        detail += " damped slow-rate region empty";
        ok = false;
    }
    FeasibleRegion r3 = corollary_feasible_params(0.0, 0.1, 1.4, 2);
    if (r3.feasible) {
        detail += " very slow rate unexpectedly feasible";
        ok = false;
    }
    return ok;
}

bool compare_dirs(const fs::path& a, const fs::path& b, std::string& detail) {
    std::vector<fs::path> rel;
    for (const auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file()) rel.push_back(fs::relative(entry.path(), a));
    std::sort(rel.begin(), rel.end());
    if (rel.empty()) {
        detail += " no output files under " + a.string();
        return false;
    }
    for (const fs::path& r : rel) {
        if (!fs::exists(b / r)) {
            detail += " missing " + r.string();
            return false;
        }
        if (slurp(a / r) != slurp(b / r)) {
            detail += " differs: " + r.string();
            return false;
        }
    }
    return true;
}

bool check_determinism(std::string& detail) {
    bool ok = true;
    for (int rep = 1; rep <= 2; ++rep) {
        fs::path d = g_work / ("phase_rep" + std::to_string(rep));
        fs::create_directories(d);
        int rc = run_cli("ode phase --system const-div --Ktilde 0.5 --seeds 4 --seed 7 "
                         "--t-span 3 --out " + d.string(),
                         d / "stdout.json");
        if (rc != 0) {
            detail += " phase exit code " + std::to_string(rc);
            return false;
        }
        fs::path l = g_work / ("lemma_rep" + std::to_string(rep));
        fs::create_directories(l);
        rc = run_cli("verify lemma51 --n 2 --trials 5 --seed 42 --out " + l.string(),
                     l / "stdout.json");
        if (rc != 0) {
            detail += " lemma exit code " + std::to_string(rc);
            return false;
        }
    }
    ok &= compare_dirs(g_work / "phase_rep1", g_work / "phase_rep2", detail);
    ok &= compare_dirs(g_work / "lemma_rep1", g_work / "lemma_rep2", detail);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <cli-binary> <scratch-dir>\n");
        return 2;
    }
    g_cli = argv[1];
    g_work = argv[2];
    fs::create_directories(g_work);

    struct Entry {
        int id;
        const char* name;
        double limit;  // seconds; 0 = none
        std::function<bool(std::string&)> fn;
    };
    std::vector<Entry> entries{
        {1, "admissible divergencies via the command line", 1.0, check_field_roots_cli},
        {2, "minor-sum identities on profile families", 5.0, check_minor_sum_identities},
        {3, "self-transport residuals across chart families", 5.0,
         check_transport_residuals},
        {4, "planar long-time rates and prefactors", 30.0, check_planar_asymptotics},
        {5, "full planar moment matrix decay", 120.0, check_general_moment_decay},
        {6, "spatial long-time rates", 30.0, check_spatial_asymptotics},
        {7, "energy conservation and dissipation laws", 0.0, check_energy_laws},
        {8, "assembled flow satisfies the balance laws", 120.0,
         check_assembled_convergence},
        {9, "initial data compatibility", 0.0, check_initial_compatibility},
        {10, "moment-evolution identities by quadrature", 0.0,
         check_functional_identities},
        {11, "interpolation inequality on random mixtures", 0.0,
         check_interpolation_inequality},
        {12, "amplitude equilibria and phase structure", 0.0,
         check_amplitude_phase_structure},
        {13, "decay-parameter feasibility", 0.0, check_decay_feasibility},
        {14, "seeded runs are byte-identical", 0.0, check_determinism},
    };

    int failures = 0;
    for (const Entry& e : entries) {
        auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = e.fn(detail);
        } catch (const std::exception& ex) {
            detail += std::string(" exception: ") + ex.what();
            ok = false;
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                    start).count();
        if (ok && e.limit > 0 && secs > e.limit) {
            ok = false;
            detail += " time limit " + format_double(e.limit) + "s exceeded";
        }
        std::printf("%s %2d %s (%.1fs)%s\n", ok ? "PASS" : "FAIL", e.id, e.name, secs,
                    ok ? "" : (":" + detail).c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
