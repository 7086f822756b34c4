// Command-line front end: subcommand dispatch, JSON/flag configuration and
// deterministic CSV/JSON/SVG emission for the library operations.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "gasflow/common.hpp"
#include "gasflow/exact_solution.hpp"
#include "gasflow/fields.hpp"
#include "gasflow/geometry.hpp"
#include "gasflow/integrate.hpp"
#include "gasflow/io.hpp"
#include "gasflow/linalg.hpp"
#include "gasflow/quadrature.hpp"
#include "gasflow/systems.hpp"
#include "gasflow/verify.hpp"

namespace fs = std::filesystem;
using namespace gasflow;

namespace {

// ---- configuration plumbing -------------------------------------------------

struct Common {
    std::string config;
    std::string out = "out";
    unsigned long long seed = 0;
    bool dry = false;
};

// Maps JSON config keys to parsed CLI options; file values apply only when the
// flag was not given on the command line, and unknown keys are rejected.
struct Reg {
    std::map<std::string, std::pair<CLI::Option*, std::function<void(const json&)>>> entries;

    void add(CLI::Option* o, const std::string& key, double* v) {
        entries[key] = {o, [v](const json& j) { *v = j.get<double>(); }};
    }
    void add(CLI::Option* o, const std::string& key, int* v) {
        entries[key] = {o, [v](const json& j) { *v = j.get<int>(); }};
    }
    void add(CLI::Option* o, const std::string& key, unsigned long long* v) {
        entries[key] = {o, [v](const json& j) { *v = j.get<unsigned long long>(); }};
    }
    void add(CLI::Option* o, const std::string& key, std::string* v) {
        entries[key] = {o, [v](const json& j) { *v = j.get<std::string>(); }};
    }
    void add(CLI::Option* o, const std::string& key, bool* v) {
        entries[key] = {o, [v](const json& j) { *v = j.get<bool>(); }};
    }
    void add(CLI::Option* o, const std::string& key, std::vector<double>* v) {
        entries[key] = {o, [v](const json& j) { *v = j.get<std::vector<double>>(); }};
    }

    void apply(const std::string& path) {
        if (path.empty()) return;
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open config file: " + path);
        json cfg;
        try {
            in >> cfg;
        } catch (const std::exception& e) {
            throw ValidationError(std::string("malformed config: ") + e.what());
        }
        if (!cfg.is_object()) throw ValidationError("config root must be a JSON object");
        for (auto it = cfg.begin(); it != cfg.end(); ++it) {
            auto e = entries.find(it.key());
            if (e == entries.end())
                throw ValidationError("unknown config key: " + it.key());
            if (e->second.first == nullptr || e->second.first->count() == 0)
                e->second.second(it.value());
        }
    }
};

void add_common(CLI::App* cmd, Common& c, Reg& reg) {
    cmd->add_option("--config", c.config, "JSON configuration file");
    reg.add(cmd->add_option("--out", c.out, "output directory"), "out", &c.out);
    reg.add(cmd->add_option("--seed", c.seed, "random seed"), "seed", &c.seed);
    cmd->add_flag("--dry-run", c.dry, "validate configuration without computing");
}

void emit(const json& j) { std::fputs(dump_json(j).c_str(), stdout); }

bool dry_stop(const Common& c, const std::string& cmd) {
    if (!c.dry) return false;
    emit(json{{"command", cmd}, {"dry_run", true}, {"valid", true}});
    return true;
}

double nan_sentinel() { return std::numeric_limits<double>::quiet_NaN(); }

// ---- shared system parameter options ---------------------------------------

struct SysOpts {
    std::string system = "2d-special";
    double gamma = 1.4, l = 0, mu = 0, mu1 = 0, D = 2, M = 1, H0 = 0;
    int delta = 0;
    double K = 1.0, K2 = 1.0, Ktilde = 1.0, Ks12 = 1.0;
    std::vector<double> state0;
    double a0 = nan_sentinel(), gtilde0 = nan_sentinel();
    double t_end = 10, tol = 1e-10;
};

void add_sys(CLI::App* cmd, SysOpts& s, Reg& reg, bool with_state = true) {
    reg.add(cmd->add_option("--system", s.system, "system kind"), "system", &s.system);
    reg.add(cmd->add_option("--gamma", s.gamma, "adiabatic exponent"), "gamma", &s.gamma);
    reg.add(cmd->add_option("--l", s.l, "rotation rate"), "l", &s.l);
    reg.add(cmd->add_option("--mu", s.mu, "linear drag"), "mu", &s.mu);
    reg.add(cmd->add_option("--mu1", s.mu1, "aerodynamic drag"), "mu1", &s.mu1);
    reg.add(cmd->add_option("--delta", s.delta, "rotation switch (3d)"), "delta", &s.delta);
    reg.add(cmd->add_option("--D", s.D, "constant divergence"), "D", &s.D);
    reg.add(cmd->add_option("--mass", s.M, "total mass"), "mass", &s.M);
    reg.add(cmd->add_option("--H0", s.H0, "axial moment (3d)"), "H0", &s.H0);
    reg.add(cmd->add_option("--K", s.K, "pressure constant K"), "K", &s.K);
    reg.add(cmd->add_option("--K2", s.K2, "pressure constant K2"), "K2", &s.K2);
    reg.add(cmd->add_option("--Ktilde", s.Ktilde, "pressure constant Ktilde"), "Ktilde",
            &s.Ktilde);
    reg.add(cmd->add_option("--Ks12", s.Ks12, "friction shape constant"), "Ks12", &s.Ks12);
    reg.add(cmd->add_option("--t-end", s.t_end, "integration end time"), "t_end", &s.t_end);
    reg.add(cmd->add_option("--tol", s.tol, "integration tolerance"), "tol", &s.tol);
    if (with_state) {
        reg.add(cmd->add_option("--state0", s.state0, "initial state vector"), "state0",
                &s.state0);
        reg.add(cmd->add_option("--a0", s.a0, "initial amplitude (2-state systems)"),
                "a0", &s.a0);
        reg.add(cmd->add_option("--gtilde0", s.gtilde0,
                                "initial inverse moment (2-state systems)"),
                "gtilde0", &s.gtilde0);
    }
}

ParamSet make_params(const SysOpts& s) {
    ParamSet p;
    p.gamma = s.gamma;
    p.l = s.l;
    p.mu = s.mu;
    p.mu1 = s.mu1;
    p.delta_flag = s.delta;
    p.D = s.D;
    p.M = s.M;
    p.H0 = s.H0;
    p.K["K"] = s.K;
    p.K["K2"] = s.K2;
    p.K["Ktilde"] = s.Ktilde;
    p.K["Ks12"] = s.Ks12;
    p.validate();
    return p;
}

Vec make_state(const SysOpts& s, SystemKind kind) {
    if (!s.state0.empty()) {
        if (s.state0.size() != state_layout(kind).size())
            throw ValidationError("state0 has the wrong dimension for this system");
        return s.state0;
    }
    if (state_layout(kind).size() == 2 &&
        (std::isfinite(s.a0) || std::isfinite(s.gtilde0))) {
        double a = std::isfinite(s.a0) ? s.a0 : 0.0;
        double g = std::isfinite(s.gtilde0) ? s.gtilde0 : 1.0;
        return Vec{a, g};
    }
    throw ValidationError("no initial state: pass --state0 (or --a0/--gtilde0)");
}

json params_json(const ParamSet& p) {
    json k = json::object();
    for (const auto& kv : p.K) k[kv.first] = kv.second;
    return json{{"gamma", p.gamma}, {"l", p.l},       {"mu", p.mu},
                {"mu1", p.mu1},     {"delta", p.delta_flag}, {"D", p.D},
                {"mass", p.M},      {"H0", p.H0},     {"constants", k}};
}

json event_json(const OdeEvent& ev) {
    return json{{"kind", ev.kind}, {"t", ev.t}};
}

// ---- assembled planar solution ---------------------------------------------

struct SolOpts {
    double a_data = 4, gamma = 1.4, mu = 0, l = 0, G1_0 = 1;
    double alpha0 = 0.2, beta0 = 0;
    double t_max = 2, tol = 1e-11;
    double perturb = 0;  // relative perturbation of alpha(t), negative control
};

void add_sol(CLI::App* cmd, SolOpts& s, Reg& reg) {
    reg.add(cmd->add_option("--a", s.a_data, "algebraic data exponent (a > 3)"), "a",
            &s.a_data);
    reg.add(cmd->add_option("--gamma", s.gamma, "adiabatic exponent"), "gamma", &s.gamma);
    reg.add(cmd->add_option("--mu", s.mu, "linear drag"), "mu", &s.mu);
    reg.add(cmd->add_option("--l", s.l, "rotation rate"), "l", &s.l);
    reg.add(cmd->add_option("--G1-0", s.G1_0, "initial inverse moment"), "G1_0", &s.G1_0);
    reg.add(cmd->add_option("--alpha0", s.alpha0, "initial radial amplitude"), "alpha0",
            &s.alpha0);
    reg.add(cmd->add_option("--beta0", s.beta0, "initial angular amplitude"), "beta0",
            &s.beta0);
    reg.add(cmd->add_option("--t-max", s.t_max, "assembled time span"), "t_max", &s.t_max);
    reg.add(cmd->add_option("--tol", s.tol, "integration tolerance"), "tol", &s.tol);
    reg.add(cmd->add_option("--perturb", s.perturb,
                            "relative perturbation of alpha(t) (negative control)"),
            "perturb", &s.perturb);
}

struct SolutionBundle {
    SolOpts opts;
    InitialData data;
    std::shared_ptr<Trajectory> coeffs;
    GasSolution sol;
    ForcingFn forcing;
};

SolutionBundle make_solution(const SolOpts& o) {
    SolutionBundle b;
    b.opts = o;
    double Ep0 = matched_ep0(o.a_data, o.gamma, 2);
    b.data = algebraic_initial_data(o.a_data, o.gamma, o.G1_0, Ep0, 2);

    ParamSet p;
    p.gamma = o.gamma;
    p.mu = o.mu;
    p.l = o.l;
    p.K["K"] = Ep0 * std::pow(o.G1_0, 1.0 - o.gamma);
    Vec state0{o.G1_0, o.beta0, o.alpha0};
    double span = o.t_max + std::max(0.5, 0.1 * o.t_max);
    Trajectory traj =
        integrate_system(SystemKind::TwoDSpecial, state0, p, span, std::max(o.tol, 1e-13));
    if (!traj.events.empty())
        throw NumericalEvent(traj.events[0].kind, traj.events[0].t,
                             "coefficient integration stopped before t_max");
    b.coeffs = std::make_shared<Trajectory>(std::move(traj));

    auto coeffs = b.coeffs;
    double fac = 1.0 + o.perturb;
    auto A = [coeffs, fac](double t) {
        double tc = std::min(std::max(t, 0.0), coeffs->raw.t_reached);
        Vec s = coeffs->raw.eval(tc);
        double be = s[1], al = fac * s[2];
        Mat m(2);
        m(0, 0) = al;
        m(0, 1) = be;
        m(1, 0) = -be;
        m(1, 1) = al;
        return m;
    };
    auto zero_b = [](double) { return Vec{0.0, 0.0}; };
    b.sol = assemble(2, A, zero_b, b.data.rho0, b.data.p0, o.gamma, o.t_max,
                     std::max(o.tol, 1e-13));
    double mu = o.mu, l = o.l;
    b.forcing = [mu, l](double, const Vec&, const Vec& v) {
        return Vec{-mu * v[0] + l * v[1], -mu * v[1] - l * v[0]};
    };
    return b;
}

// ---- field construction shared by the field subcommands ---------------------

struct FieldOpts {
    std::string family = "radial";
    int n = 2;
    double K = 0.5;
    double fscale = 1.0, famp = 1.0;
    double C = 2.0;
    int branch = 1;
    double psi1 = 0.0;
    double half_width = 3.0;
    int samples = 100;
};

FieldSpec make_field(const FieldOpts& o) {
    if (o.family == "radial") {
        FieldSpec fs;
        fs.chart = ChartMetric::euclidean(o.n);
        fs.family = "radial";
        fs.eval = [](const Vec& x) { return x; };
        fs.jacobian = [n = o.n](const Vec&) { return Mat::identity(n); };
        return fs;
    }
    if (o.family == "plane-shear")
        return plane_shear_field(o.K, SmoothFn::tanh_fn(o.fscale));
    if (o.family == "implicit") {
        double amp = o.famp, sc = o.fscale;
        SmoothFn F{[amp, sc](double x) { return amp * std::tanh(sc * x); },
                   [amp, sc](double x) { return amp * sc / sqr(std::cosh(sc * x)); }};
        return implicit_characteristic_field(F);
    }
    if (o.family == "sphere")
        return sphere_field(o.C, SmoothFn::constant(o.psi1), o.branch);
    throw ValidationError("unknown field family: " + o.family);
}

// interior sample points of a field's admissible region
std::vector<Vec> field_samples(const FieldSpec& fs, const FieldOpts& o,
                               unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec> pts;
    if (fs.family == "sphere-strip") {
        double C = o.C;
        double smin = 1.0 / std::sqrt(C) + 0.05;
        if (smin >= 1.0) throw ValidationError("sphere sampling: strip too narrow");
        double th_lo = std::asin(smin), th_hi = M_PI - std::asin(smin);
        std::uniform_real_distribution<double> uth(th_lo, th_hi), uph(-2.5, 2.5);
        for (int i = 0; i < o.samples; ++i) pts.push_back(Vec{uph(rng), uth(rng)});
        return pts;
    }
    std::uniform_real_distribution<double> u(-o.half_width, o.half_width);
    int n = fs.chart.dim;
    while (static_cast<int>(pts.size()) < o.samples) {
        Vec x(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) x[static_cast<std::size_t>(d)] = u(rng);
        try {
            fs.check_point(x);
            fs.eval(x);
        } catch (const ValidationError&) {
            continue;
        }
        pts.push_back(std::move(x));
    }
    return pts;
}

// ---- command handlers -------------------------------------------------------

void run_field_roots(const Common& c, int n) {
    if (dry_stop(c, "field roots")) return;
    std::vector<double> roots = divergence_roots(n);
    json arr = json::array();
    for (double r : roots) {
        double nearest = std::round(r);
        if (std::fabs(r - nearest) < 1e-9)
            arr.push_back(static_cast<long long>(nearest));
        else
            arr.push_back(r);
    }
    json out{{"n", n}, {"roots", arr}};
    emit(out);
    write_json(fs::path(c.out) / "roots.json", out);
}

void run_field_check(const Common& c, const FieldOpts& o) {
    if (dry_stop(c, "field check")) return;
    FieldSpec field = make_field(o);
    std::vector<Vec> pts = field_samples(field, o, c.seed);
    CsvWriter csv(fs::path(c.out) / "field_check.csv",
                  {"index", "a2_residual", "divergence", "quadratic", "alternating"});
    double max_a2 = 0, max_ident = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        Vec r = a2_residual(field.chart, field, pts[i]);
        double a2 = 0;
        for (double v : r) a2 = std::max(a2, std::fabs(v));
        JmReport rep = jm(field.chart, field, pts[i], 2);
        double quad = std::fabs(rep.identity_residuals.at("quadratic"));
        double alt = std::fabs(rep.identity_residuals.at("alternating"));
        max_a2 = std::max(max_a2, a2);
        max_ident = std::max(max_ident, std::max(quad, alt));
        csv.row({static_cast<double>(i), a2, rep.divergence, quad, alt});
    }
    json out{{"family", field.family},
             {"samples", static_cast<long long>(pts.size())},
             {"max_a2_residual", max_a2},
             {"max_identity_residual", max_ident}};
    emit(out);
    write_json(fs::path(c.out) / "field_check.json", out);
}

void run_field_sphere(const Common& c, const FieldOpts& o) {
    if (dry_stop(c, "field sphere")) return;
    FieldOpts so = o;
    so.family = "sphere";
    FieldSpec field = make_field(so);
    std::vector<Vec> pts = field_samples(field, so, c.seed);
    CsvWriter csv(fs::path(c.out) / "sphere_field.csv",
                  {"phi", "theta", "lambda1", "lambda2", "a2_residual"});
    double max_a2 = 0;
    for (const Vec& x : pts) {
        Vec lam = field.eval(x);
        Vec r = a2_residual(field.chart, field, x);
        double a2 = std::max(std::fabs(r[0]), std::fabs(r[1]));
        max_a2 = std::max(max_a2, a2);
        csv.row({x[0], x[1], lam[0], lam[1], a2});
    }
    json out{{"C", o.C},
             {"branch", o.branch},
             {"samples", static_cast<long long>(pts.size())},
             {"max_a2_residual", max_a2}};
    emit(out);
    write_json(fs::path(c.out) / "sphere_field.json", out);
}

void run_field_characteristics(const Common& c, const FieldOpts& o, double x1_max,
                               int steps) {
    if (dry_stop(c, "field characteristics")) return;
    double amp = o.famp, sc = o.fscale;
    SmoothFn F{[amp, sc](double x) { return amp * std::tanh(sc * x); },
               [amp, sc](double x) { return amp * sc / sqr(std::cosh(sc * x)); }};
    CsvWriter csv(fs::path(c.out) / "characteristics.csv",
                  {"x1", "x2", "z", "lambda1", "lambda2"});
    double max_l = 0;
    for (int i = 0; i <= steps; ++i)
        for (int j = 0; j <= steps; ++j) {
            double x1 = -x1_max + 2 * x1_max * i / steps;
            double x2 = -o.half_width + 2 * o.half_width * j / steps;
            CharSolveResult r = characteristics_solve(F, Vec{x1, x2});
            max_l = std::max(max_l, std::fabs(r.lambda1));
            csv.row({x1, x2, r.z, r.lambda1, r.lambda2});
        }
    json out{{"x1_max", x1_max},
             {"steps", steps},
             {"max_lambda1", max_l}};
    emit(out);
    write_json(fs::path(c.out) / "characteristics.json", out);
}

void run_ode(const Common& c, const SysOpts& s) {
    if (dry_stop(c, "ode run")) return;
    SystemKind kind = parse_system_kind(s.system);
    ParamSet p = make_params(s);
    Vec state0 = make_state(s, kind);
    Trajectory traj = integrate_system(kind, state0, p, s.t_end, s.tol);

    std::vector<std::string> cols{"t"};
    for (const std::string& name : traj.layout) cols.push_back(name);
    cols.push_back("ek");
    cols.push_back("ep");
    cols.push_back("e");
    CsvWriter csv(fs::path(c.out) / "trajectory.csv", cols);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        std::vector<double> row{traj.times[i]};
        for (double v : traj.states[i]) row.push_back(v);
        double ek = nan_sentinel(), ep = nan_sentinel(), e = nan_sentinel();
        try {
            EnergyTriple tri = energy(kind, traj.states[i], p);
            ek = tri.ek;
            ep = tri.ep;
            e = tri.total;
        } catch (const NumericalEvent&) {
        }
        row.push_back(ek);
        row.push_back(ep);
        row.push_back(e);
        csv.row(row);
    }
    json out{{"system", s.system},
             {"params", params_json(p)},
             {"t_end_requested", s.t_end},
             {"t_reached", traj.raw.t_reached},
             {"steps", static_cast<long long>(traj.raw.steps_accepted)},
             {"final_state", traj.states.back()},
             {"events", json::array()}};
    for (const OdeEvent& ev : traj.events) out["events"].push_back(event_json(ev));
    emit(out);
    write_json(fs::path(c.out) / "run.json", out);
    if (!traj.events.empty())
        throw NumericalEvent(traj.events[0].kind, traj.events[0].t,
                             "integration stopped by a numerical event");
}

void run_ode_phase(const Common& c, const SysOpts& s, int n_seeds, double a_max,
                   double g_max, double t_span) {
    if (dry_stop(c, "ode phase")) return;
    SystemKind kind = parse_system_kind(s.system);
    if (state_layout(kind).size() != 2)
        throw ValidationError("ode phase: only the 2-state amplitude systems");
    ParamSet p = make_params(s);

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> ua(-a_max, a_max), ug(0.05 * g_max, g_max);
    std::vector<Vec> seeds;
    for (int i = 0; i < n_seeds; ++i) seeds.push_back(Vec{ua(rng), ug(rng)});

    std::vector<PortraitOrbit> orbits = phase_portrait(kind, p, seeds, t_span, s.tol);

    CsvWriter csv(fs::path(c.out) / "orbits.csv",
                  {"orbit", "direction", "t", "a", "gtilde"});
    std::vector<SvgPolyline> lines;
    for (std::size_t i = 0; i < orbits.size(); ++i) {
        SvgPolyline fwd_line, bwd_line;
        fwd_line.color = "#1f77b4";
        bwd_line.color = "#7fb3d5";
        for (std::size_t k = 0; k < orbits[i].forward.times.size(); ++k) {
            const Vec& st = orbits[i].forward.states[k];
            csv.row({static_cast<double>(i), 1.0, orbits[i].forward.times[k], st[0], st[1]});
            fwd_line.pts.emplace_back(st[1], st[0]);
        }
        for (std::size_t k = 0; k < orbits[i].backward.times.size(); ++k) {
            const Vec& st = orbits[i].backward.states[k];
            csv.row({static_cast<double>(i), -1.0, orbits[i].backward.times[k], st[0], st[1]});
            bwd_line.pts.emplace_back(st[1], st[0]);
        }
        lines.push_back(std::move(fwd_line));
        lines.push_back(std::move(bwd_line));
    }
    std::vector<SvgMarker> markers;
    json eq_json = json::array();
    for (const Equilibrium& eq : equilibria(kind, p)) {
        SvgMarker m;
        m.x = eq.state[1];
        m.y = eq.state[0];
        m.label = eq.tag;
        markers.push_back(m);
        json ev = json::array();
        for (const Complex& z : eq.eigenvalues)
            ev.push_back(json{{"re", z.real()}, {"im", z.imag()}});
        eq_json.push_back(json{{"state", eq.state}, {"tag", eq.tag}, {"eigenvalues", ev}});
    }
    write_svg_portrait(fs::path(c.out) / "portrait.svg", lines, markers, "Gtilde", "a");
    json out{{"system", s.system},
             {"seeds", static_cast<long long>(seeds.size())},
             {"equilibria", eq_json}};
    emit(out);
    write_json(fs::path(c.out) / "phase.json", out);
}

void run_ode_equilibria(const Common& c, const SysOpts& s) {
    if (dry_stop(c, "ode equilibria")) return;
    SystemKind kind = parse_system_kind(s.system);
    ParamSet p = make_params(s);
    json arr = json::array();
    for (const Equilibrium& eq : equilibria(kind, p)) {
        json ev = json::array();
        for (const Complex& z : eq.eigenvalues)
            ev.push_back(json{{"re", z.real()}, {"im", z.imag()}});
        arr.push_back(json{{"state", eq.state}, {"tag", eq.tag}, {"eigenvalues", ev}});
    }
    json out{{"system", s.system}, {"equilibria", arr}};
    emit(out);
    write_json(fs::path(c.out) / "equilibria.json", out);
}

// empirical tail prefactor: mean of y * t^{-p} * exp(mu t) over the last samples
double tail_prefactor(const Trajectory& traj, std::size_t comp, double p_expected,
                      double mu_decay) {
    std::size_t n = traj.times.size();
    std::size_t k = std::min<std::size_t>(10, n);
    double acc = 0;
    std::size_t used = 0;
    for (std::size_t i = n - k; i < n; ++i) {
        double t = traj.times[i];
        if (!(t > 0)) continue;
        double y = traj.states[i][comp];
        acc += y * std::pow(t, -p_expected) * std::exp(mu_decay * t);
        ++used;
    }
    return used ? acc / static_cast<double>(used) : nan_sentinel();
}

void run_ode_asymptotics(const Common& c, const SysOpts& s) {
    if (dry_stop(c, "ode asymptotics")) return;
    SystemKind kind = parse_system_kind(s.system);
    if (kind != SystemKind::TwoDSpecial && kind != SystemKind::ThreeD)
        throw ValidationError("ode asymptotics: supported for 2d-special and 3d");
    ParamSet p = make_params(s);
    Vec state0 = make_state(s, kind);
    std::vector<double> samples = log_spaced(std::max(1.0, s.t_end * 1e-4), s.t_end, 600);
    Trajectory traj = integrate_system(kind, state0, p, s.t_end, s.tol, samples);
    if (!traj.events.empty())
        throw NumericalEvent(traj.events[0].kind, traj.events[0].t,
                             "asymptotics: integration stopped early");

    const double g = p.gamma, mu = p.mu, l = p.l;
    json fits = json::object();
    json expected = json::object();

    auto fit_comp = [&](const std::string& name, std::size_t comp, bool exp_decay,
                        double mu_decay) {
        FitResult fr = asymptotic_fit(traj, comp, exp_decay, mu_decay);
        fits[name] = json{{"C", fr.C},
                          {"p", fr.p},
                          {"rms", fr.rms},
                          {"reliable", fr.reliable},
                          {"n_samples", static_cast<long long>(fr.n_samples)}};
        return fr;
    };
    auto expect = [&](const std::string& name, std::size_t comp, double C_exp,
                      double p_exp, double mu_decay, const FitResult& fr) {
        double C_emp = tail_prefactor(traj, comp, p_exp, mu_decay);
        expected[name] = json{{"C", C_exp},
                              {"p", p_exp},
                              {"C_empirical", C_emp},
                              {"rel_err_C", std::fabs(C_emp - C_exp) /
                                                std::max(std::fabs(C_exp), 1e-300)},
                              {"rel_err_p", std::fabs(fr.p - p_exp) /
                                                std::max(std::fabs(p_exp), 1e-300)}};
    };

    if (kind == SystemKind::TwoDSpecial) {
        // state layout (G1, beta, alpha)
        FitResult fa = fit_comp("alpha", 2, false, 0);
        FitResult fg = fit_comp("G1", 0, false, 0);
        bool beta_decays = (mu > 0 && l == 0);
        FitResult fb = fit_comp("beta", 1, beta_decays, mu);
        double K1 = (g - 1) * p.k("K");
        if (mu > 0) {
            expect("alpha", 2, 1.0 / (2 * g), -1.0, 0, fa);
            double g1_pref = (l == 0)
                                 ? std::pow(mu / (2 * K1 * g), 1.0 / g)
                                 : std::pow((l * l + mu * mu) / (2 * K1 * mu * g), 1.0 / g);
            expect("G1", 0, g1_pref, -1.0 / g, 0, fg);
            if (l == 0) {
                double C1 = (2 * state0[1] - l) / (2 * state0[0]);
                expect("beta", 1, C1 * g1_pref, -1.0 / g, mu, fb);
            } else {
                expect("beta", 1, l / (2 * mu * g), -1.0, 0, fb);
            }
        } else if (l == 0) {
            expect("alpha", 2, 1.0, -1.0, 0, fa);
            expect("G1", 0, fg.C, -2.0, 0, fg);
        }
    } else {
        // state layout (alpha, beta, G1)
        FitResult fa = fit_comp("alpha", 0, false, 0);
        FitResult fg = fit_comp("G1", 2, false, 0);
        bool beta_decays = (mu > 0 && p.delta_flag == 0);
        FitResult fb = fit_comp("beta", 1, beta_decays, mu);
        if (mu == 0 && p.delta_flag == 0) {
            expect("alpha", 0, 1.0, -1.0, 0, fa);
            expect("G1", 2, fg.C, -2.0, 0, fg);
        } else if (mu > 0) {
            expect("alpha", 0, 1.0 / (3 * g - 1), -1.0, 0, fa);
            expect("G1", 2, fg.C, -2.0 / (3 * g - 1), 0, fg);
            if (p.delta_flag == 0)
                expect("beta", 1, state0[1], 0.0, mu, fb);
            else
                expect("beta", 1, 1.0 / (mu * (3 * g - 1)), -1.0, 0, fb);
        }
    }

    json out{{"system", s.system},
             {"params", params_json(p)},
             {"t_end", s.t_end},
             {"fits", fits},
             {"expected", expected}};
    emit(out);
    write_json(fs::path(c.out) / "asymptotics.json", out);
}

void run_solution_assemble(const Common& c, const SolOpts& o) {
    if (dry_stop(c, "solution assemble")) return;
    SolutionBundle b = make_solution(o);
    CsvWriter csv(fs::path(c.out) / "coefficients.csv", {"t", "G1", "beta", "alpha"});
    for (std::size_t i = 0; i < b.coeffs->times.size(); ++i) {
        if (b.coeffs->times[i] > o.t_max + 1e-12) break;
        const Vec& st = b.coeffs->states[i];
        csv.row({b.coeffs->times[i], st[0], st[1], st[2]});
    }
    GasSolution::Frame fr = b.sol.frame(o.t_max);
    json out{{"a", o.a_data},
             {"gamma", o.gamma},
             {"mu", o.mu},
             {"l", o.l},
             {"G1_0", o.G1_0},
             {"Ep0", b.data.Ep0},
             {"mass", b.data.mass()},
             {"t_max", o.t_max},
             {"final_coefficients", b.coeffs->raw.eval(o.t_max)},
             {"flow_det_at_t_max", det(fr.M)},
             {"rho_at_origin_t_max", b.sol.rho(o.t_max, Vec{0.0, 0.0})}};
    emit(out);
    write_json(fs::path(c.out) / "assemble.json", out);
}

void run_solution_residual(const Common& c, const SolOpts& o, ResidualGrid grid) {
    if (dry_stop(c, "solution residual")) return;
    SolOpts so = o;
    if (so.t_max < grid.t1 + 2 * grid.h_t) so.t_max = grid.t1 + 2 * grid.h_t;
    SolutionBundle b = make_solution(so);
    ResidualReport rep = pde_residual(b.sol, b.forcing, grid, true);

    CsvWriter csv(fs::path(c.out) / "residual.csv",
                  {"level", "h_x", "h_t", "max_continuity", "rms_continuity",
                   "max_momentum", "rms_momentum", "max_pressure", "rms_pressure",
                   "excluded"});
    auto lev_row = [&](double idx, const ResidualLevel& lv) {
        csv.row({idx, lv.h_x, lv.h_t, lv.max_continuity, lv.rms_continuity,
                 lv.max_momentum, lv.rms_momentum, lv.max_pressure, lv.rms_pressure,
                 static_cast<double>(lv.excluded)});
    };
    lev_row(0, rep.coarse);
    lev_row(1, rep.fine);
    auto lev_json = [](const ResidualLevel& lv) {
        return json{{"h_x", lv.h_x},
                    {"h_t", lv.h_t},
                    {"max_continuity", lv.max_continuity},
                    {"rms_continuity", lv.rms_continuity},
                    {"max_momentum", lv.max_momentum},
                    {"rms_momentum", lv.rms_momentum},
                    {"max_pressure", lv.max_pressure},
                    {"rms_pressure", lv.rms_pressure},
                    {"nodes", static_cast<long long>(lv.nodes)},
                    {"excluded", lv.excluded}};
    };
    json out{{"perturb", o.perturb},
             {"coarse", lev_json(rep.coarse)},
             {"fine", lev_json(rep.fine)},
             {"order_continuity", rep.order_continuity},
             {"order_momentum", rep.order_momentum},
             {"order_pressure", rep.order_pressure},
             {"order_overall", rep.order_overall}};
    emit(out);
    write_json(fs::path(c.out) / "residual.json", out);
}

json snapshot_json(const FunctionalSnapshot& s) {
    json out{{"t", s.t},           {"dim", s.dim},   {"mass", s.mass}, {"G", s.G},
             {"N1", s.N1},         {"N2", s.N2},     {"I1", s.I1},     {"I2", s.I2},
             {"F1", s.F1},         {"Ek", s.Ek},     {"Ep", s.Ep},     {"E", s.E},
             {"quad_error", s.quad_error},           {"converged", s.converged}};
    if (s.dim == 2) {
        out["F2"] = s.F2;
        out["Gx"] = s.Gx;
        out["Gy"] = s.Gy;
        out["Gxy"] = s.Gxy;
        out["Delta"] = s.Delta;
    } else {
        out["N3"] = s.N3;
        out["I3"] = s.I3;
        out["F2t"] = s.F2t;
        out["F3"] = s.F3;
        out["H"] = s.H;
    }
    return out;
}

void run_verify_functionals(const Common& c, const SolOpts& o, double t, double qtol) {
    if (dry_stop(c, "verify functionals")) return;
    SolOpts so = o;
    if (so.t_max < t + 0.1) so.t_max = t + 0.1;
    SolutionBundle b = make_solution(so);
    QuadSpec spec;
    spec.tol = qtol;
    FunctionalSnapshot snap =
        functionals(b.sol, b.data.decay_s_rho, b.data.decay_s_p, t, spec);
    json out = snapshot_json(snap);
    out["mass_closed_form"] = b.data.mass();
    emit(out);
    write_json(fs::path(c.out) / "functionals.json", out);
}

void run_verify_identities(const Common& c, const SolOpts& o, double t0, double t1,
                           int n_times, double qtol) {
    if (dry_stop(c, "verify identities")) return;
    if (!(t1 > t0) || n_times < 2)
        throw ValidationError("verify identities: need t1 > t0 and at least 2 samples");
    SolOpts so = o;
    if (so.t_max < t1 + 0.1) so.t_max = t1 + 0.1;
    SolutionBundle b = make_solution(so);
    std::vector<double> times;
    for (int i = 0; i < n_times; ++i)
        times.push_back(t0 + (t1 - t0) * i / (n_times - 1));
    QuadSpec spec;
    spec.tol = qtol;
    // the truncation box grows rapidly with t; a matching tail bound and a
    // slightly larger step keep the finite differences above quadrature noise
    spec.tail_tol = std::max(qtol, 1e-10);
    IdentityTable table = functional_identities(b.sol, b.data.decay_s_rho,
                                                b.data.decay_s_p, o.mu, o.l, times, spec,
                                                2e-3);

    std::vector<std::string> names;
    for (const auto& kv : table.max_residual) names.push_back(kv.first);
    std::vector<std::string> cols{"t"};
    for (const std::string& nm : names) cols.push_back(nm);
    CsvWriter csv(fs::path(c.out) / "identities.csv", cols);
    for (const IdentityRow& row : table.rows) {
        std::vector<double> vals{row.t};
        for (const std::string& nm : names) {
            auto it = row.residual.find(nm);
            vals.push_back(it == row.residual.end() ? nan_sentinel() : it->second);
        }
        csv.row(vals);
    }
    json maxres = json::object();
    double overall = 0;
    for (const auto& kv : table.max_residual) {
        maxres[kv.first] = kv.second;
        overall = std::max(overall, kv.second);
    }
    json out{{"max_residuals", maxres},
             {"max_overall", overall},
             {"energy_monotone", table.energy_monotone},
             {"energies", table.energies}};
    emit(out);
    write_json(fs::path(c.out) / "identities.json", out);
}

void run_verify_lemma51(const Common& c, double gamma, int n, int trials) {
    if (dry_stop(c, "verify lemma51")) return;
    std::mt19937_64 rng(c.seed);
    std::uniform_int_distribution<int> unc(1, 3);
    std::uniform_real_distribution<double> uw(0.2, 1.0), uc(-2.0, 2.0), us(0.5, 2.0);
    struct Gaussian {
        double w, s;
        Vec center;
    };
    std::vector<std::vector<Gaussian>> mixtures;
    for (int tr = 0; tr < trials; ++tr) {
        int m = unc(rng);
        std::vector<Gaussian> mix;
        for (int k = 0; k < m; ++k) {
            Gaussian gsn;
            gsn.w = uw(rng);
            gsn.center.resize(static_cast<std::size_t>(n));
            for (int d = 0; d < n; ++d) gsn.center[static_cast<std::size_t>(d)] = uc(rng);
            gsn.s = us(rng);
            mix.push_back(std::move(gsn));
        }
        mixtures.push_back(std::move(mix));
    }
    std::vector<Lemma51Result> results(mixtures.size());
    parallel_for(mixtures.size(), [&](std::size_t i) {
        const auto& mix = mixtures[i];
        auto f = [&mix](const Vec& x) {
            double s = 0;
            for (const Gaussian& gsn : mix) {
                double r2 = 0;
                for (std::size_t d = 0; d < x.size(); ++d)
                    r2 += sqr(x[d] - gsn.center[d]);
                s += gsn.w * std::exp(-r2 / (2 * gsn.s * gsn.s));
            }
            return s;
        };
        // Gaussian mixtures are negligible beyond these radii, so a modest box
        // and tolerance keep the trial count affordable (the observed margins
        // are many orders above the quadrature error).
        results[i] = lemma51_check(f, gamma, n, 1.0, n == 2 ? 16.0 : 14.0,
                                   n == 2 ? 1e-7 : 1e-5);
    });
    CsvWriter csv(fs::path(c.out) / "lemma51.csv", {"trial", "lhs", "rhs", "margin"});
    double min_margin = 1e300;
    bool all_ok = true;
    for (std::size_t i = 0; i < results.size(); ++i) {
        min_margin = std::min(min_margin, results[i].margin);
        all_ok = all_ok && results[i].converged;
        csv.row({static_cast<double>(i), results[i].lhs, results[i].rhs,
                 results[i].margin});
    }
    json out{{"gamma", gamma},
             {"n", n},
             {"trials", trials},
             {"min_margin", min_margin},
             {"all_converged", all_ok}};
    emit(out);
    write_json(fs::path(c.out) / "lemma51.json", out);
}

void run_verify_corollary(const Common& c, double mu, double delta, double gamma, int n) {
    if (dry_stop(c, "verify corollary")) return;
    FeasibleRegion reg = corollary_feasible_params(mu, delta, gamma, n);
    json out{{"mu", mu},       {"delta", delta}, {"gamma", gamma},
             {"n", n},         {"feasible", reg.feasible},
             {"q_bar", reg.q_bar}};
    if (reg.feasible) {
        out["eps"] = reg.eps;
        out["q"] = reg.q;
    }
    emit(out);
    write_json(fs::path(c.out) / "corollary.json", out);
}

void run_verify_singularity(const Common& c, double F0, double lambda_sup, double inf_D,
                            double mass, double energy, double gamma) {
    if (dry_stop(c, "verify singularity")) return;
    SingularityVerdict v =
        singularity_criterion(F0, lambda_sup, inf_D, mass, energy, gamma);
    json out{{"F0", v.F0},
             {"lambda_sup", v.lambda_sup},
             {"D_minus", v.D_minus},
             {"mass", v.mass},
             {"energy", v.energy},
             {"threshold", v.threshold},
             {"criterion_met", v.criterion_met},
             {"necessary_bound", v.necessary_bound},
             {"necessary_ok", v.necessary_ok}};
    emit(out);
    write_json(fs::path(c.out) / "singularity.json", out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Separated-velocity gas dynamics: reduced systems, admissible "
                 "fields, exact solutions and verification"};
    app.require_subcommand(1);

    try {
        // ---- ode -----------------------------------------------------------
        auto* ode = app.add_subcommand("ode", "reduced coefficient systems");
        ode->require_subcommand(1);
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto sys = std::make_shared<SysOpts>();
            auto* cmd = ode->add_subcommand("run", "integrate a reduced system");
            add_common(cmd, *common, *reg);
            add_sys(cmd, *sys, *reg);
            cmd->callback([common, reg, sys]() {
                reg->apply(common->config);
                run_ode(*common, *sys);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto sys = std::make_shared<SysOpts>();
            auto n_seeds = std::make_shared<int>(8);
            auto a_max = std::make_shared<double>(1.0);
            auto g_max = std::make_shared<double>(2.0);
            auto t_span = std::make_shared<double>(8.0);
            auto* cmd = ode->add_subcommand("phase", "phase portrait of an amplitude system");
            add_common(cmd, *common, *reg);
            add_sys(cmd, *sys, *reg, false);
            reg->add(cmd->add_option("--seeds", *n_seeds, "number of random seeds"),
                     "seeds", n_seeds.get());
            reg->add(cmd->add_option("--a-max", *a_max, "amplitude seeding range"),
                     "a_max", a_max.get());
            reg->add(cmd->add_option("--g-max", *g_max, "inverse-moment seeding range"),
                     "g_max", g_max.get());
            reg->add(cmd->add_option("--t-span", *t_span, "orbit length per direction"),
                     "t_span", t_span.get());
            cmd->callback([common, reg, sys, n_seeds, a_max, g_max, t_span]() {
                reg->apply(common->config);
                run_ode_phase(*common, *sys, *n_seeds, *a_max, *g_max, *t_span);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto sys = std::make_shared<SysOpts>();
            auto* cmd = ode->add_subcommand("equilibria", "equilibrium points and stability");
            add_common(cmd, *common, *reg);
            add_sys(cmd, *sys, *reg, false);
            cmd->callback([common, reg, sys]() {
                reg->apply(common->config);
                run_ode_equilibria(*common, *sys);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto sys = std::make_shared<SysOpts>();
            auto* cmd = ode->add_subcommand("asymptotics", "long-time rate fits");
            add_common(cmd, *common, *reg);
            add_sys(cmd, *sys, *reg);
            cmd->callback([common, reg, sys]() {
                reg->apply(common->config);
                run_ode_asymptotics(*common, *sys);
            });
        }

        // ---- field ---------------------------------------------------------
        auto* field = app.add_subcommand("field", "admissible spatial velocity profiles");
        field->require_subcommand(1);
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto n = std::make_shared<int>(2);
            auto* cmd = field->add_subcommand("roots", "admissible constant divergencies");
            add_common(cmd, *common, *reg);
            reg->add(cmd->add_option("--n", *n, "space dimension (2, 3 or 4)"), "n", n.get());
            cmd->callback([common, reg, n]() {
                reg->apply(common->config);
                run_field_roots(*common, *n);
            });
        }
        auto add_field_opts = [](CLI::App* cmd, FieldOpts& o, Reg& reg) {
            reg.add(cmd->add_option("--family", o.family,
                                    "radial | plane-shear | implicit | sphere"),
                    "family", &o.family);
            reg.add(cmd->add_option("--n", o.n, "dimension (radial family)"), "n", &o.n);
            reg.add(cmd->add_option("--K", o.K, "shear slope (plane-shear)"), "K", &o.K);
            reg.add(cmd->add_option("--fscale", o.fscale, "profile slope scale"),
                    "fscale", &o.fscale);
            reg.add(cmd->add_option("--famp", o.famp, "profile amplitude"), "famp",
                    &o.famp);
            reg.add(cmd->add_option("--C", o.C, "strip constant (sphere, C > 1)"), "C",
                    &o.C);
            reg.add(cmd->add_option("--branch", o.branch, "sphere branch (+1 or -1)"),
                    "branch", &o.branch);
            reg.add(cmd->add_option("--psi1", o.psi1, "sphere stream constant"), "psi1",
                    &o.psi1);
            reg.add(cmd->add_option("--half-width", o.half_width, "sampling half width"),
                    "half_width", &o.half_width);
            reg.add(cmd->add_option("--samples", o.samples, "number of sample points"),
                    "samples", &o.samples);
        };
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto fo = std::make_shared<FieldOpts>();
            auto* cmd = field->add_subcommand("check", "admissibility residuals of a family");
            add_common(cmd, *common, *reg);
            add_field_opts(cmd, *fo, *reg);
            cmd->callback([common, reg, fo]() {
                reg->apply(common->config);
                run_field_check(*common, *fo);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto fo = std::make_shared<FieldOpts>();
            auto* cmd = field->add_subcommand("sphere", "spherical-strip field");
            add_common(cmd, *common, *reg);
            add_field_opts(cmd, *fo, *reg);
            cmd->callback([common, reg, fo]() {
                reg->apply(common->config);
                run_field_sphere(*common, *fo);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto fo = std::make_shared<FieldOpts>();
            auto x1_max = std::make_shared<double>(0.5);
            auto steps = std::make_shared<int>(40);
            auto* cmd = field->add_subcommand("characteristics",
                                              "implicit profile along characteristics");
            add_common(cmd, *common, *reg);
            add_field_opts(cmd, *fo, *reg);
            reg->add(cmd->add_option("--x1-max", *x1_max, "grid extent in x1"), "x1_max",
                     x1_max.get());
            reg->add(cmd->add_option("--steps", *steps, "grid steps per axis"), "steps",
                     steps.get());
            cmd->callback([common, reg, fo, x1_max, steps]() {
                reg->apply(common->config);
                run_field_characteristics(*common, *fo, *x1_max, *steps);
            });
        }

        // ---- solution ------------------------------------------------------
        auto* solution = app.add_subcommand("solution", "assembled planar exact solutions");
        solution->require_subcommand(1);
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto so = std::make_shared<SolOpts>();
            auto* cmd = solution->add_subcommand("assemble", "build the transported state");
            add_common(cmd, *common, *reg);
            add_sol(cmd, *so, *reg);
            cmd->callback([common, reg, so]() {
                reg->apply(common->config);
                run_solution_assemble(*common, *so);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto so = std::make_shared<SolOpts>();
            auto grid = std::make_shared<ResidualGrid>();
            auto* cmd = solution->add_subcommand("residual", "space-time residual study");
            add_common(cmd, *common, *reg);
            add_sol(cmd, *so, *reg);
            reg->add(cmd->add_option("--t0", grid->t0, "residual window start"), "t0",
                     &grid->t0);
            reg->add(cmd->add_option("--t1", grid->t1, "residual window end"), "t1",
                     &grid->t1);
            reg->add(cmd->add_option("--h-x", grid->h_x, "coarse space step"), "h_x",
                     &grid->h_x);
            reg->add(cmd->add_option("--h-t", grid->h_t, "coarse time step"), "h_t",
                     &grid->h_t);
            cmd->callback([common, reg, so, grid]() {
                reg->apply(common->config);
                run_solution_residual(*common, *so, *grid);
            });
        }

        // ---- verify --------------------------------------------------------
        auto* verify = app.add_subcommand("verify", "quadrature and inequality checks");
        verify->require_subcommand(1);
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto so = std::make_shared<SolOpts>();
            auto t = std::make_shared<double>(0.0);
            auto qtol = std::make_shared<double>(1e-9);
            auto* cmd = verify->add_subcommand("functionals", "integral functionals at t");
            add_common(cmd, *common, *reg);
            add_sol(cmd, *so, *reg);
            reg->add(cmd->add_option("--t", *t, "snapshot time"), "t", t.get());
            reg->add(cmd->add_option("--qtol", *qtol, "quadrature tolerance"), "qtol",
                     qtol.get());
            cmd->callback([common, reg, so, t, qtol]() {
                reg->apply(common->config);
                run_verify_functionals(*common, *so, *t, *qtol);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto so = std::make_shared<SolOpts>();
            auto t0 = std::make_shared<double>(0.0);
            auto t1 = std::make_shared<double>(5.0);
            auto n_times = std::make_shared<int>(6);
            auto qtol = std::make_shared<double>(1e-9);
            auto* cmd = verify->add_subcommand("identities", "moment-evolution identities");
            add_common(cmd, *common, *reg);
            add_sol(cmd, *so, *reg);
            reg->add(cmd->add_option("--t0", *t0, "window start"), "t0", t0.get());
            reg->add(cmd->add_option("--t1", *t1, "window end"), "t1", t1.get());
            reg->add(cmd->add_option("--num-times", *n_times, "sample count"),
                     "num_times", n_times.get());
            reg->add(cmd->add_option("--qtol", *qtol, "quadrature tolerance"), "qtol",
                     qtol.get());
            cmd->callback([common, reg, so, t0, t1, n_times, qtol]() {
                reg->apply(common->config);
                run_verify_identities(*common, *so, *t0, *t1, *n_times, *qtol);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto gamma = std::make_shared<double>(1.4);
            auto n = std::make_shared<int>(2);
            auto trials = std::make_shared<int>(100);
            auto* cmd = verify->add_subcommand("lemma51", "interpolation inequality trials");
            add_common(cmd, *common, *reg);
            reg->add(cmd->add_option("--gamma", *gamma, "adiabatic exponent"), "gamma",
                     gamma.get());
            reg->add(cmd->add_option("--n", *n, "dimension (2 or 3)"), "n", n.get());
            reg->add(cmd->add_option("--trials", *trials, "number of random mixtures"),
                     "trials", trials.get());
            cmd->callback([common, reg, gamma, n, trials]() {
                reg->apply(common->config);
                run_verify_lemma51(*common, *gamma, *n, *trials);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto mu = std::make_shared<double>(0.0);
            auto delta = std::make_shared<double>(1.0);
            auto gamma = std::make_shared<double>(1.4);
            auto n = std::make_shared<int>(2);
            auto* cmd = verify->add_subcommand("corollary", "decay-parameter feasibility");
            add_common(cmd, *common, *reg);
            reg->add(cmd->add_option("--mu", *mu, "linear drag"), "mu", mu.get());
            reg->add(cmd->add_option("--delta", *delta, "decay rate"), "delta",
                     delta.get());
            reg->add(cmd->add_option("--gamma", *gamma, "adiabatic exponent"), "gamma",
                     gamma.get());
            reg->add(cmd->add_option("--n", *n, "dimension"), "n", n.get());
            cmd->callback([common, reg, mu, delta, gamma, n]() {
                reg->apply(common->config);
                run_verify_corollary(*common, *mu, *delta, *gamma, *n);
            });
        }
        {
            auto common = std::make_shared<Common>();
            auto reg = std::make_shared<Reg>();
            auto F0 = std::make_shared<double>(0.0);
            auto lam = std::make_shared<double>(1.0);
            auto infD = std::make_shared<double>(0.0);
            auto mass = std::make_shared<double>(1.0);
            auto energy = std::make_shared<double>(1.0);
            auto gamma = std::make_shared<double>(1.4);
            auto* cmd = verify->add_subcommand("singularity", "blow-up criterion");
            add_common(cmd, *common, *reg);
            reg->add(cmd->add_option("--F0", *F0, "initial moment flux"), "F0", F0.get());
            reg->add(cmd->add_option("--lambda-sup", *lam, "sup |Lambda|"), "lambda_sup",
                     lam.get());
            reg->add(cmd->add_option("--inf-D", *infD, "infimum of the divergence"),
                     "inf_D", infD.get());
            reg->add(cmd->add_option("--mass", *mass, "total mass"), "mass", mass.get());
            reg->add(cmd->add_option("--energy", *energy, "total energy"), "energy",
                     energy.get());
            reg->add(cmd->add_option("--gamma", *gamma, "adiabatic exponent"), "gamma",
                     gamma.get());
            cmd->callback([common, reg, F0, lam, infD, mass, energy, gamma]() {
                reg->apply(common->config);
                run_verify_singularity(*common, *F0, *lam, *infD, *mass, *energy, *gamma);
            });
        }

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }
    } catch (const ShockRegionError& e) {
        emit(json{{"error", e.what()},
                  {"event", "shock_region"},
                  {"x1_critical", e.x1_critical}});
        return 3;
    } catch (const NumericalEvent& e) {
        emit(json{{"error", e.what()}, {"event", e.kind}, {"t", e.when}});
        return 3;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
