#pragma once

#include <cmath>
#include <memory>
#include <random>

#include "gasflow/exact_solution.hpp"
#include "gasflow/systems.hpp"
#include "gasflow/verify.hpp"

namespace gasflow_tests {

using namespace gasflow;

// Algebraic initial data driven by the rotationally symmetric coefficient
// system: velocity A(t) x with A = [[alpha, beta], [-beta, alpha]] and the
// matching momentum forcing -mu V + l (V2, -V1).
struct TestSolution {
    InitialData data;
    std::shared_ptr<Trajectory> coeffs;
    GasSolution sol;
    ForcingFn forcing;
};

inline TestSolution make_algebraic_solution(double a, double gamma, double mu, double l,
                                            double G1_0, double alpha0, double beta0,
                                            double t_max, double tol = 1e-11,
                                            double perturb = 0.0) {
    TestSolution b;
    double Ep0 = matched_ep0(a, gamma, 2);
    b.data = algebraic_initial_data(a, gamma, G1_0, Ep0, 2);

    ParamSet p;
    p.gamma = gamma;
    p.mu = mu;
    p.l = l;
    p.K["K"] = Ep0 * std::pow(G1_0, 1.0 - gamma);
    Vec state0{G1_0, beta0, alpha0};
    double span = t_max + std::max(0.5, 0.1 * t_max);
    Trajectory traj = integrate_system(SystemKind::TwoDSpecial, state0, p, span,
                                       std::max(tol, 1e-13));
    if (!traj.events.empty())
        throw NumericalEvent(traj.events[0].kind, traj.events[0].t,
                             "coefficient integration stopped before t_max");
    b.coeffs = std::make_shared<Trajectory>(std::move(traj));

    auto coeffs = b.coeffs;
    double fac = 1.0 + perturb;
    auto A = [coeffs, fac](double t) {
        double tc = std::min(std::max(t, 0.0), coeffs->raw.t_reached);
        Vec s = coeffs->raw.eval(tc);
        Mat m(2);
        m(0, 0) = fac * s[2];
        m(0, 1) = s[1];
        m(1, 0) = -s[1];
        m(1, 1) = fac * s[2];
        return m;
    };
    auto zero_b = [](double) { return Vec{0.0, 0.0}; };
    b.sol = assemble(2, A, zero_b, b.data.rho0, b.data.p0, gamma, t_max,
                     std::max(tol, 1e-13));
    b.forcing = [mu, l](double, const Vec&, const Vec& v) {
        return Vec{-mu * v[0] + l * v[1], -mu * v[1] - l * v[0]};
    };
    return b;
}

// Random Gaussian mixture used by the interpolation-inequality trials.
struct GaussianTerm {
    double w = 1, s = 1;
    Vec center;
};

inline std::vector<GaussianTerm> random_mixture(std::mt19937_64& rng, int n) {
    std::uniform_int_distribution<int> unc(1, 3);
    std::uniform_real_distribution<double> uw(0.2, 1.0), uc(-2.0, 2.0), us(0.5, 2.0);
    int m = unc(rng);
    std::vector<GaussianTerm> mix;
    for (int k = 0; k < m; ++k) {
        GaussianTerm g;
        g.w = uw(rng);
        g.center.resize(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) g.center[static_cast<std::size_t>(d)] = uc(rng);
        g.s = us(rng);
        mix.push_back(std::move(g));
    }
    return mix;
}

inline double eval_mixture(const std::vector<GaussianTerm>& mix, const Vec& x) {
    double s = 0;
    for (const GaussianTerm& g : mix) {
        double r2 = 0;
        for (std::size_t d = 0; d < x.size(); ++d) r2 += sqr(x[d] - g.center[d]);
        s += g.w * std::exp(-r2 / (2 * g.s * g.s));
    }
    return s;
}

// Identity profile on the Euclidean plane/space: the simplest admissible field.
inline FieldSpec radial_field(int n) {
    FieldSpec fs;
    fs.chart = ChartMetric::euclidean(n);
    fs.family = "radial";
    fs.eval = [](const Vec& x) { return x; };
    fs.jacobian = [n](const Vec&) { return Mat::identity(n); };
    return fs;
}

}  // namespace gasflow_tests
