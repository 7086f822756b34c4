#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "gasflow/verify.hpp"
#include "helpers.hpp"

using namespace gasflow;
using gasflow_tests::make_algebraic_solution;

namespace {

GasSolution static_solution(const InitialData& d) {
    auto A = [](double) { return Mat(2); };
    auto b = [](double) { return Vec{0.0, 0.0}; };
    return assemble(2, A, b, d.rho0, d.p0, d.gamma, 1.0);
}

}  // namespace

TEST_CASE("functional snapshot of a static state matches closed forms") {
    double a = 4.0, gamma = 1.4;
    double Ep0 = matched_ep0(a, gamma, 2);
    InitialData d = algebraic_initial_data(a, gamma, 1.0, Ep0, 2);
    GasSolution sol = static_solution(d);
    FunctionalSnapshot s = functionals(sol, d.decay_s_rho, d.decay_s_p, 0.5);
    CHECK(s.mass == Catch::Approx(d.mass()).epsilon(1e-7));
    CHECK(s.G == Catch::Approx(d.second_moment_half()).epsilon(1e-7));
    CHECK(s.Ep == Catch::Approx(d.potential_energy()).epsilon(1e-7));
    CHECK(std::fabs(s.N1) < 1e-8);
    CHECK(std::fabs(s.N2) < 1e-8);
    CHECK(std::fabs(s.I1) < 1e-8);
    CHECK(std::fabs(s.Ek) < 1e-8);
    CHECK(std::fabs(s.F1) < 1e-8);
    CHECK(std::fabs(s.Gxy) < 1e-8);
    CHECK(s.Delta == Catch::Approx(s.Gx * s.Gy).epsilon(1e-6));
}

TEST_CASE("moment-evolution identities hold along an assembled flow") {
    auto b = make_algebraic_solution(4.0, 1.4, 0.0, 0.0, 1.0, 0.15, 0.1, 1.2);
    QuadSpec spec;
    spec.tol = 1e-9;
    IdentityTable table = functional_identities(b.sol, b.data.decay_s_rho,
                                                b.data.decay_s_p, 0.0, 0.0, {0.6}, spec,
                                                2e-3);
    REQUIRE(table.rows.size() == 1);
    for (const auto& kv : table.rows[0].residual) {
        INFO(kv.first);
        CHECK(kv.second < 1e-4);
    }
    CHECK(table.energy_monotone);
}

TEST_CASE("space-time residual of an exact flow is at the discretization floor") {
    auto b = make_algebraic_solution(4.0, 1.4, 0.2, 0.3, 1.0, 0.2, 0.1, 1.2);
    ResidualGrid grid;
    grid.t0 = 0.5;
    grid.t1 = 1.0;
    grid.box.lo = {-1.0, -1.0};
    grid.box.hi = {1.0, 1.0};
    grid.h_x = 0.2;
    grid.h_t = 0.1;
    ResidualReport rep = pde_residual(b.sol, b.forcing, grid, true);
    CHECK(rep.coarse.nodes > 0);
    // residuals are pure discretization error: small and shrinking at >= 2nd order
    CHECK(rep.coarse.rms_continuity < 2e-2);
    CHECK(rep.fine.rms_continuity < 2e-3);
    CHECK(rep.fine.rms_momentum < 1e-3);
    CHECK(rep.fine.rms_pressure < 1e-3);
    CHECK(rep.order_overall > 1.8);

    ResidualGrid bad = grid;
    bad.t0 = 0.05;
    CHECK_THROWS_AS(pde_residual(b.sol, b.forcing, bad, false), ValidationError);
}

TEST_CASE("separated functionals collapse for a unit-divergence field") {
    SmoothFn phi = SmoothFn::trig_poly({{0.4, 1.1, 0.3}});
    FieldSpec field = plane_shear_field(0.4, phi);
    auto gauss = [](const Vec& x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
    };
    Box box;
    box.lo = {-6.0, -6.0};
    box.hi = {6.0, 6.0};
    double gamma = 1.4, amp = 0.7;
    SeparatedFunctionals sf = separated_functionals(field, gauss, gauss, amp, gamma, box,
                                                    1e-8);
    // with D = 1 every divergence moment equals the plain pressure integral
    for (int m = 1; m <= 6; ++m)
        CHECK(sf.Qm[static_cast<std::size_t>(m)] ==
              Catch::Approx(sf.Qm[0]).epsilon(1e-6));
    CHECK(sf.Nfun == Catch::Approx((gamma - 1.0) * sf.Qm[0]).epsilon(1e-6));
    CHECK(std::fabs(sf.J_correction) < 1e-6);
    CHECK(std::fabs(sf.lambda_gradD) < 1e-4);
    CHECK(std::fabs(sf.gradD_reduced) < 1e-6);
    // kinetic energy is the amplitude squared times the second moment
    CHECK(sf.Ek == Catch::Approx(amp * amp * sf.G).epsilon(1e-6));
    CHECK(sf.G == Catch::Approx(sf.Gm[2]));
}

TEST_CASE("interpolation inequality holds with margin for Gaussians") {
    auto gauss2 = [](const Vec& x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1]));
    };
    Lemma51Result r = lemma51_check(gauss2, 1.4, 2, 1.0, 14.0, 1e-8);
    CHECK(r.lhs == Catch::Approx(2 * M_PI).epsilon(1e-6));
    CHECK(r.margin > 0.0);
    CHECK(r.margin < r.rhs);  // inequality is not vacuous

    auto gauss3 = [](const Vec& x) {
        return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
    };
    Lemma51Result r3 = lemma51_check(gauss3, 1.4, 3, 1.0, 10.0, 1e-4);
    CHECK(r3.margin > 0.0);

    auto zero = [](const Vec&) { return 0.0; };
    Lemma51Result rz = lemma51_check(zero, 1.4, 2, 1.0, 5.0, 1e-8);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.margin == 0.0);

    CHECK_THROWS_AS(lemma51_check(gauss2, 0.9, 2), ValidationError);
    CHECK_THROWS_AS(lemma51_check(gauss2, 1.4, 4), ValidationError);
}

TEST_CASE("blow-up criterion arithmetic") {
    // nonnegative divergence: any positive initial flux meets the criterion
    SingularityVerdict v1 = singularity_criterion(0.1, 2.0, 0.5, 1.0, 1.0, 1.4);
    CHECK(v1.D_minus == 0.0);
    CHECK(v1.threshold == 0.0);
    CHECK(v1.criterion_met);
    CHECK(v1.necessary_ok);

    // strict inequality at the threshold (same float expression as the library)
    double thr = 2.0 * std::sqrt((1.4 - 1.0) * 1.0 * 1.0 * 1.0);
    SingularityVerdict v2 = singularity_criterion(thr, 2.0, -1.0, 1.0, 1.0, 1.4);
    CHECK(v2.threshold == Catch::Approx(thr));
    CHECK_FALSE(v2.criterion_met);
    SingularityVerdict v3 = singularity_criterion(thr + 1e-9, 2.0, -1.0, 1.0, 1.0, 1.4);
    CHECK(v3.criterion_met);

    // the necessary bound can fail even when the formula evaluates
    SingularityVerdict v4 = singularity_criterion(100.0, 2.0, -50.0, 1.0, 1.0, 1.4);
    CHECK_FALSE(v4.necessary_ok);

    CHECK_THROWS_AS(singularity_criterion(0.0, 1.0, 0.0, -1.0, 1.0, 1.4), ValidationError);
}
