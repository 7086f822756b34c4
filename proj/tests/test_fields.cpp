#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gasflow/fields.hpp"
#include "helpers.hpp"

using namespace gasflow;
using gasflow_tests::radial_field;

TEST_CASE("admissible constant divergencies are the first n integers") {
    auto r2 = divergence_roots(2);
    REQUIRE(r2.size() == 2);
    CHECK(r2[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(r2[1] == Catch::Approx(2.0).margin(1e-12));

    auto r3 = divergence_roots(3);
    REQUIRE(r3.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(r3[static_cast<std::size_t>(i)] == Catch::Approx(i + 1.0).margin(1e-12));

    auto r4 = divergence_roots(4);
    REQUIRE(r4.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(r4[static_cast<std::size_t>(i)] == Catch::Approx(i + 1.0).margin(1e-12));

    CHECK_THROWS_AS(divergence_roots(5), ValidationError);
}

TEST_CASE("identity profile satisfies every minor-sum identity exactly") {
    for (int n : {2, 3}) {
        FieldSpec f = radial_field(n);
        Vec x(static_cast<std::size_t>(n), 0.7);
        for (int m = 2; m <= n; ++m) {
            JmReport rep = jm(f.chart, f, x, m);
            CHECK(rep.divergence == Catch::Approx(static_cast<double>(n)));
            for (const auto& kv : rep.identity_residuals)
                CHECK(std::fabs(kv.second) < 1e-12);
        }
        Vec r = a2_residual(f.chart, f, x);
        for (double v : r) CHECK(std::fabs(v) < 1e-12);
    }
}

TEST_CASE("shear family transports itself with unit divergence") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> uk(-0.8, 0.8), ux(-3.0, 3.0);
    for (int trial = 0; trial < 5; ++trial) {
        double K = uk(rng);
        SmoothFn phi = SmoothFn::trig_poly({{0.6, 1.3, 0.2}, {0.3, 0.7, 1.1}});
        FieldSpec f = plane_shear_field(K, phi);
        for (int pt = 0; pt < 40; ++pt) {
            Vec x{ux(rng), ux(rng)};
            // analytic jacobian agrees with finite differences
            Mat J = f.jacobian(x);
            FieldSpec fd = f;
            fd.jacobian = nullptr;
            Mat Jfd = field_jacobian(fd, x);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(J(i, j) == Catch::Approx(Jfd(i, j)).margin(1e-8));

            CHECK(divergence(f.chart, f, x) == Catch::Approx(1.0).margin(1e-12));
            Vec r = a2_residual(f.chart, f, x);
            for (double v : r) CHECK(std::fabs(v) < 1e-11);
            JmReport rep = jm(f.chart, f, x, 2);
            CHECK(std::fabs(rep.value) < 1e-12);  // rank-one gradient
            CHECK(std::fabs(rep.identity_residuals.at("quadratic")) < 1e-12);
            CHECK(std::fabs(rep.identity_residuals.at("alternating")) < 1e-12);
        }
    }
}

TEST_CASE("implicit slope construction matches its explicit specialization") {
    // with F constant the slope is that constant and the first component is
    // x1 + datum(x2 - z x1)
    SmoothFn F = SmoothFn::constant(0.4);
    SmoothFn datum = SmoothFn::tanh_fn(0.8);
    FieldSpec f = implicit_characteristic_field(F, datum);
    Vec x{0.7, -0.3};
    Vec lam = f.eval(x);
    double xi = x[1] - 0.4 * x[0];
    CHECK(lam[0] == Catch::Approx(x[0] + std::tanh(0.8 * xi)).margin(1e-12));
    CHECK(lam[1] == Catch::Approx(0.4 * lam[0]).margin(1e-12));
}

TEST_CASE("implicit family is self-transporting where characteristics do not cross") {
    SmoothFn F = SmoothFn::tanh_fn(0.5);
    SmoothFn datum = SmoothFn::trig_poly({{0.4, 0.9, 0.3}});
    FieldSpec f = implicit_characteristic_field(F, datum);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-2.0, 2.0);
    for (int pt = 0; pt < 50; ++pt) {
        Vec x{ux(rng), ux(rng)};
        Mat J = f.jacobian(x);
        FieldSpec fd = f;
        fd.jacobian = nullptr;
        Mat Jfd = field_jacobian(fd, x);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(J(i, j) == Catch::Approx(Jfd(i, j)).margin(1e-7));
        Vec r = a2_residual(f.chart, f, x);
        for (double v : r) CHECK(std::fabs(v) < 1e-10);
    }
}

TEST_CASE("crossing characteristics raise a shock-region error") {
    // z = F(x2 - z x1) with F(s) = -s degenerates along x1 = 1
    SmoothFn F = SmoothFn::linear(-1.0, 0.0);
    try {
        characteristics_solve(F, Vec{1.0, 0.5});
        FAIL("expected a shock-region error");
    } catch (const ShockRegionError& e) {
        CHECK(e.x1_critical == Catch::Approx(1.0).margin(1e-6));
    }
}

TEST_CASE("spherical-strip field stays admissible on both branches") {
    SmoothFn psi1 = SmoothFn::trig_poly({{0.3, 1.0, 0.4}});
    for (double C : {2.0, 4.0}) {
        double theta_min = std::asin(1.0 / std::sqrt(C));
        for (int branch : {1, -1}) {
            FieldSpec f = sphere_field(C, psi1, branch);
            for (double frac : {0.25, 0.5, 0.75}) {
                double th = theta_min + 0.08 + frac * (M_PI - 2 * (theta_min + 0.08));
                Vec x{0.9, th};
                Vec r = a2_residual(f.chart, f, x);
                for (double v : r) CHECK(std::fabs(v) < 1e-6);
            }
            // outside the strip the field is undefined
            CHECK_THROWS_AS(f.check_point(Vec{0.0, 0.5 * theta_min}), DomainError);
        }
    }
    CHECK_THROWS_AS(sphere_field(0.5, psi1, 1), ValidationError);
    CHECK_THROWS_AS(sphere_field(2.0, psi1, 0), ValidationError);
}

TEST_CASE("quadratic potential satisfies the stationarity condition") {
    ChartMetric c = ChartMetric::euclidean(2);
    auto phi = [](const Vec& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
    CHECK(std::fabs(potential_condition(c, phi, Vec{0.4, -0.8})) < 1e-6);
    // generic quadratic fails it by a computable amount: Hess = [[1,1],[1,0]]
    auto bad = [](const Vec& x) { return 0.5 * x[0] * x[0] + x[0] * x[1]; };
    CHECK(potential_condition(c, bad, Vec{0.2, 0.3}) == Catch::Approx(-1.0).margin(1e-5));
}

TEST_CASE("rotating-frame pair with matched rate has vanishing residuals") {
    ChartMetric c = ChartMetric::euclidean(2);
    FieldSpec lam = radial_field(2);
    double rate = 0.7;
    FieldSpec xi;
    xi.chart = c;
    xi.eval = [rate](const Vec& x) { return Vec{rate * x[1], -rate * x[0]}; };
    xi.jacobian = [rate](const Vec&) {
        Mat J(2);
        J(0, 1) = rate;
        J(1, 0) = -rate;
        return J;
    };
    std::vector<Vec> samples{{0.3, 0.5}, {-1.2, 0.8}, {2.0, -0.4}};
    AnsatzResiduals r = coriolis_ansatz_residual(c, lam, xi,
                                                 [rate](const Vec&) { return rate; },
                                                 samples);
    CHECK(r.r1 < 1e-12);
    CHECK(r.r2 < 1e-12);
}

TEST_CASE("coupled amplitude system reduces to 1/(1+t) for a single field") {
    MultiFieldResult r = multi_field_coeffs({}, Vec{1.0}, 4.0, 1e-11);
    CHECK_FALSE(r.blew_up);
    CHECK(r.states.back()[0] == Catch::Approx(1.0 / 5.0).epsilon(1e-8));

    // negative amplitude blows up at t = -1/a0
    MultiFieldResult b = multi_field_coeffs({}, Vec{-0.5}, 4.0, 1e-10);
    CHECK(b.blew_up);
    CHECK(b.blow_up_time == Catch::Approx(2.0).margin(0.05));
}
