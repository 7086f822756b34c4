#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gasflow/common.hpp"

namespace gasflow {

// Explicit Dormand-Prince 5(4) pair with PI step-size control and 4th-order
// dense output. Nonstiff right-hand sides only; blow-up handled by events.

using OdeRhs = std::function<void(double t, const Vec& y, Vec& dy)>;

struct OdeEvent {
    std::string kind;  // blow_up, positivity_loss, determinant_loss, stiffness
    double t = 0;
};

struct OdeOptions {
    double atol = 1e-10;
    double rtol = 1e-10;
    double initial_step = 0.0;  // 0 -> automatic
    std::int64_t max_steps = 10'000'000;
    double blowup_norm = 1e12;
    bool store_dense = true;
    bool store_steps = true;
    // Checked after every accepted step; returning an event stops integration.
    std::function<std::optional<OdeEvent>(double, const Vec&)> event_fn;
};

struct DenseSeg {
    double t0 = 0, h = 0;
    Vec r1, r2, r3, r4, r5;
};

struct OdeResult {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<DenseSeg> dense;
    std::optional<OdeEvent> event;
    std::int64_t steps_taken = 0;
    std::int64_t steps_accepted = 0;
    double t_begin = 0, t_reached = 0;

    bool has_dense() const { return !dense.empty(); }

    // Continuous solution from the dense segments; t clamped to the span.
    Vec eval(double t) const {
        if (dense.empty()) throw ValidationError("ode eval: dense output not stored");
        t = std::clamp(t, t_begin, t_reached);
        std::size_t lo = 0, hi = dense.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi + 1) / 2;
            if (dense[mid].t0 <= t)
                lo = mid;
            else
                hi = mid - 1;
        }
        const DenseSeg& s = dense[lo];
        double th = (s.h != 0.0) ? (t - s.t0) / s.h : 0.0;
        th = std::clamp(th, 0.0, 1.0);
        const double th1 = 1.0 - th;
        Vec y(s.r1.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] = s.r1[i] + th * (s.r2[i] + th1 * (s.r3[i] + th * (s.r4[i] + th1 * s.r5[i])));
        return y;
    }
};

namespace dopri_detail {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dopri_detail

inline OdeResult integrate_ode(const OdeRhs& f, Vec y, double t0, double t1,
                               const OdeOptions& opt = {}) {
    using namespace dopri_detail;
    if (!(t1 > t0)) throw ValidationError("integrate_ode: need t1 > t0");
    const std::size_t n = y.size();
    const double atol = opt.atol, rtol = opt.rtol;

    OdeResult out;
    out.t_begin = t0;
    auto blow_check = [&](double t, const Vec& s) -> std::optional<OdeEvent> {
        for (double v : s)
            if (!std::isfinite(v) || std::fabs(v) > opt.blowup_norm)
                return OdeEvent{"blow_up", t};
        return std::nullopt;
    };

    Vec k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), yerr(n);
    f(t0, y, k1);

    double h = opt.initial_step;
    if (h <= 0) {
        // standard starting-step heuristic: match the scale of y and f
        double dnf = 0, dny = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sk = atol + rtol * std::fabs(y[i]);
            dnf += sqr(k1[i] / sk);
            dny += sqr(y[i] / sk);
        }
        h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h = std::min(h, t1 - t0);
    }

    double t = t0;
    double facold = 1e-4;
    const double beta = 0.04, expo1 = 0.2 - beta * 0.75, safe = 0.9;
    const double facmin = 0.2, facmax = 10.0;
    const double hmin = 1e-14 * (t1 - t0);

    if (opt.store_steps) {
        out.times.push_back(t);
        out.states.push_back(y);
    }

    while (t < t1) {
        if (out.steps_taken++ >= opt.max_steps)
            throw NumericalEvent("max_steps", t, "integrate_ode: step budget exhausted");
        if (h < hmin) {
            out.event = OdeEvent{"stiffness", t};
            break;
        }
        bool last = false;
        if (t + h >= t1) {
            h = t1 - t;
            last = true;
        }

        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
        f(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < n; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                  a65 * k5[i]);
        f(t + h, ytmp, k6);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        f(t + h, ynew, k7);

        double err = 0;
        bool finite = true;
        for (std::size_t i = 0; i < n; ++i) {
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
            double sk = atol + rtol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
            err += sqr(yerr[i] / sk);
            if (!std::isfinite(ynew[i])) finite = false;
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (!finite) err = 1e30;

        double fac11 = std::pow(std::max(err, 1e-30), expo1);
        if (err <= 1.0) {
            // accepted
            if (opt.store_dense) {
                DenseSeg seg;
                seg.t0 = t;
                seg.h = h;
                seg.r1 = y;
                seg.r2.resize(n);
                seg.r3.resize(n);
                seg.r4.resize(n);
                seg.r5.resize(n);
                for (std::size_t i = 0; i < n; ++i) {
                    double dy = ynew[i] - y[i];
                    double bspl = h * k1[i] - dy;
                    seg.r2[i] = dy;
                    seg.r3[i] = bspl;
                    seg.r4[i] = dy - h * k7[i] - bspl;
                    seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                                     d6 * k6[i] + d7 * k7[i]);
                }
                out.dense.push_back(std::move(seg));
            }
            t += h;
            y = ynew;
            std::swap(k1, k7);
            ++out.steps_accepted;
            if (opt.store_steps) {
                out.times.push_back(t);
                out.states.push_back(y);
            }
            auto ev = blow_check(t, y);
            if (!ev && opt.event_fn) ev = opt.event_fn(t, y);
            if (ev) {
                out.event = ev;
                break;
            }
            double fac = fac11 / std::pow(facold, beta);
            facold = std::max(err, 1e-4);
            fac = std::max(1.0 / facmax, std::min(1.0 / facmin, fac / safe));
            if (!last) h = h / fac;
        } else {
            double fac = std::min(1.0 / facmin, fac11 / safe);
            h = h / fac;
        }
    }
    out.t_reached = t;
    return out;
}

}  // namespace gasflow
