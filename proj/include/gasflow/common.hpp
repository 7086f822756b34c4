#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gasflow {

using Vec = std::vector<double>;

// Configuration / precondition problems: CLI maps these to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : ValidationError {
    explicit DomainError(const std::string& msg) : ValidationError(msg) {}
};

struct SingularChartError : ValidationError {
    explicit SingularChartError(const std::string& msg) : ValidationError(msg) {}
};

// Runtime numerical events (blow-up, loss of positivity, shocks...): exit code 3.
struct NumericalEvent : std::runtime_error {
    std::string kind;
    double when;
    NumericalEvent(std::string k, double t, const std::string& msg)
        : std::runtime_error(msg), kind(std::move(k)), when(t) {}
};

struct ShockRegionError : NumericalEvent {
    double x1_critical;
    ShockRegionError(double x1c, const std::string& msg)
        : NumericalEvent("shock_region", x1c, msg), x1_critical(x1c) {}
};

// Fixed formatting: 17 significant digits, locale independent, used for every
// CSV/JSON number so that repeated runs are byte identical.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline int worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GASFLOW_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return static_cast<int>(hw);
}

// Static block partition; each worker owns a contiguous index range, so results
// written to per-index slots are independent of the thread count.
template <class F>
void parallel_for(std::size_t n, F&& body) {
    int nw = worker_count();
    if (n == 0) return;
    if (nw <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t chunk = (n + nw - 1) / static_cast<std::size_t>(nw);
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mtx;
    for (int w = 0; w < nw; ++w) {
        std::size_t lo = static_cast<std::size_t>(w) * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi]() {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> g(err_mtx);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

inline double sqr(double x) { return x * x; }

}  // namespace gasflow
