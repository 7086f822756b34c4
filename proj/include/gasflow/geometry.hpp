#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <utility>

#include "gasflow/common.hpp"
#include "gasflow/linalg.hpp"

namespace gasflow {

struct Box {
    Vec lo, hi;
    bool contains(const Vec& x, double margin = 0.0) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (x[i] < lo[i] + margin || x[i] > hi[i] - margin) return false;
        return true;
    }
};

enum class ChartKind { euclidean, sphere, custom };

constexpr double kSpherePoleMargin = 1e-6;
constexpr double kGeoFdStep = 1e-5;

// A coordinate chart with a (diagonal) Riemannian metric on an axis-aligned
// domain box. Sphere chart uses coordinates (phi, theta) with theta the polar
// angle measured from the north pole.
struct ChartMetric {
    int dim = 2;
    ChartKind kind = ChartKind::euclidean;
    double radius = 1.0;                       // sphere only
    std::function<Vec(const Vec&)> diag;       // custom only: diagonal entries of g
    Box domain;

    static ChartMetric euclidean(int dim, double half_width = 50.0) {
        ChartMetric c;
        c.dim = dim;
        c.kind = ChartKind::euclidean;
        c.domain.lo.assign(static_cast<std::size_t>(dim), -half_width);
        c.domain.hi.assign(static_cast<std::size_t>(dim), half_width);
        return c;
    }

    static ChartMetric sphere(double r) {
        if (!(r > 0)) throw ValidationError("sphere chart: radius must be positive");
        ChartMetric c;
        c.dim = 2;
        c.kind = ChartKind::sphere;
        c.radius = r;
        c.domain.lo = {-M_PI, 0.0};
        c.domain.hi = {M_PI, M_PI};
        return c;
    }

    static ChartMetric custom(int dim, std::function<Vec(const Vec&)> diag_fn, Box dom) {
        ChartMetric c;
        c.dim = dim;
        c.kind = ChartKind::custom;
        c.diag = std::move(diag_fn);
        c.domain = std::move(dom);
        return c;
    }

    void check_point(const Vec& x) const {
        if (static_cast<int>(x.size()) != dim)
            throw ValidationError("chart point: wrong dimension");
        if (!domain.contains(x)) throw DomainError("chart point: outside domain box");
        if (kind == ChartKind::sphere) {
            double th = x[1];
            if (th < kSpherePoleMargin || th > M_PI - kSpherePoleMargin)
                throw SingularChartError("sphere chart: metric singular at the poles");
        }
    }

    Mat metric(const Vec& x) const {
        check_point(x);
        Mat g(dim);
        switch (kind) {
            case ChartKind::euclidean:
                for (int i = 0; i < dim; ++i) g(i, i) = 1.0;
                break;
            case ChartKind::sphere: {
                double s = std::sin(x[1]);
                g(0, 0) = radius * radius * s * s;
                g(1, 1) = radius * radius;
                break;
            }
            case ChartKind::custom: {
                Vec d = diag(x);
                for (int i = 0; i < dim; ++i) {
                    if (!(d[static_cast<std::size_t>(i)] > 0))
                        throw SingularChartError("custom chart: non-positive metric entry");
                    g(i, i) = d[static_cast<std::size_t>(i)];
                }
                break;
            }
        }
        return g;
    }

    Mat metric_inverse(const Vec& x) const {
        Mat g = metric(x);
        Mat inv(dim);
        for (int i = 0; i < dim; ++i) inv(i, i) = 1.0 / g(i, i);
        return inv;
    }

    double metric_det(const Vec& x) const {
        Mat g = metric(x);
        double d = 1.0;
        for (int i = 0; i < dim; ++i) d *= g(i, i);
        return d;
    }
};

struct Christoffel {
    int dim = 2;
    std::array<double, 64> gamma{};  // [k][i][j]
    double& at(int k, int i, int j) {
        return gamma[static_cast<std::size_t>((k * dim + i) * dim + j)];
    }
    double at(int k, int i, int j) const {
        return gamma[static_cast<std::size_t>((k * dim + i) * dim + j)];
    }
};

inline Christoffel christoffel(const ChartMetric& chart, const Vec& x) {
    chart.check_point(x);
    Christoffel G;
    G.dim = chart.dim;
    switch (chart.kind) {
        case ChartKind::euclidean:
            break;
        case ChartKind::sphere: {
            double th = x[1];
            double s = std::sin(th), c = std::cos(th);
            G.at(1, 0, 0) = -s * c;
            G.at(0, 0, 1) = c / s;
            G.at(0, 1, 0) = c / s;
            break;
        }
        case ChartKind::custom: {
            const int n = chart.dim;
            // partial_i of the diagonal metric entries, central differences
            std::vector<Vec> dg(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i) {
                double h = kGeoFdStep * std::max(1.0, std::fabs(x[static_cast<std::size_t>(i)]));
                Vec xp = x, xm = x;
                xp[static_cast<std::size_t>(i)] += h;
                xm[static_cast<std::size_t>(i)] -= h;
                Vec gp = chart.diag(xp), gm = chart.diag(xm);
                Vec d(static_cast<std::size_t>(n));
                for (int a = 0; a < n; ++a)
                    d[static_cast<std::size_t>(a)] =
                        (gp[static_cast<std::size_t>(a)] - gm[static_cast<std::size_t>(a)]) /
                        (2 * h);
                dg[static_cast<std::size_t>(i)] = std::move(d);
            }
            Vec gd = chart.diag(x);
            for (int k = 0; k < n; ++k)
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        double v = 0;
                        if (k == j) v += dg[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                        if (k == i) v += dg[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                        if (i == j) v -= dg[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
                        G.at(k, i, j) = 0.5 * v / gd[static_cast<std::size_t>(k)];
                    }
            break;
        }
    }
    return G;
}

}  // namespace gasflow
