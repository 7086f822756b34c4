#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "gasflow/common.hpp"

namespace gasflow {

// Dense square matrix of dimension n <= 4, stored row major. Big enough for
// every chart dimension and the shifted-velocity 4x4 solve.
struct Mat {
    int n = 0;
    std::array<double, 16> a{};

    Mat() = default;
    explicit Mat(int dim) : n(dim) { a.fill(0.0); }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }

    static Mat identity(int dim) {
        Mat m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline Mat operator*(const Mat& A, const Mat& B) {
    Mat C(A.n);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) {
            double s = 0;
            for (int k = 0; k < A.n; ++k) s += A(i, k) * B(k, j);
            C(i, j) = s;
        }
    return C;
}

inline Mat operator+(const Mat& A, const Mat& B) {
    Mat C(A.n);
    for (int i = 0; i < A.n * A.n; ++i) C.a[static_cast<std::size_t>(i)] = A.a[static_cast<std::size_t>(i)] + B.a[static_cast<std::size_t>(i)];
    return C;
}

inline Mat operator*(double s, const Mat& A) {
    Mat C(A.n);
    for (int i = 0; i < A.n * A.n; ++i) C.a[static_cast<std::size_t>(i)] = s * A.a[static_cast<std::size_t>(i)];
    return C;
}

inline Vec mat_vec(const Mat& A, const Vec& x) {
    Vec y(static_cast<std::size_t>(A.n), 0.0);
    for (int i = 0; i < A.n; ++i) {
        double s = 0;
        for (int j = 0; j < A.n; ++j) s += A(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

inline Mat transpose(const Mat& A) {
    Mat T(A.n);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) T(i, j) = A(j, i);
    return T;
}

inline double trace(const Mat& A) {
    double s = 0;
    for (int i = 0; i < A.n; ++i) s += A(i, i);
    return s;
}

inline double det(const Mat& A) {
    switch (A.n) {
        case 1:
            return A(0, 0);
        case 2:
            return A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
        case 3:
            return A(0, 0) * (A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1)) -
                   A(0, 1) * (A(1, 0) * A(2, 2) - A(1, 2) * A(2, 0)) +
                   A(0, 2) * (A(1, 0) * A(2, 1) - A(1, 1) * A(2, 0));
        case 4: {
            double d = 0;
            for (int j = 0; j < 4; ++j) {
                Mat m(3);
                for (int r = 1; r < 4; ++r) {
                    int cc = 0;
                    for (int c = 0; c < 4; ++c) {
                        if (c == j) continue;
                        m(r - 1, cc++) = A(r, c);
                    }
                }
                d += ((j % 2) ? -1.0 : 1.0) * A(0, j) * det(m);
            }
            return d;
        }
        default:
            throw ValidationError("det: unsupported dimension");
    }
}

// Gaussian elimination with partial pivoting; throws on (near) singular input.
inline Vec solve_dense(std::vector<Vec> M, Vec rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(M[r][col]) > std::fabs(M[piv][col])) piv = r;
        if (std::fabs(M[piv][col]) < 1e-300) throw NumericalEvent("singular_system", 0.0, "linear solve: singular matrix");
        std::swap(M[piv], M[col]);
        std::swap(rhs[piv], rhs[col]);
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = M[r][col] / M[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    Vec x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = rhs[ii];
        for (std::size_t c = ii + 1; c < n; ++c) s -= M[ii][c] * x[c];
        x[ii] = s / M[ii][ii];
    }
    return x;
}

inline Vec solve_mat(const Mat& A, const Vec& rhs) {
    std::vector<Vec> M(static_cast<std::size_t>(A.n), Vec(static_cast<std::size_t>(A.n)));
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = A(i, j);
    return solve_dense(std::move(M), rhs);
}

inline Mat inverse(const Mat& A) {
    Mat inv(A.n);
    for (int j = 0; j < A.n; ++j) {
        Vec e(static_cast<std::size_t>(A.n), 0.0);
        e[static_cast<std::size_t>(j)] = 1.0;
        Vec col = solve_mat(A, e);
        for (int i = 0; i < A.n; ++i) inv(i, j) = col[static_cast<std::size_t>(i)];
    }
    return inv;
}

// Unweighted linear least squares (normal equations; the fits here are tiny and
// well conditioned). Columns of basis evaluated per row.
inline Vec least_squares(const std::vector<Vec>& rows, const Vec& rhs) {
    const std::size_t m = rows.size();
    const std::size_t n = rows.empty() ? 0 : rows[0].size();
    std::vector<Vec> ata(n, Vec(n, 0.0));
    Vec atb(n, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            atb[i] += rows[r][i] * rhs[r];
            for (std::size_t j = 0; j < n; ++j) ata[i][j] += rows[r][i] * rows[r][j];
        }
    }
    return solve_dense(std::move(ata), atb);
}

using Complex = std::complex<double>;

inline std::vector<Complex> eigenvalues2(const Mat& A) {
    double tr = A(0, 0) + A(1, 1);
    double de = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0);
    Complex disc = std::sqrt(Complex(tr * tr - 4 * de, 0.0));
    return {(tr + disc) / 2.0, (tr - disc) / 2.0};
}

inline std::vector<Complex> eigenvalues3(const Mat& A) {
    // characteristic polynomial lambda^3 - c2 lambda^2 + c1 lambda - c0
    double c2 = trace(A);
    double c1 = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) c1 += A(i, i) * A(j, j) - A(i, j) * A(j, i);
    double c0 = det(A);
    // depressed cubic t^3 + p t + q with lambda = t + c2/3
    double p = c1 - c2 * c2 / 3.0;
    double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    // q sign convention: lambda^3 - c2 l^2 + c1 l - c0 = 0 -> t^3 + p t - q0 = 0
    double q0 = -q;
    Complex inner = std::sqrt(Complex(q0 * q0 / 4.0 + p * p * p / 27.0, 0.0));
    Complex u = std::pow(q0 / 2.0 + inner, 1.0 / 3.0);
    if (std::abs(u) < 1e-150) u = std::pow(q0 / 2.0 - inner, 1.0 / 3.0);
    std::vector<Complex> out;
    if (std::abs(u) < 1e-150) {
        out = {Complex(0, 0), Complex(0, 0), Complex(0, 0)};
    } else {
        const Complex w(-0.5, std::sqrt(3.0) / 2.0);
        for (int k = 0; k < 3; ++k) {
            Complex uk = u * std::pow(w, k);
            out.push_back(uk - p / (3.0 * uk));
        }
    }
    for (auto& z : out) z += c2 / 3.0;
    return out;
}

inline std::vector<Complex> eigenvalues(const Mat& A) {
    if (A.n == 1) return {Complex(A(0, 0), 0)};
    if (A.n == 2) return eigenvalues2(A);
    if (A.n == 3) return eigenvalues3(A);
    throw ValidationError("eigenvalues: unsupported dimension");
}

}  // namespace gasflow
