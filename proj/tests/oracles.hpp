#pragma once

// Test-only reference implementations. These deliberately avoid the library
// and Eigen solver paths: eigenpairs come from cyclic Jacobi rotations,
// linear systems from Gaussian elimination, constrained abundances from a
// simplex grid search. Eigen matrices are used as plain containers only.

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// --------------------------------------------------------------------------
// cyclic Jacobi eigensolver for symmetric matrices, eigenpairs descending
// --------------------------------------------------------------------------
struct EigResult {
    Matrix vectors; // columns
    Vector values;
};

inline EigResult jacobi_eig(Matrix a) {
    const int n = static_cast<int>(a.rows());
    Matrix v = Matrix::Identity(n, n);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) < 1e-15 * std::max(1.0, a.norm())) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    EigResult result;
    result.values.resize(n);
    result.vectors.resize(n, n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return a(x, x) > a(y, y); });
    for (int i = 0; i < n; ++i) {
        result.values(i) = a(order[i], order[i]);
        result.vectors.col(i) = v.col(order[i]);
    }
    return result;
}

// --------------------------------------------------------------------------
// Gaussian elimination with partial pivoting
// --------------------------------------------------------------------------
inline Vector gauss_solve(Matrix a, Vector b) {
    const int n = static_cast<int>(a.rows());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) < 1e-300) throw std::runtime_error("singular system");
        if (pivot != col) {
            a.row(pivot).swap(a.row(col));
            std::swap(b(pivot), b(col));
        }
        for (int r = col + 1; r < n; ++r) {
            const double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
            b(r) -= f * b(col);
        }
    }
    Vector x(n);
    for (int r = n - 1; r >= 0; --r) {
        double acc = b(r);
        for (int c = r + 1; c < n; ++c) acc -= a(r, c) * x(c);
        x(r) = acc / a(r, r);
    }
    return x;
}

// --------------------------------------------------------------------------
// materialized plane operators (independent reflect arithmetic)
// --------------------------------------------------------------------------
inline long mirror(long i, long n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

// matrix of y = correlate(x, kernel) with symmetric reflect padding,
// planes flattened row-major
inline Matrix conv_matrix(std::size_t h, std::size_t w, const Matrix& kernel) {
    const long kh = kernel.rows(), kw = kernel.cols();
    const long ch = kh / 2, cw = kw / 2;
    const long n = static_cast<long>(h * w);
    Matrix m = Matrix::Zero(n, n);
    for (long r = 0; r < static_cast<long>(h); ++r)
        for (long c = 0; c < static_cast<long>(w); ++c)
            for (long i = 0; i < kh; ++i)
                for (long j = 0; j < kw; ++j) {
                    const long rr = mirror(r + i - ch, static_cast<long>(h));
                    const long cc = mirror(c + j - cw, static_cast<long>(w));
                    m(r * static_cast<long>(w) + c, rr * static_cast<long>(w) + cc) += kernel(i, j);
                }
    return m;
}

inline Matrix laplacian_matrix(std::size_t h, std::size_t w) {
    Matrix k(3, 3);
    k << 0, 1, 0, 1, -4, 1, 0, 1, 0;
    return conv_matrix(h, w, k);
}

inline Matrix mask_matrix(std::size_t h, std::size_t w, const std::vector<std::uint8_t>& flags) {
    const long n = static_cast<long>(h * w);
    Matrix m = Matrix::Zero(n, n);
    for (long i = 0; i < n; ++i) m(i, i) = flags[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
    return m;
}

inline Matrix decimation_matrix(std::size_t h, std::size_t w, std::size_t s) {
    const long oh = static_cast<long>(h / s), ow = static_cast<long>(w / s);
    Matrix m = Matrix::Zero(oh * ow, static_cast<long>(h * w));
    for (long r = 0; r < oh; ++r)
        for (long c = 0; c < ow; ++c)
            m(r * ow + c, (r * static_cast<long>(s)) * static_cast<long>(w) +
                              c * static_cast<long>(s)) = 1.0;
    return m;
}

// Tikhonov normal equations (H^T H + lambda L^T L) x = H^T y, solved by
// Gaussian elimination
inline Vector tikhonov_solve(const Matrix& h_mat, const Matrix& l_mat, double lambda,
                             const Vector& y) {
    Matrix normal = h_mat.transpose() * h_mat + lambda * (l_mat.transpose() * l_mat);
    Vector rhs = h_mat.transpose() * y;
    return gauss_solve(normal, rhs);
}

// --------------------------------------------------------------------------
// simplex grid search for fully constrained least squares, p = 3
// --------------------------------------------------------------------------
// minimizes ||E a - x||^2 over the (p-1)-simplex by brute force on a step
// grid, then refines locally down to 1e-6 steps
inline Vector fcls_grid_search_p3(const Matrix& e, const Vector& x) {
    const Matrix gram = e.transpose() * e;
    const Vector rhs = e.transpose() * x;
    auto objective = [&](double a0, double a1, double a2) {
        // a^T G a - 2 rhs^T a (constant ||x||^2 dropped)
        return a0 * (gram(0, 0) * a0 + gram(0, 1) * a1 + gram(0, 2) * a2) +
               a1 * (gram(1, 0) * a0 + gram(1, 1) * a1 + gram(1, 2) * a2) +
               a2 * (gram(2, 0) * a0 + gram(2, 1) * a1 + gram(2, 2) * a2) -
               2.0 * (rhs(0) * a0 + rhs(1) * a1 + rhs(2) * a2);
    };

    double best0 = 1.0 / 3.0, best1 = 1.0 / 3.0;
    double best_f = objective(best0, best1, 1.0 - best0 - best1);
    {
        const int steps = 1000;
        const double step = 1.0 / steps;
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps - i; ++j) {
                const double a0 = i * step;
                const double a1 = j * step;
                const double f = objective(a0, a1, 1.0 - a0 - a1);
                if (f < best_f) {
                    best_f = f;
                    best0 = a0;
                    best1 = a1;
                }
            }
        }
    }
    // local refinement around the best grid point
    for (double step : {1e-4, 1e-5, 1e-6}) {
        const int radius = 12;
        double center0 = best0, center1 = best1;
        for (int i = -radius; i <= radius; ++i) {
            for (int j = -radius; j <= radius; ++j) {
                const double a0 = center0 + i * step;
                const double a1 = center1 + j * step;
                const double a2 = 1.0 - a0 - a1;
                if (a0 < 0.0 || a1 < 0.0 || a2 < 0.0) continue;
                const double f = objective(a0, a1, a2);
                if (f < best_f) {
                    best_f = f;
                    best0 = a0;
                    best1 = a1;
                }
            }
        }
    }
    Vector a(3);
    a << best0, best1, 1.0 - best0 - best1;
    return a;
}

// --------------------------------------------------------------------------
// principal angles between the column spans of two orthonormal-ish bases
// --------------------------------------------------------------------------
inline double max_principal_angle(const Matrix& a, const Matrix& b) {
    // orthonormalize both bases by Gram-Schmidt; the sines of the principal
    // angles are the singular values of Qb - Qa (Qa^T Qb), which stays
    // accurate for angles far below sqrt(machine epsilon)
    auto gram_schmidt = [](const Matrix& m) {
        Matrix q = m;
        for (int c = 0; c < q.cols(); ++c) {
            for (int rep = 0; rep < 2; ++rep)
                for (int prev = 0; prev < c; ++prev)
                    q.col(c) -= q.col(prev).dot(q.col(c)) * q.col(prev);
            const double norm = q.col(c).norm();
            if (norm > 0.0) q.col(c) /= norm;
        }
        return q;
    };
    Matrix qa = gram_schmidt(a);
    Matrix qb = gram_schmidt(b);
    Matrix residual = qb - qa * (qa.transpose() * qb);
    EigResult eig = jacobi_eig(residual.transpose() * residual);
    const double sin2 = std::clamp(eig.values.maxCoeff(), 0.0, 1.0);
    return std::asin(std::sqrt(sin2));
}

} // namespace oracle
