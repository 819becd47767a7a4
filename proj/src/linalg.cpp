#include "stablerep/linalg.hpp"

#include <cmath>
#include <limits>

#include "stablerep/kernels.hpp"

namespace stablerep {

bool cholesky_solve(DenseMatrix g, DenseMatrix b, DenseMatrix& out, double pivot_tol) {
    const int n = g.rows;
    if (g.cols != n || b.rows != n) throw ShapeError("cholesky_solve: dimension mismatch");
    // In-place lower-triangular factorization.
    for (int j = 0; j < n; ++j) {
        double d = g(j, j);
        for (int k = 0; k < j; ++k) d -= g(j, k) * g(j, k);
        if (d <= pivot_tol) return false;
        const double l = std::sqrt(d);
        g(j, j) = l;
        for (int i = j + 1; i < n; ++i) {
            double s = g(i, j);
            for (int k = 0; k < j; ++k) s -= g(i, k) * g(j, k);
            g(i, j) = s / l;
        }
    }
    // Forward then back substitution, column by column of B.
    out = DenseMatrix(n, b.cols);
    for (int c = 0; c < b.cols; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = b(i, c);
            for (int k = 0; k < i; ++k) s -= g(i, k) * out(k, c);
            out(i, c) = s / g(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            double s = out(i, c);
            for (int k = i + 1; k < n; ++k) s -= g(k, i) * out(k, c);
            out(i, c) = s / g(i, i);
        }
    }
    return true;
}

std::vector<double> r_squared(const DenseMatrix& pred, const DenseMatrix& y) {
    if (!pred.same_shape(y)) throw ShapeError("r_squared: shape mismatch");
    std::vector<double> out(y.cols);
    for (int j = 0; j < y.cols; ++j) {
        double mean = 0.0;
        for (int i = 0; i < y.rows; ++i) mean += y(i, j);
        mean /= y.rows;
        double ss_res = 0.0, ss_tot = 0.0;
        for (int i = 0; i < y.rows; ++i) {
            const double r = y(i, j) - pred(i, j);
            const double t = y(i, j) - mean;
            ss_res += r * r;
            ss_tot += t * t;
        }
        if (ss_tot < 1e-30)
            out[j] = ss_res < 1e-30 ? 1.0 : -std::numeric_limits<double>::infinity();
        else
            out[j] = 1.0 - ss_res / ss_tot;
    }
    return out;
}

LeastSquaresFit least_squares(const DenseMatrix& x, const DenseMatrix& y) {
    if (x.rows != y.rows) throw ShapeError("least_squares: row count mismatch");
    if (x.rows < x.cols) throw ContractError("least_squares: need n >= d1");

    DenseMatrix gram = matmul_tn(x, x);        // d1×d1
    const DenseMatrix rhs = matmul_tn(x, y);   // d1×d2

    double trace = 0.0;
    for (int i = 0; i < gram.rows; ++i) trace += gram(i, i);
    const double pivot_tol = 1e-12 * std::max(trace / gram.rows, 1.0);

    LeastSquaresFit fit;
    if (!cholesky_solve(gram, rhs, fit.coeffs, pivot_tol)) {
        const double ridge = 1e-8 * trace / gram.rows;
        for (int i = 0; i < gram.rows; ++i) gram(i, i) += ridge;
        if (!cholesky_solve(gram, rhs, fit.coeffs, 0.0))
            throw NumericError("least_squares: rank-deficient design matrix");
        fit.used_ridge = true;
    }
    fit.r2 = r_squared(matmul(x, fit.coeffs), y);
    return fit;
}

double gram_deviation(const DenseMatrix& a) {
    const int d2 = a.rows, d1 = a.cols;
    if (d2 > d1) throw ContractError("gram_deviation: more rows than columns");
    DenseMatrix gram = matmul_nt(a, a);  // d2×d2
    double s = 0.0;
    for (int i = 0; i < d2; ++i) s += gram(i, i);
    s /= d2;
    if (s < 1e-300) throw NumericError("gram_deviation: zero matrix");
    double acc = 0.0;
    for (int i = 0; i < d2; ++i)
        for (int j = 0; j < d2; ++j) {
            const double t = gram(i, j) / s - (i == j ? 1.0 : 0.0);
            acc += t * t;
        }
    return std::sqrt(acc) / std::sqrt(double(d2));
}

DenseMatrix random_orthonormal(int r, int c, RandomStream& rs) {
    if (r > c) throw ContractError("random_orthonormal: need r <= c");
    DenseMatrix q(r, c);
    for (int i = 0; i < r; ++i) {
        for (;;) {
            for (int j = 0; j < c; ++j) q(i, j) = rs.normal();
            // Project off previous rows (twice, for numerical hygiene).
            for (int rep = 0; rep < 2; ++rep)
                for (int k = 0; k < i; ++k) {
                    const double proj = kern::active().dot(c, q.row(i), q.row(k));
                    kern::active().axpy(c, -proj, q.row(k), q.row(i));
                }
            const double nrm = std::sqrt(kern::active().sumsq(c, q.row(i)));
            if (nrm > 1e-8) {
                kern::active().scale(c, 1.0 / nrm, q.row(i));
                break;
            }
        }
    }
    return q;
}

}  // namespace stablerep
