#pragma once

#include <vector>

#include "stablerep/matrix.hpp"
#include "stablerep/rng.hpp"

namespace stablerep {

struct LeastSquaresFit {
    DenseMatrix coeffs;       // d1×d2, minimizes ‖X·B − Y‖_F
    std::vector<double> r2;   // per output column, on the fitting data
    bool used_ridge = false;
};

// Normal-equations solve with a deterministic ridge fallback
// (λ = 1e-8·trace(XᵀX)/d1) when the Gram matrix is near-singular.
// Requires n >= d1; throws NumericError if rank-deficient even with ridge.
LeastSquaresFit least_squares(const DenseMatrix& x, const DenseMatrix& y);

// R² of predictions against targets, per output column (centered total SS).
std::vector<double> r_squared(const DenseMatrix& pred, const DenseMatrix& y);

// Scale-normalized semi-orthogonality deviation of A (d2×d1, d2 <= d1):
// ‖AAᵀ/s − I‖_F/√d2 with s = trace(AAᵀ)/d2.
double gram_deviation(const DenseMatrix& a);

// Cholesky solve of the SPD system G·X = B; returns false if a pivot falls
// below the threshold.
bool cholesky_solve(DenseMatrix g, DenseMatrix b, DenseMatrix& out, double pivot_tol);

// Random matrix with orthonormal rows (r <= c), via Gram–Schmidt on
// Gaussian draws.
DenseMatrix random_orthonormal(int r, int c, RandomStream& rs);

}  // namespace stablerep
