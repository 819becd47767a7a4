#include "stablerep/matrix.hpp"

#include <cmath>
#include <string>

#include "stablerep/kernels.hpp"

namespace stablerep {

bool DenseMatrix::all_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) return false;
    return true;
}

void DenseMatrix::check_finite(const char* what) const {
    if (!all_finite()) throw NumericError(std::string(what) + ": non-finite entry");
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.rows)
        throw ShapeError("matmul: " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                         " * " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
    DenseMatrix c(a.rows, b.cols);
    kern::active().gemm_nn(a.rows, b.cols, a.cols, a.data.data(), b.data.data(), c.data.data(), false);
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols != b.cols) throw ShapeError("matmul_nt: inner dims differ");
    DenseMatrix c(a.rows, b.rows);
    kern::active().gemm_nt(a.rows, b.rows, a.cols, a.data.data(), b.data.data(), c.data.data(), false);
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows != b.rows) throw ShapeError("matmul_tn: inner dims differ");
    DenseMatrix c(a.cols, b.cols);
    kern::active().gemm_tn(a.cols, b.cols, a.rows, a.data.data(), b.data.data(), c.data.data(), false);
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols, a.rows);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

double row_norm(const DenseMatrix& m, int r) {
    return std::sqrt(kern::active().sumsq(m.cols, m.row(r)));
}

DenseMatrix row_normalize(const DenseMatrix& m) {
    DenseMatrix out = m;
    for (int r = 0; r < m.rows; ++r) {
        const double nrm = row_norm(m, r);
        if (nrm < 1e-150) throw NumericError("row_normalize: zero row " + std::to_string(r));
        kern::active().scale(m.cols, 1.0 / nrm, out.row(r));
    }
    return out;
}

double frobenius_norm(const DenseMatrix& m) {
    return std::sqrt(kern::active().sumsq(int(m.size()), m.data.data()));
}

}  // namespace stablerep
