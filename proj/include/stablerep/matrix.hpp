#pragma once

#include <cstddef>
#include <vector>

#include "stablerep/error.hpp"

namespace stablerep {

// Dense row-major matrix of 64-bit floats. Vectors are 1×n or n×1 matrices.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(int r, int c, double fill = 0.0)
        : rows(r), cols(c), data(size_t(r) * size_t(c), fill) {
        if (r < 0 || c < 0) throw ShapeError("negative dimension");
    }

    static DenseMatrix identity(int n) {
        DenseMatrix m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int r, int c) { return data[size_t(r) * cols + c]; }
    double operator()(int r, int c) const { return data[size_t(r) * cols + c]; }

    double* row(int r) { return data.data() + size_t(r) * cols; }
    const double* row(int r) const { return data.data() + size_t(r) * cols; }

    size_t size() const { return data.size(); }
    bool empty() const { return data.empty(); }
    bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }

    bool all_finite() const;
    void check_finite(const char* what) const;  // NumericError when violated
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);     // A·B
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);  // A·Bᵀ
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);  // Aᵀ·B
DenseMatrix transpose(const DenseMatrix& a);

// Each row scaled to unit Euclidean norm; zero rows are rejected.
DenseMatrix row_normalize(const DenseMatrix& m);

double frobenius_norm(const DenseMatrix& m);
double row_norm(const DenseMatrix& m, int r);

}  // namespace stablerep
