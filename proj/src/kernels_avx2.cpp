// AVX2/FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64; execution is guarded by runtime dispatch in
// kernels.cpp. On other architectures the table falls back to scalar.

#include "stablerep/kernels.hpp"

#include <cstring>

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace stablerep::kern {
namespace avx2 {

void gemm_nn(int m, int n, int k, const double* a, const double* b, double* c, bool acc) {
    if (!acc) std::memset(c, 0, sizeof(double) * size_t(m) * size_t(n));
    const int n4 = n & ~3;
    for (int i = 0; i < m; ++i) {
        const double* arow = a + size_t(i) * k;
        double* crow = c + size_t(i) * n;
        for (int p = 0; p < k; ++p) {
            const __m256d aip = _mm256_set1_pd(arow[p]);
            const double* brow = b + size_t(p) * n;
            int j = 0;
            for (; j + 16 <= n; j += 16) {
                __m256d c0 = _mm256_loadu_pd(crow + j);
                __m256d c1 = _mm256_loadu_pd(crow + j + 4);
                __m256d c2 = _mm256_loadu_pd(crow + j + 8);
                __m256d c3 = _mm256_loadu_pd(crow + j + 12);
                c0 = _mm256_fmadd_pd(aip, _mm256_loadu_pd(brow + j), c0);
                c1 = _mm256_fmadd_pd(aip, _mm256_loadu_pd(brow + j + 4), c1);
                c2 = _mm256_fmadd_pd(aip, _mm256_loadu_pd(brow + j + 8), c2);
                c3 = _mm256_fmadd_pd(aip, _mm256_loadu_pd(brow + j + 12), c3);
                _mm256_storeu_pd(crow + j, c0);
                _mm256_storeu_pd(crow + j + 4, c1);
                _mm256_storeu_pd(crow + j + 8, c2);
                _mm256_storeu_pd(crow + j + 12, c3);
            }
            for (; j < n4; j += 4) {
                __m256d c0 = _mm256_loadu_pd(crow + j);
                c0 = _mm256_fmadd_pd(aip, _mm256_loadu_pd(brow + j), c0);
                _mm256_storeu_pd(crow + j, c0);
            }
            for (; j < n; ++j) crow[j] += arow[p] * brow[j];
        }
    }
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double dot_n(int n, const double* x, const double* y) {
    __m256d s0 = _mm256_setzero_pd();
    __m256d s1 = _mm256_setzero_pd();
    __m256d s2 = _mm256_setzero_pd();
    __m256d s3 = _mm256_setzero_pd();
    int i = 0;
    for (; i + 16 <= n; i += 16) {
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
        s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
        s2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), s2);
        s3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), s3);
    }
    for (; i + 4 <= n; i += 4)
        s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
    for (; i < n; ++i) s += x[i] * y[i];
    return s;
}

void gemm_nt(int m, int n, int k, const double* a, const double* b, double* c, bool acc) {
    for (int i = 0; i < m; ++i) {
        const double* arow = a + size_t(i) * k;
        double* crow = c + size_t(i) * n;
        for (int j = 0; j < n; ++j) {
            const double s = dot_n(k, arow, b + size_t(j) * k);
            crow[j] = acc ? crow[j] + s : s;
        }
    }
}

void gemm_tn(int m, int n, int k, const double* a, const double* b, double* c, bool acc) {
    if (!acc) std::memset(c, 0, sizeof(double) * size_t(m) * size_t(n));
    const int n4 = n & ~3;
    for (int p = 0; p < k; ++p) {
        const double* arow = a + size_t(p) * m;
        const double* brow = b + size_t(p) * n;
        for (int i = 0; i < m; ++i) {
            const __m256d api = _mm256_set1_pd(arow[i]);
            double* crow = c + size_t(i) * n;
            int j = 0;
            for (; j < n4; j += 4) {
                __m256d c0 = _mm256_loadu_pd(crow + j);
                c0 = _mm256_fmadd_pd(api, _mm256_loadu_pd(brow + j), c0);
                _mm256_storeu_pd(crow + j, c0);
            }
            for (; j < n; ++j) crow[j] += arow[i] * brow[j];
        }
    }
}

double dot(int n, const double* x, const double* y) { return dot_n(n, x, y); }

void axpy(int n, double a, const double* x, double* y) {
    const __m256d av = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d yv = _mm256_loadu_pd(y + i);
        yv = _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), yv);
        _mm256_storeu_pd(y + i, yv);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scale(int n, double a, double* x) {
    const __m256d av = _mm256_set1_pd(a);
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(av, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= a;
}

void add(int n, const double* x, const double* y, double* out) {
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] + y[i];
}

void sub(int n, const double* x, const double* y, double* out) {
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] - y[i];
}

void hadamard(int n, const double* x, const double* y, double* out) {
    int i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) out[i] = x[i] * y[i];
}

double sum(int n, const double* x) {
    __m256d s0 = _mm256_setzero_pd();
    int i = 0;
    for (; i + 4 <= n; i += 4) s0 = _mm256_add_pd(s0, _mm256_loadu_pd(x + i));
    double s = hsum(s0);
    for (; i < n; ++i) s += x[i];
    return s;
}

double sumsq(int n, const double* x) { return dot_n(n, x, x); }

}  // namespace avx2

const KernelTable& avx2_table() {
    static const KernelTable t = {
        avx2::gemm_nn, avx2::gemm_nt, avx2::gemm_tn,
        avx2::dot,     avx2::axpy,    avx2::scale,
        avx2::add,     avx2::sub,     avx2::hadamard,
        avx2::sum,     avx2::sumsq,
    };
    return t;
}

}  // namespace stablerep::kern

#else

namespace stablerep::kern {
const KernelTable& avx2_table() { return scalar_table(); }
}  // namespace stablerep::kern

#endif
