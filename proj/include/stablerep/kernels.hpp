#pragma once

#include <cstddef>

// Low-level dense kernels. Every entry point has a scalar reference
// implementation and (on x86-64 with AVX2+FMA) a vectorized variant; the
// active set is chosen once at startup from cpuid and can be overridden with
// the STABLEREP_ISA environment variable ("scalar" or "avx2") or from code
// via use_isa(). All matrices are contiguous row-major.

namespace stablerep::kern {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

// Best instruction set the running CPU supports.
Isa detect_best();

// Currently active set (initialized lazily from STABLEREP_ISA / detect_best).
Isa active_isa();

// Force a specific set; throws ConfigError if unsupported on this CPU.
void use_isa(Isa isa);

struct KernelTable {
    // C[m×n] = A[m×k]·B[k×n]        (+= when acc)
    void (*gemm_nn)(int m, int n, int k, const double* a, const double* b, double* c, bool acc);
    // C[m×n] = A[m×k]·B[n×k]ᵀ
    void (*gemm_nt)(int m, int n, int k, const double* a, const double* b, double* c, bool acc);
    // C[m×n] = A[k×m]ᵀ·B[k×n]
    void (*gemm_tn)(int m, int n, int k, const double* a, const double* b, double* c, bool acc);

    double (*dot)(int n, const double* x, const double* y);
    void (*axpy)(int n, double a, const double* x, double* y);      // y += a·x
    void (*scale)(int n, double a, double* x);                      // x *= a
    void (*add)(int n, const double* x, const double* y, double* out);
    void (*sub)(int n, const double* x, const double* y, double* out);
    void (*hadamard)(int n, const double* x, const double* y, double* out);
    double (*sum)(int n, const double* x);
    double (*sumsq)(int n, const double* x);
};

const KernelTable& active();

// Reference (scalar) table, used directly by equivalence tests.
const KernelTable& scalar_table();
// AVX2 table; entries valid only when detect_best() >= avx2.
const KernelTable& avx2_table();
bool avx2_available();

}  // namespace stablerep::kern
