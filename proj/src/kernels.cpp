#include "stablerep/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

#include "stablerep/error.hpp"

namespace stablerep::kern {

namespace scalar {

void gemm_nn(int m, int n, int k, const double* a, const double* b, double* c, bool acc) {
    if (!acc) std::memset(c, 0, sizeof(double) * size_t(m) * size_t(n));
    for (int i = 0; i < m; ++i) {
        const double* arow = a + size_t(i) * k;
        double* crow = c + size_t(i) * n;
        for (int p = 0; p < k; ++p) {
            const double aip = arow[p];
            const double* brow = b + size_t(p) * n;
            for (int j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

void gemm_nt(int m, int n, int k, const double* a, const double* b, double* c, bool acc) {
    for (int i = 0; i < m; ++i) {
        const double* arow = a + size_t(i) * k;
        double* crow = c + size_t(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* brow = b + size_t(j) * k;
            double s = 0.0;
            for (int p = 0; p < k; ++p) s += arow[p] * brow[p];
            crow[j] = acc ? crow[j] + s : s;
        }
    }
}

void gemm_tn(int m, int n, int k, const double* a, const double* b, double* c, bool acc) {
    if (!acc) std::memset(c, 0, sizeof(double) * size_t(m) * size_t(n));
    for (int p = 0; p < k; ++p) {
        const double* arow = a + size_t(p) * m;
        const double* brow = b + size_t(p) * n;
        for (int i = 0; i < m; ++i) {
            const double api = arow[i];
            double* crow = c + size_t(i) * n;
            for (int j = 0; j < n; ++j) crow[j] += api * brow[j];
        }
    }
}

double dot(int n, const double* x, const double* y) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * y[i];
    return s;
}

void axpy(int n, double a, const double* x, double* y) {
    for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(int n, double a, double* x) {
    for (int i = 0; i < n; ++i) x[i] *= a;
}

void add(int n, const double* x, const double* y, double* out) {
    for (int i = 0; i < n; ++i) out[i] = x[i] + y[i];
}

void sub(int n, const double* x, const double* y, double* out) {
    for (int i = 0; i < n; ++i) out[i] = x[i] - y[i];
}

void hadamard(int n, const double* x, const double* y, double* out) {
    for (int i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

double sum(int n, const double* x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i];
    return s;
}

double sumsq(int n, const double* x) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

}  // namespace scalar

const KernelTable& scalar_table() {
    static const KernelTable t = {
        scalar::gemm_nn, scalar::gemm_nt, scalar::gemm_tn,
        scalar::dot,     scalar::axpy,    scalar::scale,
        scalar::add,     scalar::sub,     scalar::hadamard,
        scalar::sum,     scalar::sumsq,
    };
    return t;
}

const char* isa_name(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa detect_best() {
    return avx2_available() ? Isa::avx2 : Isa::scalar;
}

namespace {

Isa initial_isa() {
    if (const char* env = std::getenv("STABLEREP_ISA")) {
        const std::string s(env);
        if (s == "scalar") return Isa::scalar;
        if (s == "avx2") {
            if (!avx2_available()) throw ConfigError("STABLEREP_ISA=avx2 but CPU lacks AVX2/FMA");
            return Isa::avx2;
        }
        throw ConfigError("unknown STABLEREP_ISA value: " + s);
    }
    return detect_best();
}

Isa& current_isa() {
    static Isa isa = initial_isa();
    return isa;
}

}  // namespace

Isa active_isa() { return current_isa(); }

void use_isa(Isa isa) {
    if (isa == Isa::avx2 && !avx2_available())
        throw ConfigError("AVX2/FMA not available on this CPU");
    current_isa() = isa;
}

const KernelTable& active() {
    return current_isa() == Isa::avx2 ? avx2_table() : scalar_table();
}

}  // namespace stablerep::kern
