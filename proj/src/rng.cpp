#include "stablerep/rng.hpp"

#include <cmath>

namespace stablerep {

namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer; passes BigCrush when driven by a Weyl counter.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(uint64_t seed, uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
    key_ = mix64(seed + kGolden) ^ mix64(stream_id * 0xda942042e4dd58b5ULL + kGolden);
}

RandomStream RandomStream::fork(uint64_t child_label) const {
    // Child stream ids are derived by hashing, so fork(0), fork(1), ... of
    // the same parent never collide with the parent or each other.
    return RandomStream(seed_, mix64(key_ + (child_label + 1) * kGolden));
}

uint64_t RandomStream::next_u64() {
    return mix64(key_ + (++counter_) * kGolden);
}

double RandomStream::uniform() {
    return double(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double RandomStream::normal() {
    // Box–Muller, cosine branch only; counter advances by exactly two.
    double u1 = uniform();
    const double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();  // unreachable in practice (u < 2^-53)
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

double RandomStream::normal(double mu, double sigma) {
    return mu + sigma * normal();
}

uint64_t RandomStream::below(uint64_t n) {
    // Debiased multiply-shift (Lemire).
    if (n == 0) return 0;
    const uint64_t threshold = (0 - n) % n;
    for (;;) {
        const uint64_t r = next_u64();
        const unsigned __int128 m = (unsigned __int128)r * n;
        if ((uint64_t)m >= threshold) return uint64_t(m >> 64);
    }
}

}  // namespace stablerep
