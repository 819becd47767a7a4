#pragma once

#include <cstdint>

namespace stablerep {

// Counter-based random stream: output i is a hash of (seed, stream-id, i),
// so identical (seed, stream-id) always replay the same sequence and child
// streams forked with distinct labels are statistically independent. No
// hidden state beyond the counter; forking never advances the parent.
class RandomStream {
  public:
    explicit RandomStream(uint64_t seed, uint64_t stream_id = 0);

    RandomStream fork(uint64_t child_label) const;

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }
    uint64_t counter() const { return counter_; }

    uint64_t next_u64();
    // Uniform in [0, 1).
    double uniform();
    double uniform(double lo, double hi);
    // Standard normal via Box–Muller (two uniforms per draw, no cached spare).
    double normal();
    double normal(double mu, double sigma);
    // Uniform integer in [0, n).
    uint64_t below(uint64_t n);

  private:
    uint64_t seed_ = 0;
    uint64_t stream_id_ = 0;
    uint64_t key_ = 0;
    uint64_t counter_ = 0;
};

}  // namespace stablerep
