#pragma once

#include <vector>

#include "stablerep/matrix.hpp"

namespace stablerep {

struct AdamConfig {
    double lr = 1e-4;
    double weight_decay = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Adam with decoupled weight decay (applied as lr·wd·param outside the
// moment estimates). Moments are allocated lazily to match the parameters.
struct AdamState {
    AdamConfig cfg;
    long step = 0;
    std::vector<DenseMatrix> m;
    std::vector<DenseMatrix> v;

    explicit AdamState(AdamConfig c = {}) : cfg(c) {}
};

void adam_step(AdamState& state, const std::vector<DenseMatrix*>& params,
               const std::vector<const DenseMatrix*>& grads);

}  // namespace stablerep
