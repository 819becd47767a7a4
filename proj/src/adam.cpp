#include "stablerep/adam.hpp"

#include <cmath>
#include <string>

namespace stablerep {

void adam_step(AdamState& state, const std::vector<DenseMatrix*>& params,
               const std::vector<const DenseMatrix*>& grads) {
    if (params.size() != grads.size()) throw ShapeError("adam_step: params/grads count mismatch");
    if (state.m.empty()) {
        for (const DenseMatrix* p : params) {
            state.m.emplace_back(p->rows, p->cols);
            state.v.emplace_back(p->rows, p->cols);
        }
    }
    if (state.m.size() != params.size()) throw ShapeError("adam_step: parameter count changed");

    const AdamConfig& c = state.cfg;
    state.step += 1;
    const double bc1 = 1.0 - std::pow(c.beta1, double(state.step));
    const double bc2 = 1.0 - std::pow(c.beta2, double(state.step));

    for (size_t k = 0; k < params.size(); ++k) {
        DenseMatrix& p = *params[k];
        const DenseMatrix& g = *grads[k];
        if (!p.same_shape(g) || !p.same_shape(state.m[k]))
            throw ShapeError("adam_step: shape mismatch at parameter " + std::to_string(k));
        DenseMatrix& m = state.m[k];
        DenseMatrix& v = state.v[k];
        for (size_t i = 0; i < p.size(); ++i) {
            m.data[i] = c.beta1 * m.data[i] + (1.0 - c.beta1) * g.data[i];
            v.data[i] = c.beta2 * v.data[i] + (1.0 - c.beta2) * g.data[i] * g.data[i];
            const double mhat = m.data[i] / bc1;
            const double vhat = v.data[i] / bc2;
            p.data[i] -= c.lr * (mhat / (std::sqrt(vhat) + c.eps) + c.weight_decay * p.data[i]);
        }
    }
}

}  // namespace stablerep
