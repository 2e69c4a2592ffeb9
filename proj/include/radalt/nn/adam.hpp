#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

#include "radalt/nn/model.hpp"

namespace radalt::nn {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// First/second-moment accumulators, shaped exactly like the parameter set.
template <typename T>
struct AdamState {
    TensorSet<T> m;
    TensorSet<T> v;
    std::int64_t t = 0;
};

template <typename T>
AdamState<T> make_adam_state(const Geometry& g) {
    AdamState<T> state;
    detail::allocate_tensors(g, state.m);
    detail::allocate_tensors(g, state.v);
    return state;
}

template <typename T>
void zero_tensors(TensorSet<T>& set) {
    visit_tensors(set, [](Mat<T>& m) { m.setZero(); });
}

// One optimizer step: updates `params` in place from accumulated `grads`.
// Moment math is done in double regardless of the storage scalar.
template <typename T>
void adam_step(TensorSet<T>& params, const TensorSet<T>& grads,
               AdamState<T>& state, const AdamConfig& cfg) {
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));

    auto p = tensor_ptrs(params);
    auto g = tensor_ptrs(grads);
    auto m = tensor_ptrs(state.m);
    auto v = tensor_ptrs(state.v);

    for (std::size_t slot = 0; slot < p.size(); ++slot) {
        T* pd = p[slot]->data();
        const T* gd = g[slot]->data();
        T* md = m[slot]->data();
        T* vd = v[slot]->data();
        const Eigen::Index n = p[slot]->size();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double grad = static_cast<double>(gd[i]);
            const double mue = cfg.beta1 * static_cast<double>(md[i]) +
                               (1.0 - cfg.beta1) * grad;
            const double nue = cfg.beta2 * static_cast<double>(vd[i]) +
                               (1.0 - cfg.beta2) * grad * grad;
            md[i] = static_cast<T>(mue);
            vd[i] = static_cast<T>(nue);
            const double m_hat = mue / bc1;
            const double v_hat = nue / bc2;
            pd[i] = static_cast<T>(static_cast<double>(pd[i]) -
                                   cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps));
        }
    }
}

}  // namespace radalt::nn
