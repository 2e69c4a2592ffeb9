#include "radalt/lms.hpp"

#include <algorithm>
#include <stdexcept>

namespace radalt {

LmsResult block_lms(const ComplexSignal& rx, const ComplexSignal& desired, const LmsConfig& cfg,
                    const std::vector<cplx>& initial_weights) {
    if (rx.size() != desired.size()) throw std::invalid_argument("block_lms: length mismatch");
    if (cfg.filter_len < 1) throw std::invalid_argument("block_lms: filter_len must be >= 1");
    if (cfg.block_size < 1) throw std::invalid_argument("block_lms: block_size must be >= 1");
    if (!(cfg.mu >= 0.0)) throw std::invalid_argument("block_lms: mu must be >= 0");
    if (rx.size() < cfg.block_size)
        throw std::invalid_argument("block_lms: signal shorter than one block");
    if (!initial_weights.empty() && initial_weights.size() != cfg.filter_len)
        throw std::invalid_argument("block_lms: initial weight count != filter_len");

    const std::size_t len = rx.size();
    const std::size_t taps = cfg.filter_len;
    std::vector<cplx> w(taps, cplx{0.0, 0.0});
    if (!initial_weights.empty()) w = initial_weights;

    LmsResult result;
    result.filtered.fs = rx.fs;
    result.filtered.samples.assign(len, cplx{0.0, 0.0});
    std::vector<cplx> grad(taps);

    for (std::size_t block = 0; block < len; block += cfg.block_size) {
        const std::size_t end = std::min(len, block + cfg.block_size);
        std::fill(grad.begin(), grad.end(), cplx{0.0, 0.0});
        for (std::size_t n = block; n < end; ++n) {
            cplx y{0.0, 0.0};
            const std::size_t k_max = std::min(taps - 1, n);
            for (std::size_t k = 0; k <= k_max; ++k) y += w[k] * rx.samples[n - k];
            result.filtered.samples[n] = y;
            const cplx e = desired.samples[n] - y;
            for (std::size_t k = 0; k <= k_max; ++k) grad[k] += e * std::conj(rx.samples[n - k]);
        }
        const double step = cfg.mu / static_cast<double>(cfg.block_size);
        for (std::size_t k = 0; k < taps; ++k) w[k] += step * grad[k];
    }

    result.weights = std::move(w);
    return result;
}

}  // namespace radalt
