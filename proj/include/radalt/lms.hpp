#pragma once

#include <cstddef>
#include <vector>

#include "radalt/signal.hpp"

namespace radalt {

struct LmsConfig {
    std::size_t filter_len = 32;
    std::size_t block_size = 100;
    double mu = 1e-4;
};

struct LmsResult {
    ComplexSignal filtered;
    std::vector<cplx> weights;  // state after the last block update
};

/// Block LMS adaptive filter. Within each block the output is computed
/// with frozen weights, y[n] = sum_k w[k]*rx[n-k] (zero pre-history);
/// the accumulated gradient (mu/block_size)*sum e[n]*conj(rx[n-k]) with
/// e[n] = desired[n] - y[n] is applied once at the block boundary.
/// `initial_weights` (default zeros) lets callers persist adaptation
/// across consecutive records.
LmsResult block_lms(const ComplexSignal& rx, const ComplexSignal& desired, const LmsConfig& cfg,
                    const std::vector<cplx>& initial_weights = {});

}  // namespace radalt
