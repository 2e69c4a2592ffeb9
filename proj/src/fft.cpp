#include "radalt/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace radalt::fft {
namespace {

// FFTW plan creation is not thread-safe; execution via the new-array
// interface is. Plans are cached per (size, direction) and created with
// FFTW_ESTIMATE so the chosen algorithm depends only on the size, keeping
// results reproducible run to run.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        const std::uint64_t key = (static_cast<std::uint64_t>(n) << 1) | (sign == FFTW_BACKWARD);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        // Scratch buffers only shape the plan; execution uses caller arrays.
        fftw_complex* buf = fftw_alloc_complex(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign, FFTW_ESTIMATE);
        fftw_free(buf);
        if (!plan) throw std::runtime_error("fftw plan creation failed");
        plans_.emplace(key, plan);
        return plan;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::unordered_map<std::uint64_t, fftw_plan> plans_;
};

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {
        if (!data) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(data); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* data;
};

std::vector<std::complex<double>> transform(std::span<const std::complex<double>> in, int sign) {
    if (in.empty()) throw std::invalid_argument("fft: empty input");
    const std::size_t n = in.size();
    fftw_plan plan = PlanCache::instance().get(n, sign);
    FftwBuffer buf(n);
    std::memcpy(buf.data, in.data(), n * sizeof(fftw_complex));
    fftw_execute_dft(plan, buf.data, buf.data);
    std::vector<std::complex<double>> out(n);
    std::memcpy(out.data(), buf.data, n * sizeof(fftw_complex));
    return out;
}

}  // namespace

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in) {
    return transform(in, FFTW_FORWARD);
}

std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in) {
    auto out = transform(in, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(out.size());
    for (auto& v : out) v *= scale;
    return out;
}

double bin_frequency(std::size_t bin, std::size_t n, double fs) {
    if (bin >= n) throw std::invalid_argument("bin_frequency: bin out of range");
    const auto k = static_cast<double>(bin);
    const auto nn = static_cast<double>(n);
    return (bin <= n / 2) ? k * fs / nn : (k - nn) * fs / nn;
}

std::vector<std::complex<double>> xcorr_valid(std::span<const std::complex<double>> stream,
                                              std::span<const std::complex<double>> ref) {
    if (ref.empty() || stream.size() < ref.size())
        throw std::invalid_argument("xcorr_valid: stream shorter than reference");
    const std::size_t n_lags = stream.size() - ref.size() + 1;
    // Circular correlation of zero-padded copies yields the linear lags.
    std::size_t n = 1;
    while (n < stream.size() + ref.size()) n <<= 1;
    std::vector<std::complex<double>> a(n, 0.0), b(n, 0.0);
    std::copy(stream.begin(), stream.end(), a.begin());
    std::copy(ref.begin(), ref.end(), b.begin());
    auto fa = forward(a);
    auto fb = forward(b);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= std::conj(fb[i]);
    auto corr = inverse(fa);
    corr.resize(n_lags);
    return corr;
}

}  // namespace radalt::fft
