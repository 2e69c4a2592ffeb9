#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace radalt {

using cplx = std::complex<double>;

/// A finite sequence of complex baseband IQ samples at a fixed sample rate.
struct ComplexSignal {
    std::vector<cplx> samples;
    double fs = 0.0;  // Hz

    ComplexSignal() = default;
    ComplexSignal(std::vector<cplx> s, double sample_rate)
        : samples(std::move(s)), fs(sample_rate) {}

    std::size_t size() const { return samples.size(); }
    double duration() const { return fs > 0 ? static_cast<double>(samples.size()) / fs : 0.0; }
};

/// Mean of |s[n]|^2. All SNR/SIR scaling in the toolkit goes through this.
inline double power(std::span<const cplx> s) {
    if (s.empty()) throw std::invalid_argument("power: empty signal");
    double acc = 0.0;
    for (const auto& v : s) acc += std::norm(v);
    return acc / static_cast<double>(s.size());
}

inline double power(const ComplexSignal& s) { return power(std::span<const cplx>(s.samples)); }

/// Root-mean-square distance between two equal-length signals.
inline double rmse(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw std::invalid_argument("rmse: length mismatch");
    if (a.empty()) throw std::invalid_argument("rmse: empty signals");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return std::sqrt(acc / static_cast<double>(a.size()));
}

inline double rmse(const ComplexSignal& a, const ComplexSignal& b) {
    return rmse(std::span<const cplx>(a.samples), std::span<const cplx>(b.samples));
}

inline bool all_finite(std::span<const cplx> s) {
    for (const auto& v : s)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

}  // namespace radalt
