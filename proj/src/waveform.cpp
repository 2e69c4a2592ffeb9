#include "radalt/waveform.hpp"

#include <cmath>
#include <stdexcept>

#include "radalt/errors.hpp"

namespace radalt {

std::size_t RadarParams::beat_decimation() const {
    const double ratio = fs / fs_beat;
    const auto factor = static_cast<std::size_t>(std::llround(ratio));
    if (factor < 1 || std::abs(ratio - static_cast<double>(factor)) > 1e-9)
        throw std::invalid_argument("RadarParams: fs/fs_beat must be a positive integer");
    return factor;
}

void RadarParams::validate() const {
    if (!(fc > 0) || !(bandwidth > 0) || !(sweep_period > 0) || !(fs > 0) || !(fs_beat > 0))
        throw std::invalid_argument("RadarParams: all rates and periods must be positive");
    if (fs < bandwidth)
        throw std::invalid_argument("RadarParams: fs must cover the sweep bandwidth (fs >= B)");
    if (!(amplitude > 0))
        throw std::invalid_argument("RadarParams: amplitude must be positive");
    const std::size_t n = samples_per_chirp();
    if (n == 0 || n % 2 != 0)
        throw std::invalid_argument("RadarParams: samples_per_chirp must be positive and even");
    beat_decimation();
}

namespace {

double positive_mod(double x, double m) {
    double r = std::fmod(x, m);
    return r < 0 ? r + m : r;
}

}  // namespace

int sweep_sign(double t, double sweep_period) {
    if (!std::isfinite(t)) throw std::invalid_argument("sweep_sign: non-finite time");
    if (!(sweep_period > 0)) throw std::invalid_argument("sweep_sign: sweep_period must be > 0");
    const double folded = positive_mod(t, sweep_period);
    const auto half_index = static_cast<long long>(std::floor(folded / (sweep_period / 2.0)));
    return (half_index % 2 == 0) ? 1 : -1;
}

double t_fold(double t, double sweep_period) {
    if (!std::isfinite(t)) throw std::invalid_argument("t_fold: non-finite time");
    if (!(sweep_period > 0)) throw std::invalid_argument("t_fold: sweep_period must be > 0");
    return positive_mod(positive_mod(t, sweep_period), sweep_period / 2.0);
}

ComplexSignal generate_chirp(const RadarParams& params) {
    params.validate();
    const std::size_t n = params.samples_per_chirp();
    const double alpha = params.sweep_slope();
    const double half_bw = params.bandwidth / 2.0;

    std::vector<cplx> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / params.fs;
        const double u = t_fold(t, params.sweep_period);
        const int sign = sweep_sign(t, params.sweep_period);
        // Baseband phase: f sweeps -B/2 -> +B/2 on the up half and back on
        // the down half, continuous across the fold, zero at period edges.
        const double phase = 2.0 * M_PI * sign * (0.5 * alpha * u * u - half_bw * u);
        samples[i] = std::polar(params.amplitude, phase);
    }
    return {std::move(samples), params.fs};
}

std::vector<double> instantaneous_frequency(const ComplexSignal& sig) {
    if (sig.size() < 2)
        throw std::invalid_argument("instantaneous_frequency: need at least 2 samples");
    std::vector<double> freq(sig.size() - 1);
    for (std::size_t i = 0; i + 1 < sig.size(); ++i) {
        const cplx a = sig.samples[i];
        const cplx b = sig.samples[i + 1];
        if (std::abs(a) == 0.0 || std::abs(b) == 0.0)
            throw NumericalDegeneracyError("instantaneous_frequency: zero-magnitude sample");
        freq[i] = std::arg(b * std::conj(a)) * sig.fs / (2.0 * M_PI);
    }
    return freq;
}

}  // namespace radalt
