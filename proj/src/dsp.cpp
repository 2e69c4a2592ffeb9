#include "radalt/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "radalt/errors.hpp"
#include "radalt/fft.hpp"

namespace radalt {

namespace {

std::vector<double> make_window(WindowKind kind, std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (kind == WindowKind::hann && n > 1)
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * M_PI * static_cast<double>(i) /
                                         static_cast<double>(n - 1)));
    return w;
}

/// Offset of a parabola's vertex fitted through three log-power values,
/// clamped to one bin. Returns 0 when the fit is degenerate.
double parabolic_offset(double left, double center, double right) {
    if (left <= 0.0 || center <= 0.0 || right <= 0.0) return 0.0;
    const double l = std::log(left);
    const double c = std::log(center);
    const double r = std::log(right);
    const double denom = l - 2.0 * c + r;
    if (denom >= -1e-300) return 0.0;  // flat or upward-curving fit
    const double delta = 0.5 * (l - r) / denom;
    return std::clamp(delta, -1.0, 1.0);
}

const Detection& select_detection(const std::vector<Detection>& dets, DetectionSelect select) {
    if (select == DetectionSelect::nearest)
        return *std::min_element(dets.begin(), dets.end(),
                                 [](const Detection& a, const Detection& b) {
                                     return a.range_m < b.range_m;
                                 });
    return *std::max_element(dets.begin(), dets.end(),
                             [](const Detection& a, const Detection& b) {
                                 return a.power < b.power;
                             });
}

}  // namespace

std::pair<ComplexSignal, ComplexSignal> split_sweeps(const ComplexSignal& rx,
                                                     const RadarParams& params) {
    const auto expected = static_cast<std::size_t>(params.samples_per_chirp());
    if (rx.size() != expected)
        throw std::invalid_argument("split_sweeps: record length does not match samples per chirp");
    const std::size_t half = rx.size() / 2;
    if (half == 0 || rx.size() % 2 != 0)
        throw std::invalid_argument("split_sweeps: record length must be even");
    ComplexSignal up{{rx.samples.begin(), rx.samples.begin() + static_cast<std::ptrdiff_t>(half)},
                     rx.fs};
    ComplexSignal down{{rx.samples.begin() + static_cast<std::ptrdiff_t>(half), rx.samples.end()},
                       rx.fs};
    return {std::move(up), std::move(down)};
}

ComplexSignal dechirp(const ComplexSignal& rx_half, const ComplexSignal& ref_half) {
    if (rx_half.size() != ref_half.size())
        throw std::invalid_argument("dechirp: length mismatch");
    ComplexSignal out = rx_half;
    for (std::size_t n = 0; n < out.size(); ++n)
        out.samples[n] = rx_half.samples[n] * std::conj(ref_half.samples[n]);
    return out;
}

RangeProfile range_profile(const ComplexSignal& beat, const RadarParams& params, SweepKind kind,
                           WindowKind window, std::size_t n_fft) {
    const std::size_t factor = params.beat_decimation();
    std::vector<cplx> x;
    if (factor > 1) {
        x.reserve(beat.size() / factor + 1);
        for (std::size_t n = 0; n < beat.size(); n += factor) x.push_back(beat.samples[n]);
    } else {
        x = beat.samples;
    }
    const std::size_t len = x.size();
    if (len < 16) throw std::invalid_argument("range_profile: need at least 16 beat samples");
    if (n_fft == 0) n_fft = len;
    if (n_fft < len) throw std::invalid_argument("range_profile: n_fft must be >= signal length");

    const auto w = make_window(window, len);
    std::vector<cplx> padded(n_fft, cplx{0.0, 0.0});
    for (std::size_t n = 0; n < len; ++n) padded[n] = x[n] * w[n];
    const auto spectrum = fft::forward(padded);

    // A target at delay tau beats at -alpha*tau on the up sweep and
    // +alpha*tau on the down sweep; read the matching half-spectrum so
    // positive range always indexes forward.
    const double bin_hz = params.fs_beat / static_cast<double>(n_fft);
    RangeProfile profile;
    profile.sweep_kind = kind;
    profile.range_axis = bin_hz * kSpeedOfLight / (2.0 * params.sweep_slope());
    profile.magnitudes.resize(n_fft / 2);
    for (std::size_t m = 0; m < profile.magnitudes.size(); ++m) {
        const std::size_t idx = kind == SweepKind::up ? (n_fft - m) % n_fft : m;
        profile.magnitudes[m] = std::norm(spectrum[idx]);
    }
    return profile;
}

double cfar_threshold_factor(std::size_t n_cells, double pfa) {
    if (n_cells == 0) throw std::invalid_argument("cfar_threshold_factor: no training cells");
    if (!(pfa > 0.0 && pfa < 1.0))
        throw std::invalid_argument("cfar_threshold_factor: pfa must be in (0, 1)");
    const double n = static_cast<double>(n_cells);
    return n * (std::pow(pfa, -1.0 / n) - 1.0);
}

std::vector<Detection> ca_cfar(const RangeProfile& profile, const CfarConfig& cfg) {
    if (cfg.n_train < 1) throw std::invalid_argument("ca_cfar: n_train must be >= 1");
    if (!(cfg.pfa > 0.0 && cfg.pfa < 1.0))
        throw std::invalid_argument("ca_cfar: pfa must be in (0, 1)");
    const std::size_t len = profile.magnitudes.size();
    if (len <= 2 * (cfg.n_train + cfg.n_guard) + 1)
        throw std::invalid_argument("ca_cfar: profile shorter than the CFAR window");

    const auto& mag = profile.magnitudes;
    std::vector<double> prefix(len + 1, 0.0);
    for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + mag[i];
    const auto window_sum = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
        return prefix[hi] - prefix[lo];
    };

    std::vector<Detection> dets;
    for (std::size_t i = 0; i < len; ++i) {
        // Left training cells: [i - guard - train, i - guard), clamped.
        const std::size_t left_hi = i > cfg.n_guard ? i - cfg.n_guard : 0;
        const std::size_t left_lo = left_hi > cfg.n_train ? left_hi - cfg.n_train : 0;
        // Right training cells: (i + guard, i + guard + train], clamped.
        const std::size_t right_lo = std::min(len, i + cfg.n_guard + 1);
        const std::size_t right_hi = std::min(len, right_lo + cfg.n_train);

        const std::size_t n_cells = (left_hi - left_lo) + (right_hi - right_lo);
        if (n_cells == 0) continue;
        const double noise_sum = window_sum(left_lo, left_hi) + window_sum(right_lo, right_hi);
        const double noise_mean = noise_sum / static_cast<double>(n_cells);
        const double alpha = cfar_threshold_factor(n_cells, cfg.pfa);
        if (!(mag[i] > alpha * noise_mean)) continue;

        Detection d;
        d.bin = i;
        d.power = mag[i];
        double delta = 0.0;
        if (i > 0 && i + 1 < len) delta = parabolic_offset(mag[i - 1], mag[i], mag[i + 1]);
        d.range_m = (static_cast<double>(i) + delta) * profile.range_axis;
        d.snr_est_db = noise_mean > 0.0 ? linear_to_db(mag[i] / noise_mean)
                                        : std::numeric_limits<double>::infinity();
        dets.push_back(d);
    }
    return dets;
}

double estimate_altitude(const std::vector<Detection>& up_dets,
                         const std::vector<Detection>& down_dets, DetectionSelect select) {
    if (up_dets.empty() || down_dets.empty())
        throw NoDetectionError("estimate_altitude: missing detections on one or both sweeps");
    const Detection& up = select_detection(up_dets, select);
    const Detection& down = select_detection(down_dets, select);
    return 0.5 * (up.range_m + down.range_m);
}

double pslr(const RangeProfile& profile) {
    const auto& mag = profile.magnitudes;
    if (mag.size() < 3) throw UndefinedPslrError("pslr: profile too short");
    const std::size_t p = static_cast<std::size_t>(
        std::max_element(mag.begin(), mag.end()) - mag.begin());
    const double peak = mag[p];
    if (peak <= 0.0) throw UndefinedPslrError("pslr: empty profile");

    // Main lobe extends to the first local minimum on each side.
    std::size_t lo = p;
    while (lo > 0 && mag[lo - 1] <= mag[lo]) --lo;
    std::size_t hi = p;
    while (hi + 1 < mag.size() && mag[hi + 1] <= mag[hi]) ++hi;
    if (lo == 0 && hi == mag.size() - 1)
        throw UndefinedPslrError("pslr: profile is monotone around its peak");

    double side = 0.0;
    for (std::size_t i = 0; i < lo; ++i) side = std::max(side, mag[i]);
    for (std::size_t i = hi + 1; i < mag.size(); ++i) side = std::max(side, mag[i]);
    if (side <= 0.0) return std::numeric_limits<double>::infinity();
    return linear_to_db(peak / side);
}

Stft stft(const ComplexSignal& sig, std::size_t n_fft, std::size_t hop, WindowKind window) {
    if (n_fft < 2) throw std::invalid_argument("stft: n_fft must be >= 2");
    if (hop == 0) throw std::invalid_argument("stft: hop must be >= 1");
    if (sig.size() < n_fft) throw std::invalid_argument("stft: signal shorter than n_fft");

    const auto w = make_window(window, n_fft);
    const std::size_t n_frames = 1 + (sig.size() - n_fft) / hop;
    Stft out;
    out.n_fft = n_fft;
    out.hop = hop;
    out.frames.reserve(n_frames);
    std::vector<cplx> buf(n_fft);
    for (std::size_t t = 0; t < n_frames; ++t) {
        const std::size_t off = t * hop;
        for (std::size_t n = 0; n < n_fft; ++n) buf[n] = sig.samples[off + n] * w[n];
        out.frames.push_back(fft::forward(buf));
    }
    return out;
}

std::vector<std::size_t> segment_frames(const ComplexSignal& stream,
                                        const ComplexSignal& ref_chirp) {
    const std::size_t m = stream.size();
    const std::size_t n = ref_chirp.size();
    if (n == 0 || m < n) throw std::invalid_argument("segment_frames: stream shorter than reference");

    const auto corr = fft::xcorr_valid(stream.samples, ref_chirp.samples);

    // Normalized correlation magnitude: 1.0 means a perfect scaled copy.
    double ref_energy = 0.0;
    for (const auto& v : ref_chirp.samples) ref_energy += std::norm(v);
    std::vector<double> win_energy(corr.size());
    {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::norm(stream.samples[i]);
        win_energy[0] = acc;
        for (std::size_t l = 1; l < corr.size(); ++l) {
            acc += std::norm(stream.samples[l + n - 1]) - std::norm(stream.samples[l - 1]);
            win_energy[l] = acc;
        }
    }
    std::vector<double> ncc(corr.size(), 0.0);
    for (std::size_t l = 0; l < corr.size(); ++l) {
        const double denom = std::sqrt(ref_energy * std::max(win_energy[l], 0.0));
        if (denom > 0.0) ncc[l] = std::abs(corr[l]) / denom;
    }

    constexpr double kAbsFloor = 0.2;  // rejects correlation peaks of pure noise
    const double best = *std::max_element(ncc.begin(), ncc.end());
    const double gate = std::max(kAbsFloor, 0.5 * best);

    std::vector<std::size_t> candidates;
    for (std::size_t l = 0; l < ncc.size(); ++l)
        if (ncc[l] >= gate) candidates.push_back(l);
    std::sort(candidates.begin(), candidates.end(),
              [&](std::size_t a, std::size_t b) { return ncc[a] > ncc[b]; });

    const auto min_sep = static_cast<std::size_t>(0.9 * static_cast<double>(n));
    std::vector<std::size_t> accepted;
    for (std::size_t cand : candidates) {
        bool clear = true;
        for (std::size_t a : accepted)
            if ((cand > a ? cand - a : a - cand) < min_sep) {
                clear = false;
                break;
            }
        if (clear) accepted.push_back(cand);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

ChainResult process_record(const ComplexSignal& rx, const ComplexSignal& ref,
                           const RadarParams& params, const AltimeterConfig& cfg) {
    auto [rx_up, rx_down] = split_sweeps(rx, params);
    auto [ref_up, ref_down] = split_sweeps(ref, params);

    ChainResult result;
    result.up_profile = range_profile(dechirp(rx_up, ref_up), params, SweepKind::up, cfg.window);
    result.down_profile =
        range_profile(dechirp(rx_down, ref_down), params, SweepKind::down, cfg.window);
    result.up_dets = ca_cfar(result.up_profile, cfg.cfar);
    result.down_dets = ca_cfar(result.down_profile, cfg.cfar);
    if (!result.up_dets.empty() && !result.down_dets.empty()) {
        result.altitude_m = estimate_altitude(result.up_dets, result.down_dets, cfg.select);
        result.detected = true;
    }
    return result;
}

double altitude_from_record(const ComplexSignal& rx, const ComplexSignal& ref,
                            const RadarParams& params, const AltimeterConfig& cfg) {
    const ChainResult r = process_record(rx, ref, params, cfg);
    if (!r.detected) throw NoDetectionError("altitude_from_record: no ground return detected");
    return r.altitude_m;
}

}  // namespace radalt
