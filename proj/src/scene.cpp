#include "radalt/scene.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "radalt/errors.hpp"
#include "radalt/fft.hpp"

namespace radalt {

namespace {

/// Delayed, Doppler-shifted, scaled copy of the chirp accumulated into acc.
void add_return(std::vector<cplx>& acc, const ComplexSignal& chirp, std::size_t delay,
                double doppler_hz, cplx gain) {
    const std::size_t len = chirp.size();
    const double w = 2.0 * M_PI * doppler_hz / chirp.fs;
    for (std::size_t n = delay; n < len; ++n)
        acc[n] += gain * chirp.samples[n - delay] * std::polar(1.0, w * static_cast<double>(n));
}

std::vector<cplx> awgn_samples(std::size_t len, double noise_power, Rng& rng) {
    std::vector<cplx> noise(len);
    const double s = std::sqrt(noise_power);
    for (auto& v : noise) v = s * rng.cnormal();
    return noise;
}

double rayleigh(double mean, Rng& rng) {
    // Mean of Rayleigh(sigma) is sigma*sqrt(pi/2).
    const double sigma = mean / std::sqrt(M_PI / 2.0);
    return sigma * std::sqrt(-2.0 * std::log1p(-rng.uniform()));
}

}  // namespace

std::size_t delay_samples(const RadarParams& params, double altitude_m) {
    const double tau = 2.0 * altitude_m / kSpeedOfLight;
    return static_cast<std::size_t>(std::llround(tau * params.fs));
}

ComplexSignal target_return(const ComplexSignal& chirp, const RadarParams& params,
                            double altitude_m, double descent_rate_mps) {
    if (!(altitude_m > 0.0)) throw std::invalid_argument("target_return: altitude must be > 0");
    const std::size_t len = chirp.size();
    const std::size_t d = delay_samples(params, altitude_m);
    if (d < 1 || d > len / 4)
        throw std::invalid_argument("target_return: delay outside [1, len/4] samples");

    const double f_d = 2.0 * descent_rate_mps * params.fc / kSpeedOfLight;
    std::vector<cplx> out(len, cplx{0.0, 0.0});
    add_return(out, chirp, d, f_d, cplx{params.amplitude, 0.0});
    return {std::move(out), chirp.fs};
}

ComplexSignal clutter_returns(const ComplexSignal& chirp, const RadarParams& params,
                              double altitude_m, const ClutterConfig& cfg, Rng& rng) {
    if (cfg.n_scatterers < 0)
        throw std::invalid_argument("clutter_returns: n_scatterers must be >= 0");
    if (cfg.delay_spread < 0.0)
        throw std::invalid_argument("clutter_returns: delay_spread must be >= 0");

    const std::size_t len = chirp.size();
    const double tau = 2.0 * altitude_m / kSpeedOfLight;
    std::vector<cplx> out(len, cplx{0.0, 0.0});
    for (int k = 0; k < cfg.n_scatterers; ++k) {
        // Scatterers lie strictly beyond the nadir return.
        const double tau_k = tau + (1.0 - rng.uniform()) * cfg.delay_spread;
        const double amp = rayleigh(cfg.amplitude_scale * params.amplitude, rng);
        const double doppler = rng.uniform(-cfg.doppler_spread, cfg.doppler_spread);
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        auto d = static_cast<std::size_t>(std::llround(tau_k * params.fs));
        if (d >= len) continue;
        add_return(out, chirp, d, doppler, std::polar(amp, phase));
    }
    return {std::move(out), chirp.fs};
}

std::vector<double> fading_envelope(std::size_t len, double fs, const FadingConfig& cfg,
                                    Rng& rng) {
    if (!(cfg.bw_fraction > 0.0 && cfg.bw_fraction < 1.0))
        throw std::invalid_argument("fading_envelope: bw_fraction must be in (0, 1)");
    if (cfg.sigma < 0.0) throw std::invalid_argument("fading_envelope: sigma must be >= 0");
    if (len == 0) return {};
    if (cfg.sigma == 0.0) return std::vector<double>(len, 1.0);

    std::vector<cplx> g(len);
    for (auto& v : g) v = cplx{rng.normal(), 0.0};

    // Brickwall low-pass: zeroing bins symmetrically keeps the sequence real.
    auto spectrum = fft::forward(g);
    const double cutoff = cfg.bw_fraction * fs;
    for (std::size_t k = 0; k < len; ++k)
        if (std::abs(fft::bin_frequency(k, len, fs)) > cutoff) spectrum[k] = cplx{0.0, 0.0};
    auto filtered = fft::inverse(spectrum);

    std::vector<double> e(len);
    double mean = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        e[n] = filtered[n].real();
        mean += e[n];
    }
    mean /= static_cast<double>(len);
    double var = 0.0;
    for (double v : e) var += (v - mean) * (v - mean);
    var /= static_cast<double>(len);
    const double std_dev = std::sqrt(var);
    if (std_dev == 0.0) return std::vector<double>(len, 1.0);

    for (auto& v : e) v = std::max(cfg.floor, 1.0 + (v - mean) / std_dev * cfg.sigma);
    return e;
}

ComplexSignal add_awgn(const ComplexSignal& sig, double snr_db, Rng& rng) {
    if (std::isinf(snr_db) && snr_db > 0.0) return sig;
    const double p = power(sig);
    if (p <= 0.0) throw std::invalid_argument("add_awgn: zero-power signal");
    const auto noise = awgn_samples(sig.size(), p / db_to_linear(snr_db), rng);
    ComplexSignal out = sig;
    for (std::size_t n = 0; n < out.size(); ++n) out.samples[n] += noise[n];
    return out;
}

const char* interference_kind(const InterferenceSpec& spec) {
    return std::visit(
        [](const auto& s) -> const char* {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ToneSpec>) return "tone";
            else if constexpr (std::is_same_v<T, QpskBurstSpec>) return "qpsk";
            else return "ofdm";
        },
        spec);
}

double interference_sir_db(const InterferenceSpec& spec) {
    return std::visit([](const auto& s) { return s.sir_db; }, spec);
}

Example compose_received(const ComplexSignal& chirp, const RadarParams& params,
                         const SceneConfig& scene, std::uint64_t seed) {
    params.validate();
    const std::size_t len = chirp.size();
    const double fs = chirp.fs;

    // Independent streams so changing one component never shifts another.
    Rng fade_rng(stable_hash(seed, 0));
    Rng clutter_rng(stable_hash(seed, 1));
    Rng noise_rng(stable_hash(seed, 2));

    const auto target = target_return(chirp, params, scene.altitude_m, scene.descent_rate_mps);
    const auto envelope = fading_envelope(len, fs, scene.fading, fade_rng);

    std::vector<cplx> propagated = target.samples;
    if (scene.clutter.n_scatterers > 0 && scene.clutter.amplitude_scale > 0.0) {
        const auto clutter =
            clutter_returns(chirp, params, scene.altitude_m, scene.clutter, clutter_rng);
        for (std::size_t n = 0; n < len; ++n) propagated[n] += clutter.samples[n];
    }
    for (std::size_t n = 0; n < len; ++n) propagated[n] *= envelope[n];
    ComplexSignal clean{std::move(propagated), fs};

    std::vector<cplx> extras(len, cplx{0.0, 0.0});
    if (!(std::isinf(scene.snr_db) && scene.snr_db > 0.0)) {
        const double p_clean = power(clean);
        if (p_clean <= 0.0) throw NumericalDegeneracyError("compose_received: zero-power clean signal");
        const auto noise = awgn_samples(len, p_clean / db_to_linear(scene.snr_db), noise_rng);
        for (std::size_t n = 0; n < len; ++n) extras[n] += noise[n];
    }

    Example ex;
    ex.meta.altitude_m = scene.altitude_m;
    ex.meta.effective_altitude_m =
        static_cast<double>(delay_samples(params, scene.altitude_m)) * kSpeedOfLight / (2.0 * fs);
    ex.meta.descent_rate_mps = scene.descent_rate_mps;
    ex.meta.snr_db = scene.snr_db;
    ex.meta.seed = seed;

    for (std::size_t j = 0; j < scene.interference.size(); ++j) {
        InterferenceSpec spec = scene.interference[j].spec;
        const std::uint64_t gen_seed = stable_hash(seed, 10 + j);
        std::visit([gen_seed](auto& s) { s.rng_seed = gen_seed; }, spec);

        ComplexSignal intf = std::visit(
            [&](auto& s) -> ComplexSignal {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, ToneSpec>) {
                    return gen_tones(s, len, fs);
                } else if constexpr (std::is_same_v<T, QpskBurstSpec>) {
                    if (s.duration == 0) s.duration = len - s.start_offset;
                    return gen_qpsk_burst(s, len, fs);
                } else {
                    s.sample_rate_hz = fs;
                    return gen_ofdm_burst(s, len);
                }
            },
            spec);

        Rng gate_rng(stable_hash(seed, 100 + j));
        const auto gated = apply_overlap(intf, scene.interference[j].overlap, gate_rng);
        const double sir = interference_sir_db(spec);
        if (power(gated) > 0.0) {
            const auto scaled = scale_to_sir(clean, gated, sir);
            for (std::size_t n = 0; n < len; ++n) extras[n] += scaled.samples[n];
        }
        ex.meta.interferers.push_back({interference_kind(spec), sir,
                                       scene.interference[j].overlap.overlap_fraction, gen_seed});
    }

    ComplexSignal dirty = clean;
    for (std::size_t n = 0; n < len; ++n) dirty.samples[n] += extras[n];

    ex.clean = std::move(clean);
    ex.dirty = std::move(dirty);
    return ex;
}

}  // namespace radalt
