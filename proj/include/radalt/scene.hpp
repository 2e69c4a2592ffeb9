#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "radalt/interference.hpp"
#include "radalt/rng.hpp"
#include "radalt/signal.hpp"
#include "radalt/waveform.hpp"

namespace radalt {

/// Band-limited Gaussian amplitude envelope modeling multipath fading.
struct FadingConfig {
    double bw_fraction = 0.10;  // low-pass cutoff as a fraction of fs
    double sigma = 0.3;         // envelope standard deviation after filtering
    double floor = 0.05;        // minimum envelope value
};

/// Point-scatterer ground clutter beyond the nadir return.
struct ClutterConfig {
    int n_scatterers = 8;
    double delay_spread = 2e-6;     // seconds past the nadir delay
    double amplitude_scale = 0.2;   // mean scatterer amplitude relative to the target
    double doppler_spread = 200.0;  // Hz, uniform in [-spread, +spread]
};

using InterferenceSpec = std::variant<ToneSpec, QpskBurstSpec, OfdmSpec>;

struct InterferenceEntry {
    InterferenceSpec spec;
    OverlapSpec overlap;
};

struct SceneConfig {
    double altitude_m = 500.0;
    double descent_rate_mps = 0.0;
    double snr_db = 20.0;  // +infinity = noise-free
    FadingConfig fading;
    ClutterConfig clutter;
    std::vector<InterferenceEntry> interference;
};

struct InterfererMeta {
    std::string kind;  // "tone" | "qpsk" | "ofdm"
    double sir_db = 0.0;
    double overlap_fraction = 1.0;
    std::uint64_t seed = 0;
};

/// One labeled record: the denoising target, the received signal, and
/// enough metadata to regenerate both exactly.
struct ExampleMeta {
    double altitude_m = 0.0;            // as configured
    double effective_altitude_m = 0.0;  // after whole-sample delay quantization
    double descent_rate_mps = 0.0;
    double snr_db = 0.0;
    std::uint64_t seed = 0;
    std::vector<InterfererMeta> interferers;
};

struct Example {
    ComplexSignal clean;  // faded target + clutter; no noise, no interference
    ComplexSignal dirty;  // clean + noise + scaled, gated interference
    ExampleMeta meta;
};

/// Round-trip delay in whole samples for a given altitude.
std::size_t delay_samples(const RadarParams& params, double altitude_m);

/// Ground return: chirp delayed by round(2h/c * fs) samples (zero-filled
/// head) and Doppler-shifted by f_d = 2 * descent_rate * fc / c.
/// Throws std::invalid_argument if the delay falls outside [1, len/4].
ComplexSignal target_return(const ComplexSignal& chirp, const RadarParams& params,
                            double altitude_m, double descent_rate_mps);

/// Sum of n_scatterers delayed/Doppler-shifted chirp copies with Rayleigh
/// amplitudes (mean amplitude_scale) and delays just past the nadir delay.
ComplexSignal clutter_returns(const ComplexSignal& chirp, const RadarParams& params,
                              double altitude_m, const ClutterConfig& cfg, Rng& rng);

/// e[n] = max(floor, 1 + g[n]) with g low-pass filtered white Gaussian
/// noise rescaled to standard deviation sigma after filtering.
std::vector<double> fading_envelope(std::size_t len, double fs, const FadingConfig& cfg,
                                    Rng& rng);

/// Adds circular complex Gaussian noise at the requested SNR; an infinite
/// snr_db returns the signal unchanged.
ComplexSignal add_awgn(const ComplexSignal& sig, double snr_db, Rng& rng);

/// Assembles a labeled example. All randomness is derived from `seed`, so
/// identical (chirp, params, scene, seed) re-creates the example exactly.
Example compose_received(const ComplexSignal& chirp, const RadarParams& params,
                         const SceneConfig& scene, std::uint64_t seed);

const char* interference_kind(const InterferenceSpec& spec);
double interference_sir_db(const InterferenceSpec& spec);

}  // namespace radalt
