#pragma once

#include <cstdint>
#include <vector>

#include "radalt/rng.hpp"
#include "radalt/signal.hpp"

namespace radalt {

/// CW tones spread across the radar bandwidth. With freqs_hz empty the
/// tones sit on the interior points of a uniform grid over
/// [-bandwidth/2, +bandwidth/2]; explicit frequencies override the grid.
struct ToneSpec {
    int n_tones = 1;
    double sir_db = 0.0;          // applied later via scale_to_sir
    double bandwidth_hz = 7.5e6;  // placement span
    std::vector<double> freqs_hz; // optional explicit placement
    std::uint64_t rng_seed = 0;
};

/// Root-raised-cosine shaped QPSK burst occupying a time/frequency patch.
struct QpskBurstSpec {
    double bandwidth_hz = 1e6;   // also the symbol rate
    double center_freq_hz = 0.0;
    std::size_t duration = 0;    // active samples
    std::size_t start_offset = 0;
    double sir_db = 0.0;
    double rolloff = 0.35;
    int span_symbols = 8;        // RRC pulse span
    std::uint64_t rng_seed = 0;
};

/// CP-OFDM surrogate for a 5G downlink carrier: QPSK on all active
/// subcarriers, no synchronization or control structure.
struct OfdmSpec {
    double subcarrier_spacing_hz = 15e3;
    double channel_bw_hz = 5e6;   // typically 5e6 or 10e6
    double sample_rate_hz = 7.5e6;
    int n_symbols = 0;            // 0 = enough symbols to cover the record
    double cp_fraction = 0.07;
    double sir_db = 0.0;
    std::uint64_t rng_seed = 0;

    std::size_t fft_size() const;
    /// floor(min(channel_bw, sample_rate)/spacing), forced even, centered.
    std::size_t active_subcarriers() const;
    std::size_t cp_length() const;
};

/// Fraction of the chirp duration during which interference is active.
struct OverlapSpec {
    double overlap_fraction = 1.0;  // in [0, 1]
};

/// Sum of complex exponentials with seeded random initial phases,
/// normalized to unit aggregate power.
ComplexSignal gen_tones(const ToneSpec& spec, std::size_t len, double fs);

/// RRC-shaped QPSK at spec.bandwidth symbols/s, shifted to center_freq,
/// exactly zero outside [start_offset, start_offset+duration); unit power
/// over the active region.
ComplexSignal gen_qpsk_burst(const QpskBurstSpec& spec, std::size_t len, double fs);

/// CP-OFDM symbol train truncated/zero-padded to len; unit power over the
/// active region.
ComplexSignal gen_ofdm_burst(const OfdmSpec& spec, std::size_t len);

/// Returns intf scaled so that power(clean)/power(scaled) = 10^(sir_db/10),
/// both powers averaged over the full record.
ComplexSignal scale_to_sir(const ComplexSignal& clean, const ComplexSignal& intf, double sir_db);

/// Gates the interference to a contiguous window of round(f*len) samples
/// at a seeded random start; never widens the support.
ComplexSignal apply_overlap(const ComplexSignal& intf, const OverlapSpec& spec, Rng& rng);

}  // namespace radalt
