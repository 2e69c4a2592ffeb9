#pragma once

#include "radalt/signal.hpp"

namespace radalt {

/// Triangular-sweep FMCW radar parameters. Defaults follow a 4.3 GHz
/// altimeter with a 7.5 MHz sweep repeated 1000 times per second.
struct RadarParams {
    double fc = 4.3e9;        // carrier frequency, Hz
    double bandwidth = 7.5e6; // sweep bandwidth B, Hz
    double sweep_period = 1e-3;  // T_sw, s (one up+down triangle)
    double fs = 7.5e6;        // waveform sample rate, Hz
    double fs_beat = 7.5e6;   // beat-processing sample rate, Hz (<= fs)
    double amplitude = 1.0;   // A_tx

    /// Sweep slope in Hz/s; derived, never stored independently.
    double sweep_slope() const { return 2.0 * bandwidth / sweep_period; }

    std::size_t samples_per_chirp() const {
        return static_cast<std::size_t>(std::llround(fs * sweep_period));
    }

    /// Integer decimation factor from fs down to fs_beat.
    std::size_t beat_decimation() const;

    /// Throws std::invalid_argument when any invariant is broken
    /// (fs >= B, even samples_per_chirp, positive timing, fs_beat divides fs).
    void validate() const;
};

/// Sign of the sweep half at time t: +1 on the upsweep, -1 on the downsweep.
int sweep_sign(double t, double sweep_period);

/// Time folded into the current half-sweep: (t mod T_sw) mod (T_sw/2).
double t_fold(double t, double sweep_period);

/// Complex-baseband triangular FMCW chirp, one sweep period long.
/// Constant modulus A_tx; instantaneous frequency is a triangle wave over
/// [-B/2, +B/2], rising first; phase is continuous across the fold and
/// returns to zero at the period boundary.
ComplexSignal generate_chirp(const RadarParams& params);

/// Finite-difference phase derivative in Hz; output length is len-1.
/// Entry n estimates the frequency at the midpoint of samples n and n+1.
std::vector<double> instantaneous_frequency(const ComplexSignal& sig);

}  // namespace radalt
