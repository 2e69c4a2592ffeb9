#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "radalt/signal.hpp"
#include "radalt/waveform.hpp"

namespace radalt {

enum class SweepKind { up, down };
enum class WindowKind { none, hann };
enum class DetectionSelect { strongest, nearest };

struct RangeProfile {
    std::vector<double> magnitudes;  // linear power per bin, positive ranges only
    double range_axis = 0.0;         // meters per bin
    SweepKind sweep_kind = SweepKind::up;
};

struct CfarConfig {
    std::size_t n_train = 16;  // training cells per side
    std::size_t n_guard = 4;   // guard cells per side
    double pfa = 1e-4;
};

struct Detection {
    std::size_t bin = 0;
    double range_m = 0.0;    // sub-bin refined, within +-1 bin of bin*range_axis
    double power = 0.0;      // linear cell power
    double snr_est_db = 0.0; // cell over local training mean
};

struct AltimeterConfig {
    CfarConfig cfar;
    WindowKind window = WindowKind::hann;
    DetectionSelect select = DetectionSelect::strongest;
};

/// Splits one full triangular sweep into its up and down halves.
std::pair<ComplexSignal, ComplexSignal> split_sweeps(const ComplexSignal& rx,
                                                     const RadarParams& params);

/// Stretch processing: out[n] = rx_half[n] * conj(ref_half[n]).
ComplexSignal dechirp(const ComplexSignal& rx_half, const ComplexSignal& ref_half);

/// Windowed power spectrum of the beat signal mapped onto positive range.
/// The down-sweep's beat sign is negated before mapping so both sweep
/// kinds index range the same way. Decimates to params.fs_beat first when
/// fs_beat < fs. n_fft = 0 uses the (decimated) length; larger values
/// zero-pad, which resolves sidelobe structure for PSLR measurements.
RangeProfile range_profile(const ComplexSignal& beat, const RadarParams& params, SweepKind kind,
                           WindowKind window = WindowKind::hann, std::size_t n_fft = 0);

/// Threshold multiplier N*(pfa^(-1/N) - 1) for an N-cell averaging window.
double cfar_threshold_factor(std::size_t n_cells, double pfa);

/// Cell-averaging CFAR with one-sided windows at the profile edges (the
/// threshold factor is recomputed for the cells actually available, so the
/// false-alarm rate stays calibrated there). Detections are returned in
/// ascending bin order with parabolically refined ranges.
std::vector<Detection> ca_cfar(const RangeProfile& profile, const CfarConfig& cfg);

/// Averages the selected up- and down-sweep detections; opposite Doppler
/// biases cancel. Throws NoDetectionError when either list is empty.
double estimate_altitude(const std::vector<Detection>& up_dets,
                         const std::vector<Detection>& down_dets,
                         DetectionSelect select = DetectionSelect::strongest);

/// Peak-to-sidelobe ratio in dB: global peak over the largest value
/// outside the main lobe (bounded by the first local minima around the
/// peak). Throws UndefinedPslrError when no sidelobe region exists.
double pslr(const RangeProfile& profile);

struct Stft {
    std::size_t n_fft = 0;
    std::size_t hop = 0;
    std::vector<std::vector<cplx>> frames;  // frames x n_fft complex bins
};

Stft stft(const ComplexSignal& sig, std::size_t n_fft = 256, std::size_t hop = 64,
          WindowKind window = WindowKind::hann);

/// Finds chirp starts in a longer stream by normalized cross-correlation
/// with the reference: peaks above an absolute correlation floor and above
/// half the best peak, separated by at least 0.9 * len(ref).
std::vector<std::size_t> segment_frames(const ComplexSignal& stream,
                                        const ComplexSignal& ref_chirp);

struct ChainResult {
    RangeProfile up_profile;
    RangeProfile down_profile;
    std::vector<Detection> up_dets;
    std::vector<Detection> down_dets;
    double altitude_m = 0.0;  // valid only when detected
    bool detected = false;
};

/// Full conventional chain: split -> dechirp -> profile -> CFAR -> average.
/// Never throws on a miss; check `detected`.
ChainResult process_record(const ComplexSignal& rx, const ComplexSignal& ref,
                           const RadarParams& params, const AltimeterConfig& cfg);

/// Convenience wrapper that throws NoDetectionError on a miss.
double altitude_from_record(const ComplexSignal& rx, const ComplexSignal& ref,
                            const RadarParams& params, const AltimeterConfig& cfg);

}  // namespace radalt
