#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "radalt/dsp.hpp"
#include "radalt/lms.hpp"
#include "radalt/nn/train.hpp"
#include "radalt/scene.hpp"

namespace radalt::eval {

enum class Mitigation { none, lms, tcn };

const char* mitigation_name(Mitigation m);
Mitigation mitigation_from_string(std::string_view name);  // throws InvalidConfigError

enum class InterfererClass { tone, qpsk, ofdm };

const char* interferer_class_name(InterfererClass c);
InterfererClass interferer_class_from_string(std::string_view name);  // throws InvalidConfigError

/// Linearly spaced altitude schedule from start_m to end_m inclusive.
std::vector<double> descent_schedule(double start_m, double end_m, std::size_t n);

/// Grid sweep over interference severity. Noise stays fixed at snr_db;
/// the interferer is scaled per cell so that
/// SINR = P_signal / (P_noise + P_interference) hits the grid value,
/// with the interference power measured over its active window: the
/// emitter keeps a constant power density and the overlap axis only
/// changes its duty cycle, the way a fixed-power transmitter behaves.
/// Trial t flies at altitudes_m[t % altitudes_m.size()].
struct SweepConfig {
    std::vector<double> sinr_grid_db{-15.0, -10.0, -5.0, 0.0};
    std::vector<double> overlap_grid{0.25, 0.5, 0.75, 1.0};
    std::size_t n_trials = 25;
    std::vector<Mitigation> mitigations{Mitigation::none, Mitigation::lms, Mitigation::tcn};
    InterfererClass interference = InterfererClass::qpsk;
    std::vector<double> altitudes_m = descent_schedule(900.0, 300.0, 25);
    double descent_rate_mps = 4.0;
    double snr_db = 20.0;
    std::uint64_t seed = 1;
    FadingConfig fading;
    ClutterConfig clutter;

    /// Throws InvalidConfigError: empty grids/schedule/mitigations,
    /// n_trials == 0, overlap outside [0,1], or any sinr >= snr (the
    /// interference power needed to reach such a cell would be <= 0).
    void validate() const;
};

/// Aggregates for one (mitigation, sinr, overlap) grid cell.
struct CellResult {
    Mitigation mitigation = Mitigation::none;
    double sinr_db = 0.0;
    double overlap = 0.0;
    double rmse_m = 0.0;      // altitude RMSE; misses clamped to max unambiguous range
    double pd = 0.0;          // fraction of trials with |altitude error| < 5 m
    double recon_rmse = 0.0;  // median per-sample reconstruction RMSE vs the clean signal
    double pslr_db = 0.0;     // median peak-to-sidelobe ratio; NaN when undefined in all trials
    double miss_rate = 0.0;   // fraction of trials with no CFAR detection
};

struct SweepResult {
    SweepConfig config;
    std::vector<CellResult> cells;  // mitigation-major, then sinr, then overlap
};

/// Root-mean-square difference between paired estimates and truths.
/// Throws std::invalid_argument on empty or mismatched inputs.
double altitude_rmse(const std::vector<double>& estimates_m, const std::vector<double>& truths_m);

/// Fraction of |error| < threshold. Misses must already be encoded as
/// clamped large errors. Throws std::invalid_argument on empty input.
double detection_probability(const std::vector<double>& errors_m, double threshold_m = 5.0);

/// Range corresponding to the largest delay the scene model accepts
/// (one quarter of the record length); a missed detection contributes
/// this as its clamped altitude error.
double max_unambiguous_range_m(const RadarParams& params);

/// SIR (dB) an interferer must be scaled to so that, with noise at
/// snr_db, the combined SINR equals sinr_db. Throws InvalidConfigError
/// when sinr_db >= snr_db. Infinite snr_db returns sinr_db unchanged.
double sir_for_sinr_db(double sinr_db, double snr_db);

/// One interferer of the given class at a forced temporal overlap, with
/// sir_db the target SIR over the interferer's ACTIVE window (the
/// stored spec carries the record-average equivalent). Placement
/// nuisances (tone count, burst position, center frequency, channel
/// width) are drawn from rng using the same ranges as the dataset
/// recipe, except that burst centers stay inside the beat band the
/// altitude estimator actually reads.
InterferenceEntry make_interferer(InterfererClass cls, double sir_db, double overlap_fraction,
                                  const RadarParams& params, Rng& rng);

struct MitigationContext {
    const nn::ModelParams* model = nullptr;  // required when Mitigation::tcn is used
    LmsConfig lms;
};

/// none: pass-through copy. lms: block LMS adapting toward the clean
/// transmitted chirp; the filter output goes downstream. tcn: denoising
/// autoencoder inference. Throws InvalidConfigError when tcn is
/// requested without a model.
ComplexSignal apply_mitigation(Mitigation m, const ComplexSignal& dirty,
                               const ComplexSignal& ref_chirp, const MitigationContext& ctx);

/// Runs every (mitigation, sinr, overlap) cell for n_trials trials.
/// All mitigation arms of a trial share one synthesized example (seed
/// stable_hash(cfg.seed, sinr index, overlap index, trial)), so arm
/// comparisons are paired. Identical config -> identical result.
SweepResult run_sweep(const SweepConfig& cfg, const RadarParams& params,
                      const MitigationContext& ctx, const AltimeterConfig& alt_cfg = {});

/// Per-chirp synthesis and estimation along an altitude schedule.
/// sinr_db empty -> interference-free flight.
struct LandingConfig {
    std::vector<double> altitudes_m = descent_schedule(900.0, 300.0, 60);
    double descent_rate_mps = 4.0;
    double snr_db = 20.0;
    Mitigation mitigation = Mitigation::none;
    InterfererClass interference = InterfererClass::qpsk;
    std::optional<double> sinr_db;
    double overlap_fraction = 1.0;
    std::uint64_t seed = 1;
    FadingConfig fading;
    ClutterConfig clutter;

    void validate() const;  // non-empty positive schedule, overlap in [0,1], sinr < snr
};

struct LandingStep {
    double truth_m = 0.0;     // effective altitude after delay quantization
    double estimate_m = 0.0;  // clamped to max unambiguous range on a miss
    double error_m = 0.0;     // estimate - truth
    bool detected = false;
};

struct LandingResult {
    LandingConfig config;
    std::vector<LandingStep> steps;  // one per schedule entry
};

LandingResult landing_scenario(const LandingConfig& cfg, const RadarParams& params,
                               const MitigationContext& ctx, const AltimeterConfig& alt_cfg = {});

/// Writes sweep.csv (header mitigation,sinr_db,overlap,rmse_m,pd,
/// recon_rmse,pslr_db,miss_rate; one row per cell, shortest
/// round-trip number formatting) and summary.json (full config plus
/// cells) into out_dir, creating it if needed. Identical results
/// produce byte-identical files.
void emit_report(const SweepResult& result, const std::filesystem::path& out_dir);

/// Writes landing.csv (header truth_m,estimate_m,error_m,detected; one
/// row per step, detected as 0/1) and summary.json (config plus steps)
/// into out_dir, creating it if needed.
void emit_report(const LandingResult& result, const std::filesystem::path& out_dir);

}  // namespace radalt::eval
