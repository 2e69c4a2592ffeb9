#include "radalt/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "radalt/dataset.hpp"
#include "radalt/errors.hpp"
#include "radalt/serialize.hpp"
#include "radalt/waveform.hpp"

namespace radalt::eval {

namespace {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

double rmse_of_errors(const std::vector<double>& errors) {
    double acc = 0.0;
    for (double e : errors) acc += e * e;
    return std::sqrt(acc / static_cast<double>(errors.size()));
}

/// Median with the even-count convention of averaging the two middle
/// elements; deterministic for any input order.
double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double reconstruction_rmse(const ComplexSignal& a, const ComplexSignal& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("reconstruction_rmse: length mismatch");
    double acc = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) acc += std::norm(a.samples[n] - b.samples[n]);
    return std::sqrt(acc / static_cast<double>(a.size()));
}

/// Sidelobe ratio of the up-sweep beat spectrum, measured on a 4x
/// zero-padded profile so the lobe structure is resolved.
double trial_pslr(const ComplexSignal& mitigated, const ComplexSignal& chirp,
                  const RadarParams& params) {
    const auto [rx_up, rx_down] = split_sweeps(mitigated, params);
    const auto [ref_up, ref_down] = split_sweeps(chirp, params);
    const auto beat = dechirp(rx_up, ref_up);
    const std::size_t decimated = beat.size() / params.beat_decimation();
    const auto profile = range_profile(beat, params, SweepKind::up, WindowKind::hann,
                                       4 * decimated);
    return pslr(profile);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.close();
    if (!out) throw std::runtime_error("emit_report: write failed for " + path.string());
}

/// Shortest representation that parses back to the same double
/// (std::to_chars default); keeps report files byte-deterministic.
void append_number(std::string& out, double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

struct CellAccumulator {
    std::vector<double> errors_m;
    std::vector<double> recon;
    std::vector<double> pslrs;
    std::size_t misses = 0;
};

}  // namespace

const char* mitigation_name(Mitigation m) {
    switch (m) {
        case Mitigation::none: return "none";
        case Mitigation::lms: return "lms";
        case Mitigation::tcn: return "tcn";
    }
    throw std::logic_error("mitigation_name: invalid enum value");
}

Mitigation mitigation_from_string(std::string_view name) {
    if (name == "none") return Mitigation::none;
    if (name == "lms") return Mitigation::lms;
    if (name == "tcn") return Mitigation::tcn;
    throw InvalidConfigError("unknown mitigation '" + std::string(name) +
                             "' (expected none|lms|tcn)");
}

const char* interferer_class_name(InterfererClass c) {
    switch (c) {
        case InterfererClass::tone: return "tone";
        case InterfererClass::qpsk: return "qpsk";
        case InterfererClass::ofdm: return "ofdm";
    }
    throw std::logic_error("interferer_class_name: invalid enum value");
}

InterfererClass interferer_class_from_string(std::string_view name) {
    if (name == "tone") return InterfererClass::tone;
    if (name == "qpsk") return InterfererClass::qpsk;
    if (name == "ofdm") return InterfererClass::ofdm;
    throw InvalidConfigError("unknown interferer class '" + std::string(name) +
                             "' (expected tone|qpsk|ofdm)");
}

std::vector<double> descent_schedule(double start_m, double end_m, std::size_t n) {
    if (n == 0) throw InvalidConfigError("descent_schedule: n must be >= 1");
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = start_m;
        return out;
    }
    const double step = (end_m - start_m) / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) out[k] = start_m + step * static_cast<double>(k);
    return out;
}

void SweepConfig::validate() const {
    if (sinr_grid_db.empty()) throw InvalidConfigError("sweep: sinr_grid_db must be non-empty");
    if (overlap_grid.empty()) throw InvalidConfigError("sweep: overlap_grid must be non-empty");
    if (n_trials == 0) throw InvalidConfigError("sweep: n_trials must be >= 1");
    if (mitigations.empty()) throw InvalidConfigError("sweep: mitigations must be non-empty");
    if (altitudes_m.empty()) throw InvalidConfigError("sweep: altitudes_m must be non-empty");
    for (double a : altitudes_m)
        if (!(a > 0.0)) throw InvalidConfigError("sweep: altitudes must be positive");
    for (double o : overlap_grid)
        if (!(o >= 0.0) || o > 1.0)
            throw InvalidConfigError("sweep: overlap values must lie in [0, 1]");
    for (double s : sinr_grid_db) sir_for_sinr_db(s, snr_db);  // throws when unattainable
}

double altitude_rmse(const std::vector<double>& estimates_m, const std::vector<double>& truths_m) {
    if (estimates_m.empty() || estimates_m.size() != truths_m.size())
        throw std::invalid_argument("altitude_rmse: inputs must be non-empty and equally sized");
    double acc = 0.0;
    for (std::size_t i = 0; i < estimates_m.size(); ++i) {
        const double e = estimates_m[i] - truths_m[i];
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(estimates_m.size()));
}

double detection_probability(const std::vector<double>& errors_m, double threshold_m) {
    if (errors_m.empty()) throw std::invalid_argument("detection_probability: empty input");
    std::size_t hits = 0;
    for (double e : errors_m)
        if (std::abs(e) < threshold_m) ++hits;
    return static_cast<double>(hits) / static_cast<double>(errors_m.size());
}

double max_unambiguous_range_m(const RadarParams& params) {
    const double max_delay_s =
        static_cast<double>(params.samples_per_chirp() / 4) / params.fs;
    return kSpeedOfLight * max_delay_s / 2.0;
}

double sir_for_sinr_db(double sinr_db, double snr_db) {
    if (std::isinf(snr_db) && snr_db > 0.0) return sinr_db;
    const double sinr = db_to_linear(sinr_db);
    const double snr = db_to_linear(snr_db);
    if (sinr >= snr)
        throw InvalidConfigError(
            "sir_for_sinr_db: target SINR must be below the configured SNR (noise alone "
            "already exceeds the requested total)");
    return linear_to_db(1.0 / (1.0 / sinr - 1.0 / snr));
}

InterferenceEntry make_interferer(InterfererClass cls, double sir_db, double overlap_fraction,
                                  const RadarParams& params, Rng& rng) {
    if (!(overlap_fraction > 0.0) || overlap_fraction > 1.0)
        throw InvalidConfigError("make_interferer: overlap must lie in (0, 1]");
    const DatasetRecipe ranges;  // nuisance draws share the dataset synthesis ranges
    const auto len = params.samples_per_chirp();
    // sir_db targets the interferer's ACTIVE window: the emitter keeps a
    // constant power density and the overlap only changes its duty cycle,
    // as in an on-air test with a fixed-power transmitter. The scene
    // scaler works on whole-record averages, so the duty cycle converts
    // the target here.
    const auto record_sir = [&](double duty) { return sir_db - 10.0 * std::log10(duty); };
    switch (cls) {
        case InterfererClass::tone: {
            ToneSpec tone;
            tone.n_tones = static_cast<int>(rng.uniform_int(1, std::max(1, ranges.max_tones)));
            tone.bandwidth_hz = params.bandwidth;
            const double duty =
                std::max<double>(1.0, std::round(overlap_fraction * static_cast<double>(len))) /
                static_cast<double>(len);
            tone.sir_db = record_sir(duty);
            return {tone, OverlapSpec{overlap_fraction}};
        }
        case InterfererClass::qpsk: {
            QpskBurstSpec q;
            // The synthesis ranges assume the reference sample rate; on a
            // scaled-down radar the burst still has to fit inside the band.
            q.bandwidth_hz =
                std::min(rng.uniform(ranges.qpsk_bandwidth_hz.lo, ranges.qpsk_bandwidth_hz.hi),
                         0.4 * params.fs);
            q.duration = std::max<std::size_t>(
                1, static_cast<std::size_t>(
                       std::llround(overlap_fraction * static_cast<double>(len))));
            q.duration = std::min(q.duration, len);
            q.sir_db = record_sir(static_cast<double>(q.duration) / static_cast<double>(len));
            q.start_offset = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(len - q.duration)));
            // Bursts centered outside the beat band the estimator reads
            // are invisible to it and would only dilute the sweep, so the
            // center stays inside the processed half-band (and inside
            // Nyquist including the rolloff excess).
            const double max_center =
                std::min(params.fs / 4.0,
                         std::max(0.0, params.fs / 2.0 -
                                           q.bandwidth_hz * (1.0 + q.rolloff) / 2.0));
            q.center_freq_hz = rng.uniform(-max_center, max_center);
            return {q, OverlapSpec{1.0}};  // the burst duration itself encodes the overlap
        }
        case InterfererClass::ofdm: {
            OfdmSpec o;
            o.sample_rate_hz = params.fs;
            o.channel_bw_hz = rng.uniform() < 0.5 ? 5e6 : 10e6;
            const double duty =
                std::max<double>(1.0, std::round(overlap_fraction * static_cast<double>(len))) /
                static_cast<double>(len);
            o.sir_db = record_sir(duty);
            return {o, OverlapSpec{overlap_fraction}};
        }
    }
    throw std::logic_error("make_interferer: invalid enum value");
}

ComplexSignal apply_mitigation(Mitigation m, const ComplexSignal& dirty,
                               const ComplexSignal& ref_chirp, const MitigationContext& ctx) {
    switch (m) {
        case Mitigation::none: return dirty;
        case Mitigation::lms:
            // The clean chirp drives the filter and the received signal is
            // the desired response, so the output keeps only what the
            // filter can explain as delayed copies of the chirp: the
            // ground return. Interference is uncorrelated with the chirp
            // and drops out of the learned taps.
            return block_lms(ref_chirp, dirty, ctx.lms).filtered;
        case Mitigation::tcn:
            if (ctx.model == nullptr)
                throw InvalidConfigError("apply_mitigation: tcn requires a trained model");
            return nn::denoise(*ctx.model, dirty);
    }
    throw std::logic_error("apply_mitigation: invalid enum value");
}

SweepResult run_sweep(const SweepConfig& cfg, const RadarParams& params,
                      const MitigationContext& ctx, const AltimeterConfig& alt_cfg) {
    cfg.validate();
    params.validate();
    const bool wants_tcn =
        std::find(cfg.mitigations.begin(), cfg.mitigations.end(), Mitigation::tcn) !=
        cfg.mitigations.end();
    if (wants_tcn) {
        if (ctx.model == nullptr)
            throw InvalidConfigError("run_sweep: tcn mitigation requires a trained model");
        if (ctx.model->config.input_len != params.samples_per_chirp())
            throw InvalidConfigError("run_sweep: model input length " +
                                     std::to_string(ctx.model->config.input_len) +
                                     " does not match the radar record length " +
                                     std::to_string(params.samples_per_chirp()));
    }

    const auto chirp = generate_chirp(params);
    const double miss_error = max_unambiguous_range_m(params);
    const std::size_t n_sinr = cfg.sinr_grid_db.size();
    const std::size_t n_ovl = cfg.overlap_grid.size();
    const std::size_t n_arms = cfg.mitigations.size();
    std::vector<CellAccumulator> acc(n_arms * n_sinr * n_ovl);
    const auto slot = [&](std::size_t ai, std::size_t si, std::size_t oi) {
        return ai * n_sinr * n_ovl + si * n_ovl + oi;
    };

    for (std::size_t si = 0; si < n_sinr; ++si) {
        const double sir_db = sir_for_sinr_db(cfg.sinr_grid_db[si], cfg.snr_db);
        for (std::size_t oi = 0; oi < n_ovl; ++oi) {
            const double overlap = cfg.overlap_grid[oi];
            for (std::size_t t = 0; t < cfg.n_trials; ++t) {
                // One example per trial, shared by every mitigation arm.
                const std::uint64_t trial_seed = stable_hash(cfg.seed, si, oi, t);
                SceneConfig scene;
                scene.altitude_m = cfg.altitudes_m[t % cfg.altitudes_m.size()];
                scene.descent_rate_mps = cfg.descent_rate_mps;
                scene.snr_db = cfg.snr_db;
                scene.fading = cfg.fading;
                scene.clutter = cfg.clutter;
                if (overlap > 0.0) {
                    Rng nuisance(stable_hash(trial_seed, 500));
                    scene.interference.push_back(
                        make_interferer(cfg.interference, sir_db, overlap, params, nuisance));
                }
                const Example ex = compose_received(chirp, params, scene, trial_seed);

                for (std::size_t ai = 0; ai < n_arms; ++ai) {
                    CellAccumulator& cell = acc[slot(ai, si, oi)];
                    const ComplexSignal mitigated =
                        apply_mitigation(cfg.mitigations[ai], ex.dirty, chirp, ctx);
                    const ChainResult chain = process_record(mitigated, chirp, params, alt_cfg);
                    if (chain.detected) {
                        cell.errors_m.push_back(chain.altitude_m - ex.meta.effective_altitude_m);
                    } else {
                        cell.errors_m.push_back(miss_error);
                        ++cell.misses;
                    }
                    cell.recon.push_back(reconstruction_rmse(mitigated, ex.clean));
                    try {
                        cell.pslrs.push_back(trial_pslr(mitigated, chirp, params));
                    } catch (const UndefinedPslrError&) {
                        // profile had no sidelobe structure; excluded from the median
                    }
                }
            }
        }
    }

    SweepResult out;
    out.config = cfg;
    out.cells.reserve(acc.size());
    for (std::size_t ai = 0; ai < n_arms; ++ai) {
        for (std::size_t si = 0; si < n_sinr; ++si) {
            for (std::size_t oi = 0; oi < n_ovl; ++oi) {
                const CellAccumulator& cell = acc[slot(ai, si, oi)];
                CellResult r;
                r.mitigation = cfg.mitigations[ai];
                r.sinr_db = cfg.sinr_grid_db[si];
                r.overlap = cfg.overlap_grid[oi];
                r.rmse_m = rmse_of_errors(cell.errors_m);
                r.pd = detection_probability(cell.errors_m);
                r.recon_rmse = median(cell.recon);
                r.pslr_db = median(cell.pslrs);
                r.miss_rate =
                    static_cast<double>(cell.misses) / static_cast<double>(cfg.n_trials);
                out.cells.push_back(r);
            }
        }
    }
    return out;
}

void LandingConfig::validate() const {
    if (altitudes_m.empty()) throw InvalidConfigError("landing: altitudes_m must be non-empty");
    for (double a : altitudes_m)
        if (!(a > 0.0)) throw InvalidConfigError("landing: altitudes must be positive");
    if (!(overlap_fraction >= 0.0) || overlap_fraction > 1.0)
        throw InvalidConfigError("landing: overlap must lie in [0, 1]");
    if (sinr_db.has_value()) sir_for_sinr_db(*sinr_db, snr_db);  // throws when unattainable
}

LandingResult landing_scenario(const LandingConfig& cfg, const RadarParams& params,
                               const MitigationContext& ctx, const AltimeterConfig& alt_cfg) {
    cfg.validate();
    params.validate();
    if (cfg.mitigation == Mitigation::tcn && ctx.model == nullptr)
        throw InvalidConfigError("landing_scenario: tcn mitigation requires a trained model");

    const auto chirp = generate_chirp(params);
    const double max_range = max_unambiguous_range_m(params);
    LandingResult out;
    out.config = cfg;
    out.steps.reserve(cfg.altitudes_m.size());

    for (std::size_t k = 0; k < cfg.altitudes_m.size(); ++k) {
        const std::uint64_t step_seed = stable_hash(cfg.seed, k);
        SceneConfig scene;
        scene.altitude_m = cfg.altitudes_m[k];
        scene.descent_rate_mps = cfg.descent_rate_mps;
        scene.snr_db = cfg.snr_db;
        scene.fading = cfg.fading;
        scene.clutter = cfg.clutter;
        if (cfg.sinr_db.has_value() && cfg.overlap_fraction > 0.0) {
            Rng nuisance(stable_hash(step_seed, 500));
            scene.interference.push_back(
                make_interferer(cfg.interference, sir_for_sinr_db(*cfg.sinr_db, cfg.snr_db),
                                cfg.overlap_fraction, params, nuisance));
        }
        const Example ex = compose_received(chirp, params, scene, step_seed);
        const ComplexSignal mitigated = apply_mitigation(cfg.mitigation, ex.dirty, chirp, ctx);
        const ChainResult chain = process_record(mitigated, chirp, params, alt_cfg);

        LandingStep step;
        step.truth_m = ex.meta.effective_altitude_m;
        step.detected = chain.detected;
        step.estimate_m = chain.detected ? chain.altitude_m : max_range;
        step.error_m = step.estimate_m - step.truth_m;
        out.steps.push_back(step);
    }
    return out;
}

void emit_report(const SweepResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::string csv = "mitigation,sinr_db,overlap,rmse_m,pd,recon_rmse,pslr_db,miss_rate\n";
    for (const CellResult& cell : result.cells) {
        csv += mitigation_name(cell.mitigation);
        csv += ',';
        append_number(csv, cell.sinr_db);
        csv += ',';
        append_number(csv, cell.overlap);
        csv += ',';
        append_number(csv, cell.rmse_m);
        csv += ',';
        append_number(csv, cell.pd);
        csv += ',';
        append_number(csv, cell.recon_rmse);
        csv += ',';
        append_number(csv, cell.pslr_db);
        csv += ',';
        append_number(csv, cell.miss_rate);
        csv += '\n';
    }
    write_text_file(out_dir / "sweep.csv", csv);

    json summary;
    summary["config"] = result.config;
    summary["cells"] = result.cells;
    write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
}

void emit_report(const LandingResult& result, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    std::string csv = "truth_m,estimate_m,error_m,detected\n";
    for (const LandingStep& step : result.steps) {
        append_number(csv, step.truth_m);
        csv += ',';
        append_number(csv, step.estimate_m);
        csv += ',';
        append_number(csv, step.error_m);
        csv += ',';
        csv += step.detected ? '1' : '0';
        csv += '\n';
    }
    write_text_file(out_dir / "landing.csv", csv);

    json summary;
    summary["config"] = result.config;
    summary["steps"] = result.steps;
    write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
}

}  // namespace radalt::eval
