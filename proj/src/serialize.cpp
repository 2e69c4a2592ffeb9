#include "radalt/serialize.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "radalt/errors.hpp"

namespace radalt {

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* context) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) {
                known = true;
                break;
            }
        if (!known)
            throw InvalidConfigError(std::string(context) + ": unknown key '" + key + "'");
    }
}

namespace {

template <typename T>
void get_if_present(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) it->get_to(out);
}

}  // namespace

void to_json(json& j, const RadarParams& p) {
    j = json{{"fc_hz", p.fc},
             {"bandwidth_hz", p.bandwidth},
             {"sweep_period_s", p.sweep_period},
             {"fs_hz", p.fs},
             {"fs_beat_hz", p.fs_beat},
             {"amplitude", p.amplitude}};
}

void from_json(const json& j, RadarParams& p) {
    require_keys(j, {"fc_hz", "bandwidth_hz", "sweep_period_s", "fs_hz", "fs_beat_hz", "amplitude"},
                 "radar");
    get_if_present(j, "fc_hz", p.fc);
    get_if_present(j, "bandwidth_hz", p.bandwidth);
    get_if_present(j, "sweep_period_s", p.sweep_period);
    get_if_present(j, "fs_hz", p.fs);
    get_if_present(j, "fs_beat_hz", p.fs_beat);
    get_if_present(j, "amplitude", p.amplitude);
}

void to_json(json& j, const ParamRange& r) { j = json{{"lo", r.lo}, {"hi", r.hi}}; }

void from_json(const json& j, ParamRange& r) {
    require_keys(j, {"lo", "hi"}, "range");
    get_if_present(j, "lo", r.lo);
    get_if_present(j, "hi", r.hi);
}

void to_json(json& j, const FadingConfig& c) {
    j = json{{"bw_fraction", c.bw_fraction}, {"sigma", c.sigma}, {"floor", c.floor}};
}

void from_json(const json& j, FadingConfig& c) {
    require_keys(j, {"bw_fraction", "sigma", "floor"}, "fading");
    get_if_present(j, "bw_fraction", c.bw_fraction);
    get_if_present(j, "sigma", c.sigma);
    get_if_present(j, "floor", c.floor);
}

void to_json(json& j, const ClutterConfig& c) {
    j = json{{"n_scatterers", c.n_scatterers},
             {"delay_spread_s", c.delay_spread},
             {"amplitude_scale", c.amplitude_scale},
             {"doppler_spread_hz", c.doppler_spread}};
}

void from_json(const json& j, ClutterConfig& c) {
    require_keys(j, {"n_scatterers", "delay_spread_s", "amplitude_scale", "doppler_spread_hz"},
                 "clutter");
    get_if_present(j, "n_scatterers", c.n_scatterers);
    get_if_present(j, "delay_spread_s", c.delay_spread);
    get_if_present(j, "amplitude_scale", c.amplitude_scale);
    get_if_present(j, "doppler_spread_hz", c.doppler_spread);
}

void to_json(json& j, const DatasetRecipe& r) {
    j = json{{"altitude_m", r.altitude_m},
             {"descent_rate_mps", r.descent_rate_mps},
             {"snr_db", r.snr_db},
             {"fading", r.fading},
             {"clutter", r.clutter},
             {"p_tone", r.p_tone},
             {"p_qpsk", r.p_qpsk},
             {"p_ofdm", r.p_ofdm},
             {"max_tones", r.max_tones},
             {"tone_sir_db", r.tone_sir_db},
             {"qpsk_sir_db", r.qpsk_sir_db},
             {"qpsk_bandwidth_hz", r.qpsk_bandwidth_hz},
             {"ofdm_sir_db", r.ofdm_sir_db},
             {"overlap_fraction", r.overlap_fraction}};
}

void from_json(const json& j, DatasetRecipe& r) {
    require_keys(j,
                 {"altitude_m", "descent_rate_mps", "snr_db", "fading", "clutter", "p_tone",
                  "p_qpsk", "p_ofdm", "max_tones", "tone_sir_db", "qpsk_sir_db",
                  "qpsk_bandwidth_hz", "ofdm_sir_db", "overlap_fraction"},
                 "recipe");
    get_if_present(j, "altitude_m", r.altitude_m);
    get_if_present(j, "descent_rate_mps", r.descent_rate_mps);
    get_if_present(j, "snr_db", r.snr_db);
    get_if_present(j, "fading", r.fading);
    get_if_present(j, "clutter", r.clutter);
    get_if_present(j, "p_tone", r.p_tone);
    get_if_present(j, "p_qpsk", r.p_qpsk);
    get_if_present(j, "p_ofdm", r.p_ofdm);
    get_if_present(j, "max_tones", r.max_tones);
    get_if_present(j, "tone_sir_db", r.tone_sir_db);
    get_if_present(j, "qpsk_sir_db", r.qpsk_sir_db);
    get_if_present(j, "qpsk_bandwidth_hz", r.qpsk_bandwidth_hz);
    get_if_present(j, "ofdm_sir_db", r.ofdm_sir_db);
    get_if_present(j, "overlap_fraction", r.overlap_fraction);
}

void to_json(json& j, const DatasetConfig& c) {
    j = json{{"n_train", c.n_train},
             {"n_val", c.n_val},
             {"record_len", c.record_len},
             {"radar", c.params},
             {"recipe", c.recipe}};
}

void from_json(const json& j, DatasetConfig& c) {
    require_keys(j, {"n_train", "n_val", "record_len", "radar", "recipe"}, "dataset");
    get_if_present(j, "n_train", c.n_train);
    get_if_present(j, "n_val", c.n_val);
    get_if_present(j, "record_len", c.record_len);
    get_if_present(j, "radar", c.params);
    get_if_present(j, "recipe", c.recipe);
}

void to_json(json& j, const InterfererMeta& m) {
    j = json{{"kind", m.kind},
             {"sir_db", m.sir_db},
             {"overlap_fraction", m.overlap_fraction},
             {"seed", m.seed}};
}

void from_json(const json& j, InterfererMeta& m) {
    require_keys(j, {"kind", "sir_db", "overlap_fraction", "seed"}, "interferer");
    get_if_present(j, "kind", m.kind);
    get_if_present(j, "sir_db", m.sir_db);
    get_if_present(j, "overlap_fraction", m.overlap_fraction);
    get_if_present(j, "seed", m.seed);
}

void to_json(json& j, const ExampleMeta& m) {
    j = json{{"altitude_m", m.altitude_m},
             {"effective_altitude_m", m.effective_altitude_m},
             {"descent_rate_mps", m.descent_rate_mps},
             {"snr_db", m.snr_db},
             {"seed", m.seed},
             {"interferers", m.interferers}};
    // JSON has no infinity literal; null marks the noise-free sentinel.
    if (!std::isfinite(m.snr_db)) j["snr_db"] = nullptr;
}

void from_json(const json& j, ExampleMeta& m) {
    require_keys(j,
                 {"altitude_m", "effective_altitude_m", "descent_rate_mps", "snr_db", "seed",
                  "interferers"},
                 "example_meta");
    get_if_present(j, "altitude_m", m.altitude_m);
    get_if_present(j, "effective_altitude_m", m.effective_altitude_m);
    get_if_present(j, "descent_rate_mps", m.descent_rate_mps);
    if (auto it = j.find("snr_db"); it != j.end())
        m.snr_db = it->is_null() ? std::numeric_limits<double>::infinity()
                                 : it->get<double>();
    get_if_present(j, "seed", m.seed);
    get_if_present(j, "interferers", m.interferers);
}

}  // namespace radalt

namespace radalt::nn {

using radalt::json;
using radalt::require_keys;

void to_json(json& j, const ModelConfig& c) {
    j = json{{"input_len", c.input_len},
             {"latent_dim", c.latent_dim},
             {"enc_channels", c.enc_channels},
             {"dropout_rate", c.dropout_rate},
             {"variant", variant_name(c.variant)},
             {"dec_len0", c.dec_len0}};
}

void from_json(const json& j, ModelConfig& c) {
    require_keys(j,
                 {"input_len", "latent_dim", "enc_channels", "dropout_rate", "variant",
                  "dec_len0"},
                 "model");
    if (auto it = j.find("input_len"); it != j.end()) it->get_to(c.input_len);
    if (auto it = j.find("latent_dim"); it != j.end()) it->get_to(c.latent_dim);
    if (auto it = j.find("enc_channels"); it != j.end()) it->get_to(c.enc_channels);
    if (auto it = j.find("dropout_rate"); it != j.end()) it->get_to(c.dropout_rate);
    if (auto it = j.find("variant"); it != j.end())
        c.variant = variant_from_string(it->get<std::string>());
    if (auto it = j.find("dec_len0"); it != j.end()) it->get_to(c.dec_len0);
}

void to_json(json& j, const TrainConfig& c) {
    j = json{{"lr", c.lr},
             {"batch_size", c.batch_size},
             {"epochs", c.epochs},
             {"beta1", c.beta1},
             {"beta2", c.beta2},
             {"eps", c.eps},
             {"seed", c.seed}};
}

void from_json(const json& j, TrainConfig& c) {
    require_keys(j, {"lr", "batch_size", "epochs", "beta1", "beta2", "eps", "seed"}, "train");
    if (auto it = j.find("lr"); it != j.end()) it->get_to(c.lr);
    if (auto it = j.find("batch_size"); it != j.end()) it->get_to(c.batch_size);
    if (auto it = j.find("epochs"); it != j.end()) it->get_to(c.epochs);
    if (auto it = j.find("beta1"); it != j.end()) it->get_to(c.beta1);
    if (auto it = j.find("beta2"); it != j.end()) it->get_to(c.beta2);
    if (auto it = j.find("eps"); it != j.end()) it->get_to(c.eps);
    if (auto it = j.find("seed"); it != j.end()) it->get_to(c.seed);
}

void to_json(json& j, const TrainHistory& h) {
    j = json{{"initial_val_loss", h.initial_val_loss},
             {"train_loss", h.train_loss},
             {"val_loss", h.val_loss}};
}

void from_json(const json& j, TrainHistory& h) {
    require_keys(j, {"initial_val_loss", "train_loss", "val_loss"}, "history");
    if (auto it = j.find("initial_val_loss"); it != j.end()) it->get_to(h.initial_val_loss);
    if (auto it = j.find("train_loss"); it != j.end()) it->get_to(h.train_loss);
    if (auto it = j.find("val_loss"); it != j.end()) it->get_to(h.val_loss);
}

}  // namespace radalt::nn

namespace radalt {

namespace {

const char* window_name(WindowKind w) {
    return w == WindowKind::hann ? "hann" : "none";
}

WindowKind window_from_string(const std::string& s) {
    if (s == "hann") return WindowKind::hann;
    if (s == "none") return WindowKind::none;
    throw InvalidConfigError("unknown window '" + s + "' (expected none|hann)");
}

const char* select_name(DetectionSelect s) {
    return s == DetectionSelect::nearest ? "nearest" : "strongest";
}

DetectionSelect select_from_string(const std::string& s) {
    if (s == "strongest") return DetectionSelect::strongest;
    if (s == "nearest") return DetectionSelect::nearest;
    throw InvalidConfigError("unknown detection select '" + s +
                             "' (expected strongest|nearest)");
}

}  // namespace

void to_json(json& j, const CfarConfig& c) {
    j = json{{"n_train", c.n_train}, {"n_guard", c.n_guard}, {"pfa", c.pfa}};
}

void from_json(const json& j, CfarConfig& c) {
    require_keys(j, {"n_train", "n_guard", "pfa"}, "cfar");
    if (auto it = j.find("n_train"); it != j.end()) it->get_to(c.n_train);
    if (auto it = j.find("n_guard"); it != j.end()) it->get_to(c.n_guard);
    if (auto it = j.find("pfa"); it != j.end()) it->get_to(c.pfa);
}

void to_json(json& j, const AltimeterConfig& c) {
    j = json{{"cfar", c.cfar},
             {"window", window_name(c.window)},
             {"select", select_name(c.select)}};
}

void from_json(const json& j, AltimeterConfig& c) {
    require_keys(j, {"cfar", "window", "select"}, "altimeter");
    if (auto it = j.find("cfar"); it != j.end()) it->get_to(c.cfar);
    if (auto it = j.find("window"); it != j.end())
        c.window = window_from_string(it->get<std::string>());
    if (auto it = j.find("select"); it != j.end())
        c.select = select_from_string(it->get<std::string>());
}

void to_json(json& j, const LmsConfig& c) {
    j = json{{"filter_len", c.filter_len}, {"block_size", c.block_size}, {"mu", c.mu}};
}

void from_json(const json& j, LmsConfig& c) {
    require_keys(j, {"filter_len", "block_size", "mu"}, "lms");
    if (auto it = j.find("filter_len"); it != j.end()) it->get_to(c.filter_len);
    if (auto it = j.find("block_size"); it != j.end()) it->get_to(c.block_size);
    if (auto it = j.find("mu"); it != j.end()) it->get_to(c.mu);
}

}  // namespace radalt

namespace radalt::eval {

using radalt::json;
using radalt::require_keys;

namespace {

json mitigations_to_json(const std::vector<Mitigation>& ms) {
    json arr = json::array();
    for (Mitigation m : ms) arr.push_back(mitigation_name(m));
    return arr;
}

std::vector<Mitigation> mitigations_from_json(const json& arr) {
    std::vector<Mitigation> out;
    for (const auto& item : arr) out.push_back(mitigation_from_string(item.get<std::string>()));
    return out;
}

}  // namespace

void to_json(json& j, const SweepConfig& c) {
    j = json{{"sinr_grid_db", c.sinr_grid_db},
             {"overlap_grid", c.overlap_grid},
             {"n_trials", c.n_trials},
             {"mitigations", mitigations_to_json(c.mitigations)},
             {"interference", interferer_class_name(c.interference)},
             {"altitudes_m", c.altitudes_m},
             {"descent_rate_mps", c.descent_rate_mps},
             {"snr_db", c.snr_db},
             {"seed", c.seed},
             {"fading", c.fading},
             {"clutter", c.clutter}};
    if (!std::isfinite(c.snr_db)) j["snr_db"] = nullptr;
}

void from_json(const json& j, SweepConfig& c) {
    require_keys(j,
                 {"sinr_grid_db", "overlap_grid", "n_trials", "mitigations", "interference",
                  "altitudes_m", "descent_rate_mps", "snr_db", "seed", "fading", "clutter"},
                 "sweep");
    if (auto it = j.find("sinr_grid_db"); it != j.end()) it->get_to(c.sinr_grid_db);
    if (auto it = j.find("overlap_grid"); it != j.end()) it->get_to(c.overlap_grid);
    if (auto it = j.find("n_trials"); it != j.end()) it->get_to(c.n_trials);
    if (auto it = j.find("mitigations"); it != j.end())
        c.mitigations = mitigations_from_json(*it);
    if (auto it = j.find("interference"); it != j.end())
        c.interference = interferer_class_from_string(it->get<std::string>());
    if (auto it = j.find("altitudes_m"); it != j.end()) it->get_to(c.altitudes_m);
    if (auto it = j.find("descent_rate_mps"); it != j.end()) it->get_to(c.descent_rate_mps);
    if (auto it = j.find("snr_db"); it != j.end())
        c.snr_db = it->is_null() ? std::numeric_limits<double>::infinity() : it->get<double>();
    if (auto it = j.find("seed"); it != j.end()) it->get_to(c.seed);
    if (auto it = j.find("fading"); it != j.end()) it->get_to(c.fading);
    if (auto it = j.find("clutter"); it != j.end()) it->get_to(c.clutter);
}

void to_json(json& j, const CellResult& c) {
    j = json{{"mitigation", mitigation_name(c.mitigation)},
             {"sinr_db", c.sinr_db},
             {"overlap", c.overlap},
             {"rmse_m", c.rmse_m},
             {"pd", c.pd},
             {"recon_rmse", c.recon_rmse},
             {"pslr_db", c.pslr_db},
             {"miss_rate", c.miss_rate}};
    // pslr is NaN when no trial produced a measurable sidelobe structure
    if (!std::isfinite(c.pslr_db)) j["pslr_db"] = nullptr;
}

void to_json(json& j, const LandingConfig& c) {
    j = json{{"altitudes_m", c.altitudes_m},
             {"descent_rate_mps", c.descent_rate_mps},
             {"snr_db", c.snr_db},
             {"mitigation", mitigation_name(c.mitigation)},
             {"interference", interferer_class_name(c.interference)},
             {"sinr_db", nullptr},
             {"overlap_fraction", c.overlap_fraction},
             {"seed", c.seed},
             {"fading", c.fading},
             {"clutter", c.clutter}};
    if (!std::isfinite(c.snr_db)) j["snr_db"] = nullptr;
    if (c.sinr_db.has_value()) j["sinr_db"] = *c.sinr_db;
}

void from_json(const json& j, LandingConfig& c) {
    require_keys(j,
                 {"altitudes_m", "descent_rate_mps", "snr_db", "mitigation", "interference",
                  "sinr_db", "overlap_fraction", "seed", "fading", "clutter"},
                 "landing");
    if (auto it = j.find("altitudes_m"); it != j.end()) it->get_to(c.altitudes_m);
    if (auto it = j.find("descent_rate_mps"); it != j.end()) it->get_to(c.descent_rate_mps);
    if (auto it = j.find("snr_db"); it != j.end())
        c.snr_db = it->is_null() ? std::numeric_limits<double>::infinity() : it->get<double>();
    if (auto it = j.find("mitigation"); it != j.end())
        c.mitigation = mitigation_from_string(it->get<std::string>());
    if (auto it = j.find("interference"); it != j.end())
        c.interference = interferer_class_from_string(it->get<std::string>());
    if (auto it = j.find("sinr_db"); it != j.end()) {
        // null disables interference entirely (contrast: null snr_db = noise-free)
        if (it->is_null()) c.sinr_db.reset();
        else c.sinr_db = it->get<double>();
    }
    if (auto it = j.find("overlap_fraction"); it != j.end()) it->get_to(c.overlap_fraction);
    if (auto it = j.find("seed"); it != j.end()) it->get_to(c.seed);
    if (auto it = j.find("fading"); it != j.end()) it->get_to(c.fading);
    if (auto it = j.find("clutter"); it != j.end()) it->get_to(c.clutter);
}

void to_json(json& j, const LandingStep& s) {
    j = json{{"truth_m", s.truth_m},
             {"estimate_m", s.estimate_m},
             {"error_m", s.error_m},
             {"detected", s.detected}};
}

void to_json(json& j, const LandingResult& r) {
    j = json{{"config", r.config}, {"steps", r.steps}};
}

}  // namespace radalt::eval
