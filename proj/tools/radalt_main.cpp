// Command-line front end: dataset generation, model training, evaluation
// sweeps / landing runs, and raw IQ denoising. Every subcommand reads an
// optional JSON config, applies dotted-key overrides, echoes the fully
// resolved configuration to <out>/effective_config.json, and writes its
// outputs deterministically for a fixed seed.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "radalt/dataset.hpp"
#include "radalt/dsp.hpp"
#include "radalt/errors.hpp"
#include "radalt/eval.hpp"
#include "radalt/nn/checkpoint.hpp"
#include "radalt/nn/train.hpp"
#include "radalt/serialize.hpp"
#include "radalt/waveform.hpp"

namespace fs = std::filesystem;
using radalt::InvalidConfigError;
using radalt::json;

namespace {

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw InvalidConfigError("cannot open config file " + path);
    return json::parse(in);
}

/// Applies one "a.b.c=value" override, creating intermediate objects as
/// needed. The value is parsed as JSON when possible so numbers, bools,
/// arrays, and null keep their types; anything unparseable is a string.
void apply_override(json& cfg, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw InvalidConfigError("override '" + spec + "' is not of the form key=value");
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);

    json* node = &cfg;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty())
            throw InvalidConfigError("override '" + spec + "' has an empty key segment");
        if (dot == std::string::npos) {
            json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
            (*node)[key] = parsed.is_discarded() ? json(value) : parsed;
            return;
        }
        node = &(*node)[key];
        start = dot + 1;
    }
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

void write_effective_config(const json& cfg, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    write_text(out_dir / "effective_config.json", cfg.dump(2) + "\n");
}

std::vector<float> read_f32_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidConfigError("cannot open input file " + path.string());
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    if (bytes % sizeof(float) != 0)
        throw InvalidConfigError("input file " + path.string() +
                                 " is not a whole number of float32 values");
    std::vector<float> data(bytes / sizeof(float));
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw std::runtime_error("read failed for " + path.string());
    return data;
}

void write_f32_file(const fs::path& path, const std::vector<float>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(float)));
    out.close();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Per-subcommand configuration schemas. Unknown keys are rejected so config
// typos fail loudly; every field has a default mirroring the library's.
// ---------------------------------------------------------------------------

struct GenerateCliConfig {
    radalt::DatasetConfig dataset;
    std::uint64_t seed = 1;
};

GenerateCliConfig parse_generate(const json& j) {
    radalt::require_keys(j, {"dataset", "seed"}, "generate");
    GenerateCliConfig c;
    if (auto it = j.find("dataset"); it != j.end()) it->get_to(c.dataset);
    if (auto it = j.find("seed"); it != j.end()) it->get_to(c.seed);
    return c;
}

json dump_generate(const GenerateCliConfig& c) {
    return json{{"dataset", c.dataset}, {"seed", c.seed}};
}

struct TrainCliConfig {
    std::string dataset_dir;
    radalt::nn::ModelConfig model;
    radalt::nn::TrainConfig train;
    std::optional<std::string> resume;
};

TrainCliConfig parse_train(const json& j) {
    radalt::require_keys(j, {"dataset_dir", "model", "train", "resume"}, "train");
    TrainCliConfig c;
    if (auto it = j.find("dataset_dir"); it != j.end()) it->get_to(c.dataset_dir);
    if (auto it = j.find("model"); it != j.end()) it->get_to(c.model);
    if (auto it = j.find("train"); it != j.end()) it->get_to(c.train);
    if (auto it = j.find("resume"); it != j.end() && !it->is_null())
        c.resume = it->get<std::string>();
    return c;
}

json dump_train(const TrainCliConfig& c) {
    json j{{"dataset_dir", c.dataset_dir}, {"model", c.model}, {"train", c.train}};
    j["resume"] = c.resume ? json(*c.resume) : json(nullptr);
    return j;
}

struct EvaluateCliConfig {
    std::string scenario = "sweep";  // sweep | landing
    radalt::RadarParams radar;
    radalt::eval::SweepConfig sweep;
    radalt::eval::LandingConfig landing;
    radalt::AltimeterConfig altimeter;
    radalt::LmsConfig lms;
    std::optional<std::string> checkpoint;
};

EvaluateCliConfig parse_evaluate(const json& j) {
    radalt::require_keys(
        j, {"scenario", "radar", "sweep", "landing", "altimeter", "lms", "checkpoint"},
        "evaluate");
    EvaluateCliConfig c;
    if (auto it = j.find("scenario"); it != j.end()) it->get_to(c.scenario);
    if (auto it = j.find("radar"); it != j.end()) it->get_to(c.radar);
    if (auto it = j.find("sweep"); it != j.end()) it->get_to(c.sweep);
    if (auto it = j.find("landing"); it != j.end()) it->get_to(c.landing);
    if (auto it = j.find("altimeter"); it != j.end()) it->get_to(c.altimeter);
    if (auto it = j.find("lms"); it != j.end()) it->get_to(c.lms);
    if (auto it = j.find("checkpoint"); it != j.end() && !it->is_null())
        c.checkpoint = it->get<std::string>();
    return c;
}

json dump_evaluate(const EvaluateCliConfig& c) {
    json j{{"scenario", c.scenario}, {"radar", c.radar},         {"sweep", c.sweep},
           {"landing", c.landing},   {"altimeter", c.altimeter}, {"lms", c.lms}};
    j["checkpoint"] = c.checkpoint ? json(*c.checkpoint) : json(nullptr);
    return j;
}

struct DenoiseCliConfig {
    std::string input;
    std::string checkpoint;
    bool segment = false;
    radalt::RadarParams radar;
};

DenoiseCliConfig parse_denoise(const json& j) {
    radalt::require_keys(j, {"input", "checkpoint", "segment", "radar"}, "denoise");
    DenoiseCliConfig c;
    if (auto it = j.find("input"); it != j.end()) it->get_to(c.input);
    if (auto it = j.find("checkpoint"); it != j.end()) it->get_to(c.checkpoint);
    if (auto it = j.find("segment"); it != j.end()) it->get_to(c.segment);
    if (auto it = j.find("radar"); it != j.end()) it->get_to(c.radar);
    return c;
}

json dump_denoise(const DenoiseCliConfig& c) {
    return json{{"input", c.input},
                {"checkpoint", c.checkpoint},
                {"segment", c.segment},
                {"radar", c.radar}};
}

// ---------------------------------------------------------------------------
// Subcommand bodies
// ---------------------------------------------------------------------------

int cmd_generate(const GenerateCliConfig& cfg, const fs::path& out_dir) {
    write_effective_config(dump_generate(cfg), out_dir);
    radalt::generate_dataset(cfg.dataset, cfg.seed, out_dir);
    std::cout << "wrote " << cfg.dataset.n_train << " train + " << cfg.dataset.n_val
              << " val examples to " << out_dir.string() << "\n";
    return 0;
}

int cmd_train(const TrainCliConfig& cfg, const fs::path& out_dir) {
    if (cfg.dataset_dir.empty())
        throw InvalidConfigError("train: dataset_dir is required (--dataset or config)");

    const auto manifest = radalt::load_manifest(cfg.dataset_dir);
    const auto train_split = radalt::load_split(cfg.dataset_dir, "train");
    const auto val_split = radalt::load_split(cfg.dataset_dir, "val");
    const auto train_pairs = radalt::nn::pairs_from_split(train_split);
    const auto val_pairs = radalt::nn::pairs_from_split(val_split);

    write_effective_config(dump_train(cfg), out_dir);

    radalt::nn::TrainResult result;
    radalt::nn::TrainHistory merged;
    if (cfg.resume) {
        const auto init = radalt::nn::load_checkpoint(*cfg.resume);
        if (static_cast<std::size_t>(init.geometry.input_len) != manifest.record_len)
            throw InvalidConfigError(
                "train: checkpoint input length " + std::to_string(init.geometry.input_len) +
                " does not match dataset record length " + std::to_string(manifest.record_len));
        // Prior history (when present next to the checkpoint) sets the
        // global epoch offset so numbering continues across runs.
        std::size_t epoch_offset = 0;
        const fs::path prior_path = fs::path(*cfg.resume).parent_path() / "history.json";
        if (fs::exists(prior_path)) {
            std::ifstream in(prior_path);
            const json hj = json::parse(in);
            merged = hj.at("history").get<radalt::nn::TrainHistory>();
            epoch_offset = merged.train_loss.size();
        }
        result = radalt::nn::resume_pairs(init, cfg.train, train_pairs, val_pairs, epoch_offset);
        if (merged.train_loss.empty()) merged.initial_val_loss = result.history.initial_val_loss;
        merged.train_loss.insert(merged.train_loss.end(), result.history.train_loss.begin(),
                                 result.history.train_loss.end());
        merged.val_loss.insert(merged.val_loss.end(), result.history.val_loss.begin(),
                               result.history.val_loss.end());
    } else {
        if (static_cast<std::size_t>(cfg.model.input_len) != manifest.record_len)
            throw InvalidConfigError(
                "train: model input length " + std::to_string(cfg.model.input_len) +
                " does not match dataset record length " + std::to_string(manifest.record_len));
        result = radalt::nn::train_pairs(cfg.model, cfg.train, train_pairs, val_pairs);
        merged = result.history;
    }

    radalt::nn::save_checkpoint(out_dir / "checkpoint.bin", result.model);
    json hj{{"history", merged}, {"best_epoch", result.best_epoch}};
    write_text(out_dir / "history.json", hj.dump(2) + "\n");

    std::cout << "best epoch " << result.best_epoch << ", val loss "
              << merged.val_loss.at(result.best_epoch) << "; checkpoint written to "
              << (out_dir / "checkpoint.bin").string() << "\n";
    return 0;
}

int cmd_evaluate(const EvaluateCliConfig& cfg, const fs::path& out_dir) {
    const bool landing = cfg.scenario == "landing";
    if (!landing && cfg.scenario != "sweep")
        throw InvalidConfigError("evaluate: unknown scenario '" + cfg.scenario +
                                 "' (expected sweep|landing)");

    const bool wants_tcn =
        landing ? cfg.landing.mitigation == radalt::eval::Mitigation::tcn
                : std::find(cfg.sweep.mitigations.begin(), cfg.sweep.mitigations.end(),
                            radalt::eval::Mitigation::tcn) != cfg.sweep.mitigations.end();

    radalt::nn::ModelParams model;
    radalt::eval::MitigationContext ctx;
    ctx.lms = cfg.lms;
    if (wants_tcn) {
        if (!cfg.checkpoint)
            throw InvalidConfigError(
                "evaluate: the tcn mitigation needs a trained model (--checkpoint)");
        model = radalt::nn::load_checkpoint(*cfg.checkpoint);
        ctx.model = &model;
    }

    write_effective_config(dump_evaluate(cfg), out_dir);

    if (landing) {
        const auto result =
            radalt::eval::landing_scenario(cfg.landing, cfg.radar, ctx, cfg.altimeter);
        radalt::eval::emit_report(result, out_dir);
        std::cout << "landing run: " << result.steps.size() << " steps written to "
                  << out_dir.string() << "\n";
    } else {
        const auto result = radalt::eval::run_sweep(cfg.sweep, cfg.radar, ctx, cfg.altimeter);
        radalt::eval::emit_report(result, out_dir);
        std::cout << "sweep: " << result.cells.size() << " cells written to "
                  << out_dir.string() << "\n";
    }
    return 0;
}

int cmd_denoise(const DenoiseCliConfig& cfg, const fs::path& out_dir) {
    if (cfg.input.empty()) throw InvalidConfigError("denoise: input is required (--input)");
    if (cfg.checkpoint.empty())
        throw InvalidConfigError("denoise: checkpoint is required (--checkpoint)");

    const auto model = radalt::nn::load_checkpoint(cfg.checkpoint);
    const auto frame = static_cast<std::size_t>(model.geometry.input_len);

    const auto raw = read_f32_file(cfg.input);
    if (raw.size() % 2 != 0)
        throw InvalidConfigError("denoise: interleaved I/Q input needs an even float count");
    const std::size_t n = raw.size() / 2;

    radalt::ComplexSignal stream;
    stream.fs = cfg.radar.fs;
    stream.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        stream.samples[i] = radalt::cplx(raw[2 * i], raw[2 * i + 1]);

    write_effective_config(dump_denoise(cfg), out_dir);

    // Regions not covered by a denoised frame pass through unchanged.
    radalt::ComplexSignal cleaned = stream;
    std::size_t frames_done = 0;
    const auto denoise_at = [&](std::size_t off) {
        radalt::ComplexSignal seg;
        seg.fs = stream.fs;
        seg.samples.assign(stream.samples.begin() + static_cast<std::ptrdiff_t>(off),
                           stream.samples.begin() + static_cast<std::ptrdiff_t>(off + frame));
        const auto out = radalt::nn::denoise(model, seg);
        std::copy(out.samples.begin(), out.samples.end(),
                  cleaned.samples.begin() + static_cast<std::ptrdiff_t>(off));
        ++frames_done;
    };

    if (cfg.segment) {
        const auto ref = radalt::generate_chirp(cfg.radar);
        if (ref.size() != frame)
            throw InvalidConfigError(
                "denoise: radar chirp length " + std::to_string(ref.size()) +
                " does not match the model frame length " + std::to_string(frame));
        for (const std::size_t off : radalt::segment_frames(stream, ref))
            if (off + frame <= n) denoise_at(off);
    } else {
        if (n % frame != 0)
            throw InvalidConfigError(
                "denoise: input length " + std::to_string(n) +
                " samples is not a multiple of the model frame length " +
                std::to_string(frame) + "; pad or trim the capture, or use --segment");
        for (std::size_t off = 0; off < n; off += frame) denoise_at(off);
    }

    std::vector<float> out_raw(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        out_raw[2 * i] = static_cast<float>(cleaned.samples[i].real());
        out_raw[2 * i + 1] = static_cast<float>(cleaned.samples[i].imag());
    }
    write_f32_file(out_dir / "denoised.bin", out_raw);
    std::cout << "denoised " << frames_done << " frame(s) of " << frame << " samples into "
              << (out_dir / "denoised.bin").string() << "\n";
    return 0;
}

std::vector<radalt::eval::Mitigation> parse_mitigation_list(const std::string& csv) {
    std::vector<radalt::eval::Mitigation> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(radalt::eval::mitigation_from_string(item));
    if (out.empty()) throw InvalidConfigError("--mitigations: empty list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FMCW radar altimeter interference-mitigation toolkit"};
    app.require_subcommand(1);

    // Common per-subcommand state. Optionals record whether a flag was
    // given so flags override config-file values, which override defaults.
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::size_t workers = 1;
    std::vector<std::string> overrides;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "override the master seed");
        sub->add_option("--workers", workers,
                        "worker count accepted for interface compatibility; this build "
                        "executes sequentially so outputs never depend on it")
            ->check(CLI::PositiveNumber);
        sub->add_option("--set", overrides,
                        "dotted-key config override, e.g. --set dataset.n_train=256");
    };

    auto* gen = app.add_subcommand("generate", "synthesize a training/validation dataset");
    add_common(gen);
    std::optional<std::size_t> gen_n, gen_len;
    gen->add_option("--n", gen_n, "number of training examples");
    gen->add_option("--len", gen_len, "record length in samples (must match the radar)");

    auto* train = app.add_subcommand("train", "train the denoising autoencoder");
    add_common(train);
    std::optional<std::string> train_dataset, train_variant, train_resume;
    std::optional<std::size_t> train_epochs;
    train->add_option("--dataset", train_dataset, "dataset directory from `generate`");
    train->add_option("--variant", train_variant, "model variant: literal|parameter_matched");
    train->add_option("--epochs", train_epochs, "training epochs for this run");
    train->add_option("--resume", train_resume, "checkpoint to continue from");

    auto* eval_cmd = app.add_subcommand("evaluate", "run an interference sweep or landing run");
    add_common(eval_cmd);
    std::optional<std::string> eval_scenario, eval_mitigations, eval_checkpoint;
    eval_cmd->add_option("--scenario", eval_scenario, "sweep|landing");
    eval_cmd->add_option("--mitigations", eval_mitigations,
                         "comma list for sweep (none,lms,tcn); single name for landing");
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "trained model for the tcn arm");

    auto* den = app.add_subcommand("denoise", "clean a raw float32 interleaved-IQ capture");
    add_common(den);
    std::optional<std::string> den_input, den_checkpoint;
    den->add_option("--input", den_input, "raw IQ capture (float32, interleaved I,Q)");
    den->add_option("--checkpoint", den_checkpoint, "trained model checkpoint");
    auto* den_segment = den->add_flag("--segment",
                                      "locate chirp frames by reference correlation first");

    CLI11_PARSE(app, argc, argv);

    try {
        json raw_cfg = load_config_file(config_path);
        for (const auto& o : overrides) apply_override(raw_cfg, o);

        if (gen->parsed()) {
            auto cfg = parse_generate(raw_cfg);
            if (gen_n) cfg.dataset.n_train = *gen_n;
            if (gen_len) cfg.dataset.record_len = *gen_len;
            if (seed) cfg.seed = *seed;
            return cmd_generate(cfg, out_dir);
        }
        if (train->parsed()) {
            auto cfg = parse_train(raw_cfg);
            if (train_dataset) cfg.dataset_dir = *train_dataset;
            if (train_variant) cfg.model.variant = radalt::nn::variant_from_string(*train_variant);
            if (train_epochs) cfg.train.epochs = *train_epochs;
            if (train_resume) cfg.resume = *train_resume;
            if (seed) cfg.train.seed = *seed;
            return cmd_train(cfg, out_dir);
        }
        if (eval_cmd->parsed()) {
            auto cfg = parse_evaluate(raw_cfg);
            if (eval_scenario) cfg.scenario = *eval_scenario;
            if (eval_checkpoint) cfg.checkpoint = *eval_checkpoint;
            if (eval_mitigations) {
                const auto list = parse_mitigation_list(*eval_mitigations);
                if (cfg.scenario == "landing") {
                    if (list.size() != 1)
                        throw InvalidConfigError(
                            "evaluate: a landing run takes exactly one mitigation");
                    cfg.landing.mitigation = list.front();
                } else {
                    cfg.sweep.mitigations = list;
                }
            }
            if (seed) {
                cfg.sweep.seed = *seed;
                cfg.landing.seed = *seed;
            }
            return cmd_evaluate(cfg, out_dir);
        }
        // --seed is accepted everywhere for interface uniformity; denoising
        // is deterministic so it has nothing to apply it to.
        auto cfg = parse_denoise(raw_cfg);
        if (den_input) cfg.input = *den_input;
        if (den_checkpoint) cfg.checkpoint = *den_checkpoint;
        if (den_segment->count() > 0) cfg.segment = true;
        return cmd_denoise(cfg, out_dir);
    } catch (const InvalidConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
