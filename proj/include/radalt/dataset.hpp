#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "radalt/scene.hpp"

namespace radalt {

/// Closed interval for a uniform per-example draw.
struct ParamRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Per-example randomization recipe for dataset synthesis. Each example
/// draws its scene from these ranges; interference classes are included
/// independently with the given probabilities (at least one class is
/// forced when any probability is positive).
struct DatasetRecipe {
    ParamRange altitude_m{200.0, 2000.0};
    ParamRange descent_rate_mps{0.0, 10.0};
    ParamRange snr_db{-25.0, 30.0};
    FadingConfig fading;
    ClutterConfig clutter;

    double p_tone = 0.5;
    double p_qpsk = 0.5;
    double p_ofdm = 0.0;
    int max_tones = 3;
    ParamRange tone_sir_db{-20.0, 20.0};
    ParamRange qpsk_sir_db{-20.0, 0.0};
    ParamRange qpsk_bandwidth_hz{0.5e6, 2.0e6};
    ParamRange ofdm_sir_db{-20.0, 0.0};
    ParamRange overlap_fraction{0.25, 1.0};
};

struct DatasetConfig {
    std::size_t n_train = 64;
    std::size_t n_val = 8;
    std::size_t record_len = 7500;  // must equal params.samples_per_chirp()
    RadarParams params;
    DatasetRecipe recipe;
};

/// One split loaded back from disk in storage precision. Per-example
/// layout matches the blob: [clean I, clean Q, dirty I, dirty Q], each
/// record_len floats.
struct SplitData {
    std::size_t count = 0;
    std::size_t record_len = 0;
    std::vector<float> raw;

    std::size_t stride() const { return 4 * record_len; }
    const float* example(std::size_t i) const { return raw.data() + i * stride(); }
    const float* clean_i(std::size_t i) const { return example(i); }
    const float* clean_q(std::size_t i) const { return example(i) + record_len; }
    const float* dirty_i(std::size_t i) const { return example(i) + 2 * record_len; }
    const float* dirty_q(std::size_t i) const { return example(i) + 3 * record_len; }
};

struct DatasetManifest {
    std::size_t record_len = 0;
    std::size_t n_train = 0;
    std::size_t n_val = 0;
    std::uint64_t master_seed = 0;
    RadarParams params;
    std::vector<ExampleMeta> train_meta;
    std::vector<ExampleMeta> val_meta;
};

/// Draws one scene from the recipe. Consumes a fixed number of rng values
/// per call regardless of which interference classes are included.
SceneConfig draw_scene(const DatasetRecipe& recipe, const RadarParams& params, Rng& rng);

/// Synthesizes n_train + n_val examples (per-example seed =
/// stable_hash(master_seed, global index)) and writes manifest.json,
/// train.bin, and val.bin into out_dir. Rerunning with identical inputs
/// reproduces the files byte for byte.
void generate_dataset(const DatasetConfig& cfg, std::uint64_t master_seed,
                      const std::filesystem::path& out_dir);

DatasetManifest load_manifest(const std::filesystem::path& dir);

/// Loads one split ("train" or "val"), verifying its content checksum.
SplitData load_split(const std::filesystem::path& dir, const std::string& split);

}  // namespace radalt
