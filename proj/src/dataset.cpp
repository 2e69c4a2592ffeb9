#include "radalt/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "radalt/errors.hpp"
#include "radalt/serialize.hpp"

namespace radalt {

namespace {

std::string checksum_string(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// Serializes one example into the per-record float layout.
void append_example(std::vector<float>& buf, const Example& ex) {
    const std::size_t len = ex.clean.size();
    buf.clear();
    buf.reserve(4 * len);
    for (const auto& v : ex.clean.samples) buf.push_back(static_cast<float>(v.real()));
    for (const auto& v : ex.clean.samples) buf.push_back(static_cast<float>(v.imag()));
    for (const auto& v : ex.dirty.samples) buf.push_back(static_cast<float>(v.real()));
    for (const auto& v : ex.dirty.samples) buf.push_back(static_cast<float>(v.imag()));
}

struct SplitInfo {
    std::string file;
    std::size_t count = 0;
    std::string checksum;
};

SplitInfo write_split(const std::filesystem::path& dir, const std::string& name,
                      const ComplexSignal& chirp, const DatasetConfig& cfg,
                      std::uint64_t master_seed, std::size_t first_index, std::size_t count,
                      std::vector<ExampleMeta>& metas) {
    const std::string filename = name + ".bin";
    std::ofstream out(dir / filename, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("generate_dataset: cannot open " + (dir / filename).string());

    std::uint64_t checksum = kFnvBasis;
    std::vector<float> buf;
    metas.clear();
    metas.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t seed = stable_hash(master_seed, first_index + i);
        Rng scene_rng(stable_hash(seed, 1000));
        const SceneConfig scene = draw_scene(cfg.recipe, cfg.params, scene_rng);
        Example ex = compose_received(chirp, cfg.params, scene, seed);
        append_example(buf, ex);
        const auto bytes = buf.size() * sizeof(float);
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(bytes));
        checksum = fnv1a64(buf.data(), bytes, checksum);
        metas.push_back(std::move(ex.meta));
    }
    out.close();
    if (!out) throw std::runtime_error("generate_dataset: write failed for " + filename);
    return {filename, count, checksum_string(checksum)};
}

json split_json(const SplitInfo& info) {
    return json{{"file", info.file}, {"count", info.count}, {"checksum", info.checksum}};
}

}  // namespace

SceneConfig draw_scene(const DatasetRecipe& recipe, const RadarParams& params, Rng& rng) {
    const auto len = static_cast<std::size_t>(params.samples_per_chirp());
    SceneConfig scene;
    scene.altitude_m = rng.uniform(recipe.altitude_m.lo, recipe.altitude_m.hi);
    scene.descent_rate_mps = rng.uniform(recipe.descent_rate_mps.lo, recipe.descent_rate_mps.hi);
    scene.snr_db = rng.uniform(recipe.snr_db.lo, recipe.snr_db.hi);
    scene.fading = recipe.fading;
    scene.clutter = recipe.clutter;

    // Every value is drawn whether or not its class is included, so the
    // stream position after this call never depends on the coin flips.
    const double coin_tone = rng.uniform();
    const double coin_qpsk = rng.uniform();
    const double coin_ofdm = rng.uniform();
    const double fallback = rng.uniform();

    ToneSpec tone;
    tone.n_tones = static_cast<int>(rng.uniform_int(1, std::max(1, recipe.max_tones)));
    tone.bandwidth_hz = params.bandwidth;
    tone.sir_db = rng.uniform(recipe.tone_sir_db.lo, recipe.tone_sir_db.hi);
    const double tone_overlap = rng.uniform(recipe.overlap_fraction.lo, recipe.overlap_fraction.hi);

    QpskBurstSpec qpsk;
    qpsk.bandwidth_hz = rng.uniform(recipe.qpsk_bandwidth_hz.lo, recipe.qpsk_bandwidth_hz.hi);
    qpsk.sir_db = rng.uniform(recipe.qpsk_sir_db.lo, recipe.qpsk_sir_db.hi);
    const double dur_frac = rng.uniform(recipe.overlap_fraction.lo, recipe.overlap_fraction.hi);
    qpsk.duration = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(dur_frac * static_cast<double>(len))));
    qpsk.duration = std::min(qpsk.duration, len);
    qpsk.start_offset = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(len - qpsk.duration)));
    const double max_center =
        std::max(0.0, params.fs / 2.0 - qpsk.bandwidth_hz * (1.0 + qpsk.rolloff) / 2.0);
    qpsk.center_freq_hz = rng.uniform(-max_center, max_center);

    OfdmSpec ofdm;
    ofdm.sample_rate_hz = params.fs;
    ofdm.channel_bw_hz = rng.uniform() < 0.5 ? 5e6 : 10e6;
    ofdm.sir_db = rng.uniform(recipe.ofdm_sir_db.lo, recipe.ofdm_sir_db.hi);
    const double ofdm_overlap = rng.uniform(recipe.overlap_fraction.lo, recipe.overlap_fraction.hi);

    bool take_tone = coin_tone < recipe.p_tone;
    bool take_qpsk = coin_qpsk < recipe.p_qpsk;
    bool take_ofdm = coin_ofdm < recipe.p_ofdm;
    const double p_total = recipe.p_tone + recipe.p_qpsk + recipe.p_ofdm;
    if (!take_tone && !take_qpsk && !take_ofdm && p_total > 0.0) {
        const double pick = fallback * p_total;
        if (pick < recipe.p_tone) take_tone = true;
        else if (pick < recipe.p_tone + recipe.p_qpsk) take_qpsk = true;
        else take_ofdm = true;
    }

    if (take_tone) scene.interference.push_back({tone, OverlapSpec{tone_overlap}});
    if (take_qpsk) scene.interference.push_back({qpsk, OverlapSpec{1.0}});
    if (take_ofdm) scene.interference.push_back({ofdm, OverlapSpec{ofdm_overlap}});
    return scene;
}

namespace {

void check_range(const ParamRange& r, const char* name) {
    if (!(r.lo <= r.hi))
        throw InvalidConfigError(std::string("generate_dataset: ") + name +
                                 " range is inverted or non-finite");
}

void check_probability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0))
        throw InvalidConfigError(std::string("generate_dataset: ") + name +
                                 " must lie in [0, 1]");
}

void validate_recipe(const DatasetRecipe& r) {
    check_range(r.altitude_m, "altitude_m");
    check_range(r.descent_rate_mps, "descent_rate_mps");
    check_range(r.snr_db, "snr_db");
    check_range(r.tone_sir_db, "tone_sir_db");
    check_range(r.qpsk_sir_db, "qpsk_sir_db");
    check_range(r.qpsk_bandwidth_hz, "qpsk_bandwidth_hz");
    check_range(r.ofdm_sir_db, "ofdm_sir_db");
    check_range(r.overlap_fraction, "overlap_fraction");
    check_probability(r.p_tone, "p_tone");
    check_probability(r.p_qpsk, "p_qpsk");
    check_probability(r.p_ofdm, "p_ofdm");
    if (r.overlap_fraction.lo < 0.0 || r.overlap_fraction.hi > 1.0)
        throw InvalidConfigError("generate_dataset: overlap_fraction must lie in [0, 1]");
    if ((r.p_tone > 0.0 && r.max_tones < 1))
        throw InvalidConfigError("generate_dataset: max_tones must be >= 1 when tones are enabled");
}

}  // namespace

void generate_dataset(const DatasetConfig& cfg, std::uint64_t master_seed,
                      const std::filesystem::path& out_dir) {
    cfg.params.validate();
    validate_recipe(cfg.recipe);
    const auto chirp_len = static_cast<std::size_t>(cfg.params.samples_per_chirp());
    if (cfg.record_len != chirp_len)
        throw InvalidConfigError("generate_dataset: record_len must equal samples per chirp (" +
                                 std::to_string(chirp_len) + ")");
    if (cfg.n_train == 0) throw InvalidConfigError("generate_dataset: n_train must be > 0");

    std::filesystem::create_directories(out_dir);
    const ComplexSignal chirp = generate_chirp(cfg.params);

    std::vector<ExampleMeta> train_meta, val_meta;
    const SplitInfo train =
        write_split(out_dir, "train", chirp, cfg, master_seed, 0, cfg.n_train, train_meta);
    const SplitInfo val =
        write_split(out_dir, "val", chirp, cfg, master_seed, cfg.n_train, cfg.n_val, val_meta);

    json manifest{
        {"format_version", 1},
        {"kind", "radalt-dataset"},
        {"record_len", cfg.record_len},
        {"n_train", cfg.n_train},
        {"n_val", cfg.n_val},
        {"master_seed", master_seed},
        {"clean_label", "faded target plus clutter; no noise, no interference"},
        {"radar", cfg.params},
        {"recipe", cfg.recipe},
        {"splits", json{{"train", split_json(train)}, {"val", split_json(val)}}},
        {"examples", json{{"train", train_meta}, {"val", val_meta}}},
    };
    std::ofstream mf(out_dir / "manifest.json", std::ios::trunc);
    if (!mf) throw std::runtime_error("generate_dataset: cannot open manifest.json");
    mf << manifest.dump(2) << '\n';
    mf.close();
    if (!mf) throw std::runtime_error("generate_dataset: manifest write failed");
}

namespace {

json read_manifest_json(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("load: cannot open " + (dir / "manifest.json").string());
    json j;
    in >> j;
    return j;
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& dir) {
    const json j = read_manifest_json(dir);
    if (j.value("kind", "") != "radalt-dataset")
        throw std::runtime_error("load_manifest: not a dataset manifest");
    DatasetManifest m;
    j.at("record_len").get_to(m.record_len);
    j.at("n_train").get_to(m.n_train);
    j.at("n_val").get_to(m.n_val);
    j.at("master_seed").get_to(m.master_seed);
    j.at("radar").get_to(m.params);
    j.at("examples").at("train").get_to(m.train_meta);
    j.at("examples").at("val").get_to(m.val_meta);
    return m;
}

SplitData load_split(const std::filesystem::path& dir, const std::string& split) {
    const json j = read_manifest_json(dir);
    const json& info = j.at("splits").at(split);
    const auto filename = info.at("file").get<std::string>();
    const auto count = info.at("count").get<std::size_t>();
    const auto expected = info.at("checksum").get<std::string>();
    const auto record_len = j.at("record_len").get<std::size_t>();

    std::ifstream in(dir / filename, std::ios::binary);
    if (!in) throw std::runtime_error("load_split: cannot open " + (dir / filename).string());
    SplitData data;
    data.count = count;
    data.record_len = record_len;
    data.raw.resize(count * 4 * record_len);
    in.read(reinterpret_cast<char*>(data.raw.data()),
            static_cast<std::streamsize>(data.raw.size() * sizeof(float)));
    if (static_cast<std::size_t>(in.gcount()) != data.raw.size() * sizeof(float))
        throw std::runtime_error("load_split: " + filename + " is truncated");
    in.get();
    if (!in.eof()) throw std::runtime_error("load_split: " + filename + " has trailing data");

    const auto actual =
        checksum_string(fnv1a64(data.raw.data(), data.raw.size() * sizeof(float)));
    if (actual != expected)
        throw std::runtime_error("load_split: checksum mismatch for " + filename);
    return data;
}

}  // namespace radalt
