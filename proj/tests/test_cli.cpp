// End-to-end tests of the command-line tool: each case spawns the real
// binary (path injected at compile time) against a scaled-down radar so
// whole pipelines finish in seconds.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "radalt/nn/checkpoint.hpp"
#include "radalt/nn/model.hpp"
#include "radalt/scene.hpp"
#include "radalt/serialize.hpp"
#include "radalt/waveform.hpp"

namespace {

namespace fs = std::filesystem;
using radalt::json;

/// Exit status of `radalt <args>`, with stdout/stderr captured to a file.
int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(RADALT_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

fs::path fresh_dir(const std::string& tag) {
    const auto dir = fs::temp_directory_path() / ("radalt_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

radalt::RadarParams small_radar() {
    radalt::RadarParams p;
    p.bandwidth = 7.5e5;
    p.fs = 7.5e5;
    p.fs_beat = 7.5e5;
    return p;
}

/// Dataset config for the scaled radar: 750-sample records, burst
/// bandwidths inside the reduced Nyquist band.
json small_generate_config() {
    json recipe;
    recipe["qpsk_bandwidth_hz"] = json{{"lo", 1e5}, {"hi", 3e5}};
    json dataset;
    dataset["n_train"] = 6;
    dataset["n_val"] = 2;
    dataset["record_len"] = 750;
    dataset["radar"] = small_radar();
    dataset["recipe"] = recipe;
    return json{{"dataset", dataset}, {"seed", 7}};
}

json tiny_model_config() {
    radalt::nn::ModelConfig mc;
    mc.input_len = 750;
    mc.latent_dim = 8;
    mc.enc_channels = {8, 6, 4};
    mc.variant = radalt::nn::Variant::literal;
    return json(mc);
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p);
    REQUIRE(out.good());
    out << j.dump(2) << "\n";
}

/// Writes a float32 interleaved-IQ capture of `records` noisy chirp
/// returns back to back, with `pad` low-amplitude samples before each.
void write_capture(const fs::path& p, int records, std::size_t pad) {
    const auto params = small_radar();
    const auto chirp = radalt::generate_chirp(params);
    radalt::SceneConfig scene;
    scene.altitude_m = 500.0;
    scene.snr_db = 15.0;

    std::vector<float> raw;
    for (int r = 0; r < records; ++r) {
        raw.insert(raw.end(), 2 * pad, 0.001f);
        const auto ex = radalt::compose_received(chirp, params, scene,
                                                 static_cast<std::uint64_t>(r + 1));
        for (const auto& v : ex.dirty.samples) {
            raw.push_back(static_cast<float>(v.real()));
            raw.push_back(static_cast<float>(v.imag()));
        }
    }
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out.good());
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size() * sizeof(float)));
}

}  // namespace

TEST_CASE("cli generate reproduces its outputs byte for byte") {
    const auto dir = fresh_dir("gen");
    write_json(dir / "gen.json", small_generate_config());

    const std::string base = "generate --config " + (dir / "gen.json").string();
    CHECK(run_cli(base + " --out " + (dir / "a").string(), dir / "a.log") == 0);
    CHECK(run_cli(base + " --out " + (dir / "b").string(), dir / "b.log") == 0);

    for (const char* name : {"manifest.json", "train.bin", "val.bin", "effective_config.json"})
        CHECK(slurp(dir / "a" / name) == slurp(dir / "b" / name));

    // the echoed config parses back to the inputs that produced the data
    const json eff = json::parse(slurp(dir / "a" / "effective_config.json"));
    CHECK(eff.at("seed") == 7);
    CHECK(eff.at("dataset").at("n_train") == 6);
    CHECK(eff.at("dataset").at("record_len") == 750);
    fs::remove_all(dir);
}

TEST_CASE("cli generate rejects malformed configs with a nonzero exit") {
    const auto dir = fresh_dir("gen_bad");
    write_json(dir / "gen.json", small_generate_config());
    const std::string base = "generate --config " + (dir / "gen.json").string();

    SUBCASE("inverted snr range") {
        const int rc =
            run_cli(base + " --set 'dataset.recipe.snr_db={\"lo\":30.0,\"hi\":-25.0}'" +
                        " --out " + (dir / "o").string(),
                    dir / "run.log");
        CHECK(rc != 0);
        CHECK(slurp(dir / "run.log").find("snr_db") != std::string::npos);
    }
    SUBCASE("unknown config key") {
        const int rc = run_cli(base + " --set dataset.typo=1 --out " + (dir / "o").string(),
                               dir / "run.log");
        CHECK(rc != 0);
        CHECK(slurp(dir / "run.log").find("typo") != std::string::npos);
    }
    fs::remove_all(dir);
}

TEST_CASE("cli train writes a checkpoint and resume continues epoch numbering") {
    const auto dir = fresh_dir("train");
    write_json(dir / "gen.json", small_generate_config());
    REQUIRE(run_cli("generate --config " + (dir / "gen.json").string() + " --out " +
                        (dir / "ds").string(),
                    dir / "gen.log") == 0);

    json tc;
    tc["dataset_dir"] = (dir / "ds").string();
    tc["model"] = tiny_model_config();
    tc["train"] = json{{"epochs", 2}, {"batch_size", 2}, {"lr", 2e-3}, {"seed", 5}};
    write_json(dir / "train.json", tc);

    REQUIRE(run_cli("train --config " + (dir / "train.json").string() + " --out " +
                        (dir / "run1").string(),
                    dir / "t1.log") == 0);
    const auto model = radalt::nn::load_checkpoint(dir / "run1" / "checkpoint.bin");
    CHECK(model.geometry.input_len == 750);

    const json h1 = json::parse(slurp(dir / "run1" / "history.json"));
    REQUIRE(h1.at("history").at("train_loss").size() == 2);
    CHECK(h1.at("best_epoch").get<std::size_t>() < 2);

    REQUIRE(run_cli("train --config " + (dir / "train.json").string() + " --resume " +
                        (dir / "run1" / "checkpoint.bin").string() + " --epochs 2 --out " +
                        (dir / "run2").string(),
                    dir / "t2.log") == 0);
    const json h2 = json::parse(slurp(dir / "run2" / "history.json"));
    REQUIRE(h2.at("history").at("train_loss").size() == 4);
    // the first run's curve is preserved as the prefix of the merged one
    CHECK(h2.at("history").at("train_loss")[0] == h1.at("history").at("train_loss")[0]);
    CHECK(h2.at("history").at("train_loss")[1] == h1.at("history").at("train_loss")[1]);
    CHECK(h2.at("history").at("initial_val_loss") == h1.at("history").at("initial_val_loss"));
    CHECK(h2.at("best_epoch").get<std::size_t>() < 4);
    fs::remove_all(dir);
}

TEST_CASE("cli evaluate emits sweep and landing reports") {
    const auto dir = fresh_dir("eval");
    json ec;
    ec["radar"] = small_radar();
    ec["sweep"] = json{{"sinr_grid_db", json::array({0.0})},
                       {"overlap_grid", json::array({1.0})},
                       {"n_trials", 2},
                       {"altitudes_m", json::array({400.0, 900.0})},
                       {"snr_db", 20.0},
                       {"seed", 11}};
    write_json(dir / "eval.json", ec);
    const std::string base = "evaluate --config " + (dir / "eval.json").string();

    SUBCASE("sweep lists one csv row per mitigation cell, twice identically") {
        REQUIRE(run_cli(base + " --mitigations none,lms --out " + (dir / "s1").string(),
                        dir / "s1.log") == 0);
        const std::string csv = slurp(dir / "s1" / "sweep.csv");
        CHECK(count_lines(csv) == 3);  // header + 1 cell per arm
        CHECK(csv.rfind("mitigation,", 0) == 0);
        CHECK(csv.find("\nnone,") != std::string::npos);
        CHECK(csv.find("\nlms,") != std::string::npos);

        REQUIRE(run_cli(base + " --mitigations none,lms --out " + (dir / "s2").string(),
                        dir / "s2.log") == 0);
        CHECK(slurp(dir / "s2" / "sweep.csv") == csv);
        CHECK(slurp(dir / "s2" / "summary.json") == slurp(dir / "s1" / "summary.json"));
    }
    SUBCASE("tcn without a checkpoint is a configuration error") {
        const int rc =
            run_cli(base + " --mitigations none,tcn --out " + (dir / "s3").string(),
                    dir / "s3.log");
        CHECK(rc != 0);
        CHECK(slurp(dir / "s3.log").find("checkpoint") != std::string::npos);
    }
    SUBCASE("landing writes one csv row per descent step") {
        REQUIRE(run_cli(base + " --scenario landing --mitigations none" +
                            " --set 'landing.altitudes_m=[500.0,450.0,400.0]'" + " --out " +
                            (dir / "l1").string(),
                        dir / "l1.log") == 0);
        const std::string csv = slurp(dir / "l1" / "landing.csv");
        CHECK(count_lines(csv) == 4);  // header + 3 steps
        CHECK(csv.rfind("truth_m,", 0) == 0);
    }
    fs::remove_all(dir);
}

TEST_CASE("cli denoise cleans captures frame by frame") {
    const auto dir = fresh_dir("denoise");
    // An untrained model suffices: the contract under test is shape and
    // framing, not reconstruction quality.
    radalt::nn::ModelConfig mc;
    mc.input_len = 750;
    mc.latent_dim = 8;
    mc.enc_channels = {8, 6, 4};
    mc.variant = radalt::nn::Variant::literal;
    radalt::nn::save_checkpoint(dir / "ckpt.bin", radalt::nn::build_model(mc, 3));

    write_json(dir / "den.json", json{{"radar", small_radar()}});
    const std::string base = "denoise --config " + (dir / "den.json").string() +
                             " --checkpoint " + (dir / "ckpt.bin").string();

    SUBCASE("contiguous frames come back at the input length") {
        write_capture(dir / "rx.bin", 2, 0);
        REQUIRE(run_cli(base + " --input " + (dir / "rx.bin").string() + " --out " +
                            (dir / "o1").string(),
                        dir / "d1.log") == 0);
        CHECK(fs::file_size(dir / "o1" / "denoised.bin") == fs::file_size(dir / "rx.bin"));
        CHECK(slurp(dir / "o1" / "denoised.bin") != slurp(dir / "rx.bin"));
    }
    SUBCASE("a truncated capture names the expected frame length") {
        write_capture(dir / "rx.bin", 1, 0);
        const auto size = fs::file_size(dir / "rx.bin");
        fs::resize_file(dir / "rx.bin", size - 8);  // drop one complex sample
        const int rc = run_cli(base + " --input " + (dir / "rx.bin").string() + " --out " +
                                   (dir / "o2").string(),
                               dir / "d2.log");
        CHECK(rc != 0);
        CHECK(slurp(dir / "d2.log").find("750") != std::string::npos);
    }
    SUBCASE("segmentation locates offset frames and passes padding through") {
        write_capture(dir / "rx.bin", 2, 40);
        REQUIRE(run_cli(base + " --segment --input " + (dir / "rx.bin").string() + " --out " +
                            (dir / "o3").string(),
                        dir / "d3.log") == 0);
        const std::string in_bytes = slurp(dir / "rx.bin");
        const std::string out_bytes = slurp(dir / "o3" / "denoised.bin");
        REQUIRE(out_bytes.size() == in_bytes.size());
        // padding before the first frame is untouched; the frame is not
        CHECK(out_bytes.substr(0, 2 * 40 * sizeof(float)) ==
              in_bytes.substr(0, 2 * 40 * sizeof(float)));
        CHECK(out_bytes != in_bytes);
    }
    fs::remove_all(dir);
}
