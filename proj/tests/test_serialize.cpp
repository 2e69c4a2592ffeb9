#include <cmath>
#include <limits>
#include <string>

#include "doctest.h"
#include "radalt/errors.hpp"
#include "radalt/serialize.hpp"

using radalt::json;

TEST_CASE("radar parameters round-trip through json") {
    radalt::RadarParams p;
    p.fc = 4.2e9;
    p.bandwidth = 5e6;
    p.fs_beat = 2.5e6;
    const json j = p;
    const auto q = j.get<radalt::RadarParams>();
    CHECK(q.fc == p.fc);
    CHECK(q.bandwidth == p.bandwidth);
    CHECK(q.fs_beat == p.fs_beat);
    CHECK(q.sweep_period == p.sweep_period);
}

TEST_CASE("dataset configuration round-trips with nested structures") {
    radalt::DatasetConfig cfg;
    cfg.n_train = 17;
    cfg.recipe.p_ofdm = 0.25;
    cfg.recipe.altitude_m = {150.0, 900.0};
    cfg.recipe.clutter.n_scatterers = 3;
    const json j = cfg;
    const auto back = j.get<radalt::DatasetConfig>();
    CHECK(back.n_train == 17);
    CHECK(back.recipe.p_ofdm == 0.25);
    CHECK(back.recipe.altitude_m.lo == 150.0);
    CHECK(back.recipe.altitude_m.hi == 900.0);
    CHECK(back.recipe.clutter.n_scatterers == 3);
}

TEST_CASE("unknown configuration keys fail loudly") {
    const json j = {{"fc_hz", 4.3e9}, {"bandwith_hz", 7.5e6}};  // typo
    radalt::RadarParams p;
    CHECK_THROWS_AS(radalt::from_json(j, p), radalt::InvalidConfigError);

    const json jm = {{"input_len", 64}, {"latentdim", 4}};
    radalt::nn::ModelConfig mc;
    CHECK_THROWS_AS(radalt::nn::from_json(jm, mc), radalt::InvalidConfigError);
}

TEST_CASE("partial configs keep defaults for omitted keys") {
    const json j = {{"bandwidth_hz", 5e6}};
    const auto p = j.get<radalt::RadarParams>();
    CHECK(p.bandwidth == 5e6);
    CHECK(p.fc == 4.3e9);  // untouched default
}

TEST_CASE("model and training configs round-trip including the variant name") {
    radalt::nn::ModelConfig mc;
    mc.input_len = 750;
    mc.latent_dim = 16;
    mc.enc_channels = {8, 6, 4};
    mc.variant = radalt::nn::Variant::literal;
    mc.dec_len0 = 12;
    const json j = mc;
    CHECK(j.at("variant").get<std::string>() == "literal");
    const auto back = j.get<radalt::nn::ModelConfig>();
    CHECK(back.input_len == 750);
    CHECK(back.enc_channels == mc.enc_channels);
    CHECK(back.variant == radalt::nn::Variant::literal);
    CHECK(back.dec_len0 == 12);

    radalt::nn::TrainConfig tc;
    tc.lr = 5e-4;
    tc.epochs = 12;
    tc.seed = 321;
    const json jt = tc;
    const auto tback = jt.get<radalt::nn::TrainConfig>();
    CHECK(tback.lr == 5e-4);
    CHECK(tback.epochs == 12);
    CHECK(tback.seed == 321);
}

TEST_CASE("noise-free sentinel snr survives the json round trip") {
    radalt::ExampleMeta m;
    m.altitude_m = 500.0;
    m.snr_db = std::numeric_limits<double>::infinity();
    m.seed = 42;
    const json j = m;
    CHECK(j.at("snr_db").is_null());
    const auto back = j.get<radalt::ExampleMeta>();
    CHECK(std::isinf(back.snr_db));
    CHECK(back.snr_db > 0.0);
    CHECK(back.seed == 42);
}

TEST_CASE("interferer metadata lists round-trip inside example metadata") {
    radalt::ExampleMeta m;
    m.snr_db = 10.0;
    m.interferers.push_back({"qpsk", -5.0, 0.75, 99});
    m.interferers.push_back({"tone", 3.0, 1.0, 100});
    const json j = m;
    const auto back = j.get<radalt::ExampleMeta>();
    REQUIRE(back.interferers.size() == 2);
    CHECK(back.interferers[0].kind == "qpsk");
    CHECK(back.interferers[0].overlap_fraction == 0.75);
    CHECK(back.interferers[1].seed == 100);
}

TEST_CASE("training history round-trips and rejects stray keys") {
    radalt::nn::TrainHistory h;
    h.initial_val_loss = 0.75;
    h.train_loss = {0.5, 0.25, 0.125};
    h.val_loss = {0.6, 0.3, 0.2};
    const json j = h;
    const auto back = j.get<radalt::nn::TrainHistory>();
    CHECK(back.initial_val_loss == h.initial_val_loss);
    CHECK(back.train_loss == h.train_loss);
    CHECK(back.val_loss == h.val_loss);

    json bad = j;
    bad["final_loss"] = 0.1;
    CHECK_THROWS_AS(bad.get<radalt::nn::TrainHistory>(), radalt::InvalidConfigError);
}
