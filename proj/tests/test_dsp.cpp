#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "radalt/dsp.hpp"
#include "radalt/errors.hpp"
#include "radalt/rng.hpp"
#include "radalt/scene.hpp"
#include "radalt/signal.hpp"
#include "radalt/waveform.hpp"

using radalt::AltimeterConfig;
using radalt::CfarConfig;
using radalt::ComplexSignal;
using radalt::cplx;
using radalt::RadarParams;
using radalt::RangeProfile;
using radalt::Rng;
using radalt::SweepKind;
using radalt::WindowKind;

namespace {

RadarParams params() { return RadarParams{}; }

std::size_t argmax(const std::vector<double>& v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

ComplexSignal complex_tone(double freq_hz, std::size_t len, double fs) {
    ComplexSignal sig;
    sig.fs = fs;
    sig.samples.resize(len);
    for (std::size_t n = 0; n < len; ++n)
        sig.samples[n] = std::polar(1.0, 2.0 * std::numbers::pi * freq_hz *
                                             static_cast<double>(n) / fs);
    return sig;
}

}  // namespace

TEST_CASE("sweep splitting halves the record") {
    const auto p = params();
    const auto c = radalt::generate_chirp(p);
    const auto [up, down] = radalt::split_sweeps(c, p);
    CHECK(up.samples.size() == 3750);
    CHECK(down.samples.size() == 3750);
    CHECK(up.samples[0] == c.samples[0]);
    CHECK(down.samples[0] == c.samples[3750]);
}

TEST_CASE("dechirping a delayed return yields the geometric beat tone") {
    const auto p = params();
    const auto c = radalt::generate_chirp(p);
    const auto rx = radalt::target_return(c, p, 500.0, 0.0);

    const auto [rx_up, rx_down] = radalt::split_sweeps(rx, p);
    const auto [ref_up, ref_down] = radalt::split_sweeps(c, p);
    const auto beat_up = radalt::dechirp(rx_up, ref_up);

    // Expected beat: -slope * tau = -25 samples * slope/fs = -50 kHz.
    // Skip the delay-transient head, then measure the phase step.
    const double expected = -p.sweep_slope() * 25.0 / p.fs;
    double acc = 0.0;
    int count = 0;
    for (std::size_t n = 100; n < 3000; ++n) {
        const cplx r = beat_up.samples[n + 1] * std::conj(beat_up.samples[n]);
        acc += std::arg(r);
        ++count;
    }
    const double measured = acc / count * p.fs / (2.0 * std::numbers::pi);
    CHECK(measured == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("range profiles peak at the target range for both sweep kinds") {
    const auto p = params();
    const auto c = radalt::generate_chirp(p);
    const auto rx = radalt::target_return(c, p, 500.0, 0.0);

    const auto [rx_up, rx_down] = radalt::split_sweeps(rx, p);
    const auto [ref_up, ref_down] = radalt::split_sweeps(c, p);

    for (auto kind : {SweepKind::up, SweepKind::down}) {
        const auto& rx_half = kind == SweepKind::up ? rx_up : rx_down;
        const auto& ref_half = kind == SweepKind::up ? ref_up : ref_down;
        const auto beat = radalt::dechirp(rx_half, ref_half);
        const auto profile = radalt::range_profile(beat, p, kind);
        REQUIRE(profile.magnitudes.size() == 3750 / 2);

        // 25-sample delay -> 50 kHz beat -> bin 25 at 2 kHz per bin.
        CHECK(argmax(profile.magnitudes) == 25);
        const double range = 25.0 * profile.range_axis;
        CHECK(range == doctest::Approx(499.65).epsilon(1e-3));
    }
}

TEST_CASE("doppler shifts the two sweep profiles in opposite directions") {
    const auto p = params();
    const auto c = radalt::generate_chirp(p);
    // Exaggerated descent, light noise so the detector floor is well defined.
    auto rx = radalt::target_return(c, p, 1000.0, 20.0);
    Rng noise_rng(2);
    rx = radalt::add_awgn(rx, 40.0, noise_rng);

    const auto [rx_up, rx_down] = radalt::split_sweeps(rx, p);
    const auto [ref_up, ref_down] = radalt::split_sweeps(c, p);
    const auto up = radalt::range_profile(radalt::dechirp(rx_up, ref_up), p, SweepKind::up);
    const auto down =
        radalt::range_profile(radalt::dechirp(rx_down, ref_down), p, SweepKind::down);

    const auto up_dets = radalt::ca_cfar(up, CfarConfig{});
    const auto down_dets = radalt::ca_cfar(down, CfarConfig{});
    REQUIRE(!up_dets.empty());
    REQUIRE(!down_dets.empty());
    const auto strongest = [](const std::vector<radalt::Detection>& dets) {
        return *std::max_element(dets.begin(), dets.end(),
                                 [](const auto& a, const auto& b) { return a.power < b.power; });
    };

    // f_d = 2*20*4.3e9/c = 573.7 Hz at 100.1 Hz/m: a 5.73 m bias per sweep,
    // opposite in sign, so the refined peaks split by twice that.
    const double split = strongest(up_dets).range_m - strongest(down_dets).range_m;
    const double fd = 2.0 * 20.0 * p.fc / radalt::kSpeedOfLight;
    const double hz_per_m = 2.0 * p.sweep_slope() / radalt::kSpeedOfLight;
    CHECK(std::abs(split) == doctest::Approx(2.0 * fd / hz_per_m).epsilon(0.25));

    // Averaging the two cancels the bias.
    const double avg = radalt::estimate_altitude(up_dets, down_dets);
    const double effective = 50.0 / p.fs * radalt::kSpeedOfLight / 2.0;
    CHECK(avg == doctest::Approx(effective).epsilon(0.002));
}

TEST_CASE("the cfar threshold factor matches its closed form") {
    CHECK(radalt::cfar_threshold_factor(32, 1e-4) ==
          doctest::Approx(32.0 * (std::pow(1e-4, -1.0 / 32.0) - 1.0)).epsilon(1e-12));
    CHECK(radalt::cfar_threshold_factor(32, 1e-4) == doctest::Approx(10.6727).epsilon(1e-4));
    CHECK_THROWS(radalt::cfar_threshold_factor(0, 1e-4));
    CHECK_THROWS(radalt::cfar_threshold_factor(8, 0.0));
}

TEST_CASE("cfar finds an isolated strong cell and localizes it") {
    RangeProfile profile;
    profile.range_axis = 20.0;
    profile.sweep_kind = SweepKind::up;
    Rng rng(8);
    profile.magnitudes.resize(400);
    for (auto& m : profile.magnitudes) m = std::norm(rng.cnormal());
    profile.magnitudes[200] = 500.0;

    const auto dets = radalt::ca_cfar(profile, CfarConfig{});
    REQUIRE(dets.size() == 1);
    CHECK(dets[0].bin == 200);
    CHECK(std::abs(dets[0].range_m - 200.0 * 20.0) <= 20.0);  // within one bin
    CHECK(dets[0].snr_est_db > 20.0);
}

TEST_CASE("cfar holds its false-alarm rate on pure noise") {
    // 200k exponential cells; expect ~20 false alarms at pfa 1e-4.
    CfarConfig cfg;
    Rng rng(123);
    std::size_t alarms = 0;
    const std::size_t trials = 50;
    const std::size_t cells = 4000;
    for (std::size_t t = 0; t < trials; ++t) {
        RangeProfile profile;
        profile.range_axis = 1.0;
        profile.magnitudes.resize(cells);
        for (auto& m : profile.magnitudes) m = std::norm(rng.cnormal());
        alarms += radalt::ca_cfar(profile, cfg).size();
    }
    const double measured = static_cast<double>(alarms) /
                            static_cast<double>(trials * cells);
    CHECK(measured > 1e-4 / 3.0);
    CHECK(measured < 3.0 * 1e-4);
}

TEST_CASE("altitude estimation averages the two sweeps and validates input") {
    std::vector<radalt::Detection> up{{25, 500.0, 10.0, 20.0}};
    std::vector<radalt::Detection> down{{25, 510.0, 9.0, 19.0}};
    CHECK(radalt::estimate_altitude(up, down) == doctest::Approx(505.0));
    CHECK_THROWS_AS(radalt::estimate_altitude({}, down), radalt::NoDetectionError);
    CHECK_THROWS_AS(radalt::estimate_altitude(up, {}), radalt::NoDetectionError);
}

TEST_CASE("strongest and nearest selection disagree when a far cell dominates") {
    std::vector<radalt::Detection> up{{10, 200.0, 50.0, 30.0}, {40, 800.0, 80.0, 35.0}};
    std::vector<radalt::Detection> down{{10, 204.0, 55.0, 30.0}, {40, 804.0, 70.0, 35.0}};
    CHECK(radalt::estimate_altitude(up, down, radalt::DetectionSelect::strongest) ==
          doctest::Approx(802.0));
    CHECK(radalt::estimate_altitude(up, down, radalt::DetectionSelect::nearest) ==
          doctest::Approx(202.0));
}

TEST_CASE("window sidelobe structure matches textbook peak-to-sidelobe ratios") {
    const auto p = params();
    // A beat tone exactly on a bin center; padding resolves the sidelobes.
    const std::size_t n = 3750;
    const auto beat = complex_tone(40.0 * p.fs / static_cast<double>(n), n, p.fs);

    const auto rect = radalt::range_profile(beat, p, SweepKind::down, WindowKind::none, 4 * n);
    const double rect_pslr = radalt::pslr(rect);
    CHECK(rect_pslr > 12.8);
    CHECK(rect_pslr < 13.8);

    const auto hann = radalt::range_profile(beat, p, SweepKind::down, WindowKind::hann, 4 * n);
    const double hann_pslr = radalt::pslr(hann);
    CHECK(hann_pslr > 30.0);
    CHECK(hann_pslr < 33.0);
}

TEST_CASE("degenerate profiles have no defined sidelobe ratio") {
    RangeProfile profile;
    profile.range_axis = 1.0;
    profile.magnitudes = {5.0, 4.0, 3.0, 2.0, 1.0};  // monotone: no sidelobe region
    CHECK_THROWS_AS(radalt::pslr(profile), radalt::UndefinedPslrError);
    RangeProfile empty;
    CHECK_THROWS_AS(radalt::pslr(empty), radalt::UndefinedPslrError);
}

TEST_CASE("short-time transform frames cover the record and conserve energy") {
    const auto sig = complex_tone(1e5, 1000, 7.5e6);
    const auto st = radalt::stft(sig, 256, 64, WindowKind::hann);
    CHECK(st.n_fft == 256);
    CHECK(st.hop == 64);
    REQUIRE(st.frames.size() == 1 + (1000 - 256) / 64);

    // Unnormalized-transform Parseval on one frame.
    std::vector<double> w(256);
    for (std::size_t i = 0; i < 256; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / 255.0));
    double time_energy = 0.0;
    for (std::size_t i = 0; i < 256; ++i)
        time_energy += std::norm(w[i] * sig.samples[i + 2 * 64]);
    double freq_energy = 0.0;
    for (const auto& bin : st.frames[2]) freq_energy += std::norm(bin);
    CHECK(freq_energy / 256.0 == doctest::Approx(time_energy).epsilon(1e-9));
}

TEST_CASE("frame segmentation recovers chirp starts in a longer stream") {
    RadarParams p;
    p.bandwidth = 7.5e5;
    p.fs = 7.5e5;
    p.fs_beat = 7.5e5;
    const auto c = radalt::generate_chirp(p);  // 750 samples

    Rng rng(4);
    std::vector<cplx> stream(2600, cplx{0.0, 0.0});
    for (auto& s : stream) s = 0.05 * rng.cnormal();
    for (std::size_t n = 0; n < 750; ++n) {
        stream[300 + n] += c.samples[n];
        stream[1500 + n] += c.samples[n];
    }
    const auto starts =
        radalt::segment_frames(ComplexSignal{std::move(stream), p.fs}, c);
    REQUIRE(starts.size() == 2);
    CHECK(std::llabs(static_cast<long long>(starts[0]) - 300) <= 2);
    CHECK(std::llabs(static_cast<long long>(starts[1]) - 1500) <= 2);
}

TEST_CASE("frame segmentation stays silent on pure noise") {
    RadarParams p;
    p.bandwidth = 7.5e5;
    p.fs = 7.5e5;
    p.fs_beat = 7.5e5;
    const auto c = radalt::generate_chirp(p);
    Rng rng(6);
    std::vector<cplx> stream(2600);
    for (auto& s : stream) s = rng.cnormal();
    const auto starts = radalt::segment_frames(ComplexSignal{std::move(stream), p.fs}, c);
    CHECK(starts.empty());
}

TEST_CASE("the full conventional chain lands within meters on a clean scene") {
    const auto p = params();
    const auto c = radalt::generate_chirp(p);

    radalt::SceneConfig scene;
    scene.altitude_m = 500.0;
    scene.descent_rate_mps = 4.0;
    scene.snr_db = 25.0;
    const auto ex = radalt::compose_received(c, p, scene, 11);

    const auto result = radalt::process_record(ex.dirty, c, p, AltimeterConfig{});
    REQUIRE(result.detected);
    CHECK(std::abs(result.altitude_m - ex.meta.effective_altitude_m) < 5.0);

    CHECK(radalt::altitude_from_record(ex.dirty, c, p, AltimeterConfig{}) ==
          doctest::Approx(result.altitude_m));
}

TEST_CASE("a pure-noise record reports a miss instead of throwing") {
    const auto p = params();
    const auto c = radalt::generate_chirp(p);
    Rng rng(14);
    ComplexSignal noise;
    noise.fs = p.fs;
    noise.samples.resize(7500);
    for (auto& s : noise.samples) s = rng.cnormal();

    AltimeterConfig cfg;
    cfg.cfar.pfa = 1e-6;  // conservative so false alarms stay unlikely
    const auto result = radalt::process_record(noise, c, p, cfg);
    CHECK(!result.detected);
    CHECK_THROWS_AS(radalt::altitude_from_record(noise, c, p, cfg),
                    radalt::NoDetectionError);
}

TEST_CASE("profile transforms reject undersized paddings") {
    const auto p = params();
    const auto beat = complex_tone(5e4, 3750, p.fs);
    CHECK_THROWS(radalt::range_profile(beat, p, SweepKind::up, WindowKind::hann, 1000));
}
