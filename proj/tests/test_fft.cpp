#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "radalt/fft.hpp"
#include "radalt/rng.hpp"
#include "radalt/signal.hpp"

using radalt::cplx;
using radalt::Rng;

namespace {

// Quadratic-time reference transform, written against the definition.
std::vector<cplx> naive_dft(const std::vector<cplx>& x) {
    const std::size_t n = x.size();
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        cplx acc{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k * t) /
                               static_cast<double>(n);
            acc += x[t] * cplx(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

std::vector<cplx> random_signal(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> x(n);
    for (auto& v : x) v = rng.cnormal();
    return x;
}

}  // namespace

TEST_CASE("forward transform matches the quadratic-time definition") {
    for (std::size_t n : {8u, 60u, 64u, 97u}) {
        const auto x = random_signal(n, 42 + n);
        const auto fast = radalt::fft::forward(x);
        const auto slow = naive_dft(x);
        REQUIRE(fast.size() == n);
        double worst = 0.0;
        for (std::size_t k = 0; k < n; ++k) worst = std::max(worst, std::abs(fast[k] - slow[k]));
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("inverse undoes forward exactly") {
    const auto x = random_signal(200, 7);
    const auto back = radalt::fft::inverse(radalt::fft::forward(x));
    REQUIRE(back.size() == x.size());
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(back[i] - x[i]) < 1e-12);
}

TEST_CASE("unnormalized forward satisfies Parseval's identity") {
    const auto x = random_signal(128, 3);
    const auto spec = radalt::fft::forward(x);
    double t = 0.0, f = 0.0;
    for (const auto& v : x) t += std::norm(v);
    for (const auto& v : spec) f += std::norm(v);
    CHECK(f / static_cast<double>(x.size()) == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("bin frequencies wrap to negative above the midpoint") {
    const double fs = 1000.0;
    CHECK(radalt::fft::bin_frequency(0, 10, fs) == doctest::Approx(0.0));
    CHECK(radalt::fft::bin_frequency(1, 10, fs) == doctest::Approx(100.0));
    CHECK(radalt::fft::bin_frequency(9, 10, fs) == doctest::Approx(-100.0));
    CHECK(radalt::fft::bin_frequency(6, 10, fs) == doctest::Approx(-400.0));
}

TEST_CASE("fft cross-correlation matches the direct sum") {
    const auto stream = random_signal(50, 11);
    const auto ref = random_signal(20, 12);
    const auto fast = radalt::fft::xcorr_valid(stream, ref);
    REQUIRE(fast.size() == stream.size() - ref.size() + 1);
    for (std::size_t m = 0; m < fast.size(); ++m) {
        cplx direct{0.0, 0.0};
        for (std::size_t n = 0; n < ref.size(); ++n) direct += stream[m + n] * std::conj(ref[n]);
        CHECK(std::abs(fast[m] - direct) < 1e-9);
    }
}
