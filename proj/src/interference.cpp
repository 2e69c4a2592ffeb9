#include "radalt/interference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "radalt/fft.hpp"

namespace radalt {

namespace {

/// Normalize to unit mean power over [first, last).
void normalize_window(std::vector<cplx>& s, std::size_t first, std::size_t last) {
    double p = 0.0;
    for (std::size_t i = first; i < last; ++i) p += std::norm(s[i]);
    p /= static_cast<double>(last - first);
    if (p <= 0.0) throw std::invalid_argument("interference: zero-power active region");
    const double g = 1.0 / std::sqrt(p);
    for (std::size_t i = first; i < last; ++i) s[i] *= g;
}

/// Root-raised-cosine impulse response at time t (seconds) for symbol
/// period ts, with the standard removable singularities handled.
double rrc(double t, double ts, double beta) {
    const double x = t / ts;
    if (std::abs(x) < 1e-10) return (1.0 + beta * (4.0 / M_PI - 1.0)) / ts;
    if (beta > 0.0) {
        const double sing = ts / (4.0 * beta);
        if (std::abs(std::abs(t) - sing) < 1e-10 * ts) {
            const double a = (1.0 + 2.0 / M_PI) * std::sin(M_PI / (4.0 * beta));
            const double b = (1.0 - 2.0 / M_PI) * std::cos(M_PI / (4.0 * beta));
            return beta / (ts * std::sqrt(2.0)) * (a + b);
        }
    }
    const double num = std::sin(M_PI * x * (1.0 - beta)) +
                       4.0 * beta * x * std::cos(M_PI * x * (1.0 + beta));
    const double den = M_PI * x * (1.0 - 16.0 * beta * beta * x * x) * ts;
    return num / den;
}

}  // namespace

ComplexSignal gen_tones(const ToneSpec& spec, std::size_t len, double fs) {
    if (len == 0) throw std::invalid_argument("gen_tones: empty output requested");
    if (spec.n_tones < 1) throw std::invalid_argument("gen_tones: n_tones must be >= 1");

    std::vector<double> freqs = spec.freqs_hz;
    if (freqs.empty()) {
        // Interior points of a uniform partition of [-B/2, +B/2].
        const double b = spec.bandwidth_hz;
        for (int k = 0; k < spec.n_tones; ++k)
            freqs.push_back(-b / 2.0 + b * static_cast<double>(k + 1) /
                                          static_cast<double>(spec.n_tones + 1));
    }
    for (double f : freqs)
        if (std::abs(f) >= fs / 2.0)
            throw std::invalid_argument("gen_tones: tone frequency at or beyond fs/2");

    Rng rng(spec.rng_seed);
    std::vector<double> phases(freqs.size());
    for (auto& p : phases) p = rng.uniform(0.0, 2.0 * M_PI);

    std::vector<cplx> out(len, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double w = 2.0 * M_PI * freqs[k] / fs;
        for (std::size_t n = 0; n < len; ++n)
            out[n] += std::polar(1.0, w * static_cast<double>(n) + phases[k]);
    }
    normalize_window(out, 0, len);
    return {std::move(out), fs};
}

ComplexSignal gen_qpsk_burst(const QpskBurstSpec& spec, std::size_t len, double fs) {
    if (len == 0) throw std::invalid_argument("gen_qpsk_burst: empty output requested");
    if (spec.bandwidth_hz > fs)
        throw std::invalid_argument("gen_qpsk_burst: bandwidth exceeds sample rate");
    if (spec.duration == 0 || spec.duration > len)
        throw std::invalid_argument("gen_qpsk_burst: duration must be in (0, len]");
    if (spec.start_offset + spec.duration > len)
        throw std::invalid_argument("gen_qpsk_burst: burst exceeds record");
    if (spec.rolloff < 0.0 || spec.rolloff > 1.0)
        throw std::invalid_argument("gen_qpsk_burst: rolloff must be in [0, 1]");
    if (spec.span_symbols < 1)
        throw std::invalid_argument("gen_qpsk_burst: span_symbols must be >= 1");

    const double symbol_rate = spec.bandwidth_hz;
    const double ts = 1.0 / symbol_rate;
    const double burst_seconds = static_cast<double>(spec.duration) / fs;
    const auto n_symbols =
        static_cast<std::size_t>(std::ceil(burst_seconds * symbol_rate)) + spec.span_symbols;

    Rng rng(spec.rng_seed);
    std::vector<cplx> symbols(n_symbols);
    const double amp = 1.0 / std::sqrt(2.0);
    for (auto& s : symbols) {
        const double re = rng.uniform() < 0.5 ? -amp : amp;
        const double im = rng.uniform() < 0.5 ? -amp : amp;
        s = {re, im};
    }

    const double half_span = spec.span_symbols / 2.0 * ts;
    std::vector<cplx> out(len, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < spec.duration; ++i) {
        const std::size_t n = spec.start_offset + i;
        const double t = static_cast<double>(i) / fs;
        // Sum symbol pulses whose RRC support reaches t.
        const auto m_lo = static_cast<long long>(std::ceil((t - half_span) / ts));
        const auto m_hi = static_cast<long long>(std::floor((t + half_span) / ts));
        cplx acc{0.0, 0.0};
        for (long long m = std::max(0LL, m_lo);
             m <= std::min<long long>(static_cast<long long>(n_symbols) - 1, m_hi); ++m)
            acc += symbols[static_cast<std::size_t>(m)] *
                   rrc(t - static_cast<double>(m) * ts, ts, spec.rolloff);
        const double w = 2.0 * M_PI * spec.center_freq_hz / fs;
        out[n] = acc * std::polar(1.0, w * static_cast<double>(n));
    }
    normalize_window(out, spec.start_offset, spec.start_offset + spec.duration);
    return {std::move(out), fs};
}

std::size_t OfdmSpec::fft_size() const {
    const double ratio = sample_rate_hz / subcarrier_spacing_hz;
    const auto n = static_cast<std::size_t>(std::llround(ratio));
    if (n < 2 || std::abs(ratio - static_cast<double>(n)) > 1e-6)
        throw std::invalid_argument("OfdmSpec: sample_rate/spacing must be an integer >= 2");
    return n;
}

std::size_t OfdmSpec::active_subcarriers() const {
    const double usable = std::min(channel_bw_hz, sample_rate_hz);
    auto n = static_cast<std::size_t>(std::floor(usable / subcarrier_spacing_hz));
    if (n % 2 != 0) --n;
    if (n == 0) throw std::invalid_argument("OfdmSpec: no active subcarriers");
    return std::min(n, fft_size());
}

std::size_t OfdmSpec::cp_length() const {
    return static_cast<std::size_t>(std::llround(cp_fraction * static_cast<double>(fft_size())));
}

ComplexSignal gen_ofdm_burst(const OfdmSpec& spec, std::size_t len) {
    if (len == 0) throw std::invalid_argument("gen_ofdm_burst: empty output requested");
    const std::size_t nfft = spec.fft_size();
    const std::size_t n_active = spec.active_subcarriers();
    const std::size_t cp = spec.cp_length();
    const std::size_t sym_len = nfft + cp;

    std::size_t n_symbols = spec.n_symbols > 0
                                ? static_cast<std::size_t>(spec.n_symbols)
                                : (len + sym_len - 1) / sym_len;
    if (n_symbols * sym_len > (1u << 26))
        throw std::invalid_argument("gen_ofdm_burst: requested symbol train too long");

    Rng rng(spec.rng_seed);
    std::vector<cplx> out;
    out.reserve(n_symbols * sym_len);
    std::vector<cplx> grid(nfft);
    const double amp = 1.0 / std::sqrt(2.0);
    for (std::size_t s = 0; s < n_symbols; ++s) {
        std::fill(grid.begin(), grid.end(), cplx{0.0, 0.0});
        // Centered allocation, DC unused: subcarriers +-1..+-n_active/2.
        for (std::size_t k = 1; k <= n_active / 2; ++k) {
            const double re1 = rng.uniform() < 0.5 ? -amp : amp;
            const double im1 = rng.uniform() < 0.5 ? -amp : amp;
            const double re2 = rng.uniform() < 0.5 ? -amp : amp;
            const double im2 = rng.uniform() < 0.5 ? -amp : amp;
            grid[k] = {re1, im1};
            grid[nfft - k] = {re2, im2};
        }
        auto sym = fft::inverse(grid);
        for (std::size_t i = 0; i < cp; ++i) out.push_back(sym[nfft - cp + i]);
        out.insert(out.end(), sym.begin(), sym.end());
    }
    out.resize(len, cplx{0.0, 0.0});
    const std::size_t active_len = std::min(len, n_symbols * sym_len);
    normalize_window(out, 0, active_len);
    return {std::move(out), spec.sample_rate_hz};
}

ComplexSignal scale_to_sir(const ComplexSignal& clean, const ComplexSignal& intf, double sir_db) {
    if (clean.size() != intf.size())
        throw std::invalid_argument("scale_to_sir: length mismatch");
    if (clean.fs != intf.fs) throw std::invalid_argument("scale_to_sir: sample-rate mismatch");
    const double p_intf = power(intf);
    if (p_intf <= 0.0) throw std::invalid_argument("scale_to_sir: zero-power interference");
    const double p_clean = power(clean);
    const double target = p_clean / db_to_linear(sir_db);
    const double g = std::sqrt(target / p_intf);
    ComplexSignal out = intf;
    for (auto& v : out.samples) v *= g;
    return out;
}

ComplexSignal apply_overlap(const ComplexSignal& intf, const OverlapSpec& spec, Rng& rng) {
    if (spec.overlap_fraction < 0.0 || spec.overlap_fraction > 1.0)
        throw std::invalid_argument("apply_overlap: overlap_fraction must be in [0, 1]");
    const std::size_t len = intf.size();
    const auto window =
        static_cast<std::size_t>(std::llround(spec.overlap_fraction * static_cast<double>(len)));
    if (window == len) return intf;
    ComplexSignal out{std::vector<cplx>(len, cplx{0.0, 0.0}), intf.fs};
    if (window == 0) return out;
    const auto start = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(len - window)));
    std::copy(intf.samples.begin() + static_cast<std::ptrdiff_t>(start),
              intf.samples.begin() + static_cast<std::ptrdiff_t>(start + window),
              out.samples.begin() + static_cast<std::ptrdiff_t>(start));
    return out;
}

}  // namespace radalt
