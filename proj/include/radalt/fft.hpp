#pragma once

#include <complex>
#include <span>
#include <vector>

namespace radalt::fft {

/// Forward DFT, unnormalized (matches the usual DSP convention).
std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in);

/// Inverse DFT, normalized by 1/N so inverse(forward(x)) == x.
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in);

/// FFT bin index -> frequency in Hz for an N-point transform at rate fs.
/// Bins above N/2 map to negative frequencies.
double bin_frequency(std::size_t bin, std::size_t n, double fs);

/// Linear cross-correlation lags 0..len(stream)-len(ref):
/// out[m] = sum_n stream[m+n] * conj(ref[n]). FFT-based.
std::vector<std::complex<double>> xcorr_valid(std::span<const std::complex<double>> stream,
                                              std::span<const std::complex<double>> ref);

}  // namespace radalt::fft
