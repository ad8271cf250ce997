#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace emoaudionet::dsp {

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

/// In-place iterative radix-2 FFT. Length must be a power of two.
void fft(std::vector<std::complex<double>>& x);

/// One-sided power spectrum |X_k|^2, k = 0..n/2, of a real signal
/// zero-padded to the next power of two. Returns floor(n/2)+1 bins where
/// n is the padded length.
std::vector<double> power_spectrum_pow2(const std::vector<double>& signal);

/// Frequency in Hz of the strongest one-sided FFT bin of `signal`.
double dominant_frequency_hz(const std::vector<double>& signal, double sample_rate);

/// Orthonormal DCT-II: C_k = s_k * sum_j y_j cos(pi*(j+0.5)*k/M),
/// s_0 = sqrt(1/M), s_k = sqrt(2/M). Inverse of dct3_ortho.
std::vector<double> dct2_ortho(const std::vector<double>& y);

/// Orthonormal DCT-III, the inverse of dct2_ortho.
std::vector<double> dct3_ortho(const std::vector<double>& c);

}  // namespace emoaudionet::dsp
