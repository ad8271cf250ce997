#include "emoaudionet/dsp.hpp"

#include <cmath>
#include <numbers>

#include "emoaudionet/errors.hpp"

namespace emoaudionet::dsp {

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw InvalidArgumentError("fft length must be a power of two, got " + std::to_string(n));
    }
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = x[i + k];
                std::complex<double> v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<double> power_spectrum_pow2(const std::vector<double>& signal) {
    const std::size_t padded = next_pow2(std::max<std::size_t>(signal.size(), 1));
    std::vector<std::complex<double>> buf(padded, {0.0, 0.0});
    for (std::size_t i = 0; i < signal.size(); ++i) buf[i] = {signal[i], 0.0};
    fft(buf);
    std::vector<double> power(padded / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) power[k] = std::norm(buf[k]);
    return power;
}

double dominant_frequency_hz(const std::vector<double>& signal, double sample_rate) {
    auto power = power_spectrum_pow2(signal);
    const std::size_t padded = 2 * (power.size() - 1);
    std::size_t best = 0;
    for (std::size_t k = 1; k < power.size(); ++k) {
        if (power[k] > power[best]) best = k;
    }
    return static_cast<double>(best) * sample_rate / static_cast<double>(padded);
}

std::vector<double> dct2_ortho(const std::vector<double>& y) {
    const std::size_t m = y.size();
    if (m == 0) throw InvalidArgumentError("dct input must be non-empty");
    std::vector<double> c(m, 0.0);
    const double scale0 = std::sqrt(1.0 / static_cast<double>(m));
    const double scale = std::sqrt(2.0 / static_cast<double>(m));
    for (std::size_t k = 0; k < m; ++k) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            acc += y[j] * std::cos(std::numbers::pi * (j + 0.5) * k / static_cast<double>(m));
        }
        c[k] = (k == 0 ? scale0 : scale) * acc;
    }
    return c;
}

std::vector<double> dct3_ortho(const std::vector<double>& c) {
    const std::size_t m = c.size();
    if (m == 0) throw InvalidArgumentError("dct input must be non-empty");
    std::vector<double> y(m, 0.0);
    const double scale0 = std::sqrt(1.0 / static_cast<double>(m));
    const double scale = std::sqrt(2.0 / static_cast<double>(m));
    for (std::size_t j = 0; j < m; ++j) {
        double acc = scale0 * c[0];
        for (std::size_t k = 1; k < m; ++k) {
            acc += scale * c[k] *
                   std::cos(std::numbers::pi * (j + 0.5) * k / static_cast<double>(m));
        }
        y[j] = acc;
    }
    return y;
}

}  // namespace emoaudionet::dsp
