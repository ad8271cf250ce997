#pragma once

// Naive reference implementations used as test oracles. Deliberately written
// as direct transcriptions of the definitions, independent of the library's
// optimized paths.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <random>
#include <vector>

#include "emoaudionet/rng.hpp"

namespace oracle {

/// O(n^2) DFT power spectrum over the one-sided bins of `x` as-is (the
/// caller zero-pads if a padded length is wanted).
inline std::vector<double> naive_dft_power(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<double> power(n / 2 + 1);
    for (std::size_t k = 0; k < power.size(); ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t t = 0; t < n; ++t) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) *
                               static_cast<double>(t) / static_cast<double>(n);
            acc += x[t] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        power[k] = std::norm(acc);
    }
    return power;
}

inline std::size_t pow2_at_least(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// Quadruple-loop 1D cross-correlation, stride 1.
/// in: [L x Cin], ker: [K x Cin x Cout], out: [L' x Cout].
inline std::vector<double> naive_conv1d(const std::vector<double>& in, std::size_t L,
                                        std::size_t Cin, const std::vector<double>& ker,
                                        std::size_t K, std::size_t Cout,
                                        const std::vector<double>& bias, bool same,
                                        std::size_t& out_len) {
    const std::size_t pad = same ? (K - 1) / 2 : 0;
    out_len = same ? L : L - K + 1;
    std::vector<double> out(out_len * Cout, 0.0);
    for (std::size_t l = 0; l < out_len; ++l) {
        for (std::size_t co = 0; co < Cout; ++co) {
            double acc = bias[co];
            for (std::size_t k = 0; k < K; ++k) {
                const std::ptrdiff_t t =
                    static_cast<std::ptrdiff_t>(l + k) - static_cast<std::ptrdiff_t>(pad);
                if (t < 0 || t >= static_cast<std::ptrdiff_t>(L)) continue;
                for (std::size_t ci = 0; ci < Cin; ++ci) {
                    acc += in[static_cast<std::size_t>(t) * Cin + ci] *
                           ker[(k * Cin + ci) * Cout + co];
                }
            }
            out[l * Cout + co] = acc;
        }
    }
    return out;
}

/// Six-loop 2D cross-correlation, stride 1.
inline std::vector<double> naive_conv2d(const std::vector<double>& in, std::size_t H,
                                        std::size_t W, std::size_t Cin,
                                        const std::vector<double>& ker, std::size_t Kh,
                                        std::size_t Kw, std::size_t Cout,
                                        const std::vector<double>& bias, bool same,
                                        std::size_t& out_h, std::size_t& out_w) {
    const std::size_t pt = same ? (Kh - 1) / 2 : 0;
    const std::size_t pl = same ? (Kw - 1) / 2 : 0;
    out_h = same ? H : H - Kh + 1;
    out_w = same ? W : W - Kw + 1;
    std::vector<double> out(out_h * out_w * Cout, 0.0);
    for (std::size_t y = 0; y < out_h; ++y) {
        for (std::size_t x = 0; x < out_w; ++x) {
            for (std::size_t co = 0; co < Cout; ++co) {
                double acc = bias[co];
                for (std::size_t dy = 0; dy < Kh; ++dy) {
                    for (std::size_t dx = 0; dx < Kw; ++dx) {
                        const std::ptrdiff_t yy =
                            static_cast<std::ptrdiff_t>(y + dy) - static_cast<std::ptrdiff_t>(pt);
                        const std::ptrdiff_t xx =
                            static_cast<std::ptrdiff_t>(x + dx) - static_cast<std::ptrdiff_t>(pl);
                        if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(H) || xx < 0 ||
                            xx >= static_cast<std::ptrdiff_t>(W)) {
                            continue;
                        }
                        for (std::size_t ci = 0; ci < Cin; ++ci) {
                            acc += in[(static_cast<std::size_t>(yy) * W +
                                       static_cast<std::size_t>(xx)) * Cin + ci] *
                                   ker[((dy * Kw + dx) * Cin + ci) * Cout + co];
                        }
                    }
                }
                out[(y * out_w + x) * Cout + co] = acc;
            }
        }
    }
    return out;
}

/// Two-pass sample Pearson correlation.
inline double pearson_ref(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double cov = 0.0, vx = 0.0, vy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        cov += (xs[i] - mx) * (ys[i] - my);
        vx += (xs[i] - mx) * (xs[i] - mx);
        vy += (ys[i] - my) * (ys[i] - my);
    }
    return cov / std::sqrt(vx * vy);
}

inline std::vector<double> make_sine(double freq_hz, double sample_rate, double seconds,
                                     double amplitude = 0.5) {
    const auto n = static_cast<std::size_t>(sample_rate * seconds);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        out[t] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz *
                                      static_cast<double>(t) / sample_rate);
    }
    return out;
}

inline std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng,
                                         double scale = 1.0) {
    std::vector<double> out(n);
    for (auto& v : out) v = scale * emoaudionet::uniform_pm1(rng);
    return out;
}

}  // namespace oracle
