#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "emoaudionet/audio.hpp"

namespace emoaudionet::spectro {

inline constexpr std::size_t kSegments = 256;
inline constexpr std::size_t kImageSize = 224;

/// Power (later dB-normalized) matrix: rows = frequency bins, columns = the
/// 256 time segments.
struct SpectroMatrix {
    std::size_t freq_bins = 0;
    std::vector<double> values;  // row-major [freq_bins x kSegments]

    double& at(std::size_t bin, std::size_t segment) {
        return values[bin * kSegments + segment];
    }
    double at(std::size_t bin, std::size_t segment) const {
        return values[bin * kSegments + segment];
    }
};

/// 224 x 224 x 3 color rendering, channel-last row-major, values in [0, 1].
struct SpectroImage {
    std::vector<double> pixels;  // kImageSize * kImageSize * 3
    std::string clip_id;
};

/// Splits the clip into 256 equal non-overlapping segments (last zero-padded),
/// Hamming-windows each, and takes the one-sided FFT power spectrum.
SpectroMatrix compute_spectro_matrix(const audio::AudioClip& clip);

/// v -> 10*log10(v + 1e-10), then min-max rescale to [0, 1] per matrix.
/// A constant matrix maps to all zeros.
SpectroMatrix db_scale_normalize(const SpectroMatrix& matrix);

/// Corner-aligned bilinear resize of a [rows x cols] matrix to 224 x 224.
std::vector<double> resize_bilinear(const std::vector<double>& values, std::size_t rows,
                                    std::size_t cols);

/// Piecewise-linear five-anchor colormap over [0, 1]. Out-of-range grays are
/// clamped; `clamped` (when non-null) receives the clamp count.
SpectroImage apply_colormap(const std::vector<double>& gray, std::size_t* clamped = nullptr);

/// Full pipeline: matrix -> dB normalize -> resize -> colormap.
SpectroImage render_spectro_image(const audio::AudioClip& clip);

}  // namespace emoaudionet::spectro
