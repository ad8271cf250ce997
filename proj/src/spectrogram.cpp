#include "emoaudionet/spectrogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "emoaudionet/dsp.hpp"
#include "emoaudionet/errors.hpp"

namespace emoaudionet::spectro {

namespace {

constexpr double kDbFloor = 1e-10;

struct Anchor {
    double pos, r, g, b;
};
constexpr Anchor kAnchors[] = {
    {0.00, 0.0, 0.0, 0.3}, {0.25, 0.0, 0.3, 1.0}, {0.50, 0.0, 0.9, 0.3},
    {0.75, 1.0, 0.9, 0.0}, {1.00, 0.9, 0.0, 0.0},
};

}  // namespace

SpectroMatrix compute_spectro_matrix(const audio::AudioClip& clip) {
    if (clip.samples.empty()) throw InvalidArgumentError("clip has no samples");

    const std::size_t len = clip.samples.size();
    const std::size_t seg_len = (len + kSegments - 1) / kSegments;  // last segment zero-padded
    const auto window = audio::hamming_window(seg_len);
    const std::size_t fft_len = dsp::next_pow2(seg_len);
    const std::size_t bins = fft_len / 2 + 1;

    SpectroMatrix m;
    m.freq_bins = bins;
    m.values.assign(bins * kSegments, 0.0);

    std::vector<double> segment(seg_len);
    for (std::size_t s = 0; s < kSegments; ++s) {
        const std::size_t start = s * seg_len;
        for (std::size_t i = 0; i < seg_len; ++i) {
            const std::size_t idx = start + i;
            segment[i] = idx < len ? clip.samples[idx] * window[i] : 0.0;
        }
        const auto power = dsp::power_spectrum_pow2(segment);
        for (std::size_t k = 0; k < bins; ++k) m.at(k, s) = power[k];
    }
    return m;
}

SpectroMatrix db_scale_normalize(const SpectroMatrix& matrix) {
    SpectroMatrix out;
    out.freq_bins = matrix.freq_bins;
    out.values.resize(matrix.values.size());

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < matrix.values.size(); ++i) {
        const double db = 10.0 * std::log10(matrix.values[i] + kDbFloor);
        out.values[i] = db;
        lo = std::min(lo, db);
        hi = std::max(hi, db);
    }
    const double span = hi - lo;
    if (span <= 0.0) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    for (double& v : out.values) v = (v - lo) / span;
    return out;
}

std::vector<double> resize_bilinear(const std::vector<double>& values, std::size_t rows,
                                    std::size_t cols) {
    if (rows == 0 || cols == 0 || values.size() != rows * cols) {
        throw InvalidArgumentError("resize_bilinear: bad input dimensions");
    }
    const std::size_t n = kImageSize;
    std::vector<double> out(n * n);
    const double row_step = rows > 1 ? static_cast<double>(rows - 1) / (n - 1) : 0.0;
    const double col_step = cols > 1 ? static_cast<double>(cols - 1) / (n - 1) : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double sy = i * row_step;
        const auto y0 = static_cast<std::size_t>(sy);
        const std::size_t y1 = std::min(y0 + 1, rows - 1);
        const double ty = sy - static_cast<double>(y0);
        for (std::size_t j = 0; j < n; ++j) {
            const double sx = j * col_step;
            const auto x0 = static_cast<std::size_t>(sx);
            const std::size_t x1 = std::min(x0 + 1, cols - 1);
            const double tx = sx - static_cast<double>(x0);
            const double top = (1.0 - tx) * values[y0 * cols + x0] + tx * values[y0 * cols + x1];
            const double bot = (1.0 - tx) * values[y1 * cols + x0] + tx * values[y1 * cols + x1];
            out[i * n + j] = (1.0 - ty) * top + ty * bot;
        }
    }
    return out;
}

SpectroImage apply_colormap(const std::vector<double>& gray, std::size_t* clamped) {
    if (gray.size() != kImageSize * kImageSize) {
        throw InvalidArgumentError("apply_colormap expects a 224x224 matrix");
    }
    SpectroImage img;
    img.pixels.resize(gray.size() * 3);
    std::size_t clamp_count = 0;
    for (std::size_t i = 0; i < gray.size(); ++i) {
        double g = gray[i];
        if (g < 0.0 || g > 1.0) {
            g = std::clamp(g, 0.0, 1.0);
            ++clamp_count;
        }
        const auto seg = std::min<std::size_t>(3, static_cast<std::size_t>(g * 4.0));
        const Anchor& a = kAnchors[seg];
        const Anchor& b = kAnchors[seg + 1];
        const double t = (g - a.pos) / (b.pos - a.pos);
        img.pixels[3 * i + 0] = a.r + t * (b.r - a.r);
        img.pixels[3 * i + 1] = a.g + t * (b.g - a.g);
        img.pixels[3 * i + 2] = a.b + t * (b.b - a.b);
    }
    if (clamped) *clamped = clamp_count;
    return img;
}

SpectroImage render_spectro_image(const audio::AudioClip& clip) {
    const auto matrix = compute_spectro_matrix(clip);
    const auto norm = db_scale_normalize(matrix);
    const auto gray = resize_bilinear(norm.values, norm.freq_bins, kSegments);
    auto img = apply_colormap(gray);
    img.clip_id = clip.clip_id;
    return img;
}

}  // namespace emoaudionet::spectro
