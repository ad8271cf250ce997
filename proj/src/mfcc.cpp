#include "emoaudionet/mfcc.hpp"

#include <algorithm>
#include <cmath>

#include "emoaudionet/dsp.hpp"
#include "emoaudionet/errors.hpp"

namespace emoaudionet::mfcc {

namespace {
constexpr double kLogFloor = 1e-10;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

std::vector<double> power_spectrum(const audio::Frame& frame) {
    return dsp::power_spectrum_pow2(frame.values);
}

std::vector<std::vector<double>> build_mel_filterbank(std::size_t n_filters,
                                                      std::size_t fft_bins,
                                                      std::uint32_t sample_rate) {
    if (n_filters < 2) throw InvalidArgumentError("need at least 2 mel filters");
    if (fft_bins < n_filters + 2) {
        throw InvalidArgumentError("fft_bins (" + std::to_string(fft_bins) +
                                   ") must be >= n_filters + 2 (" +
                                   std::to_string(n_filters + 2) + ")");
    }

    const std::size_t fft_len = 2 * (fft_bins - 1);
    const double nyquist = sample_rate / 2.0;
    const double mel_max = hz_to_mel(nyquist);

    // n_filters + 2 edge points equally spaced in mel; filter i spans
    // [edge_i, edge_{i+2}] and peaks at edge_{i+1}.
    std::vector<double> edges_hz(n_filters + 2);
    for (std::size_t j = 0; j < edges_hz.size(); ++j) {
        edges_hz[j] = mel_to_hz(mel_max * static_cast<double>(j) / (n_filters + 1));
    }

    std::vector<std::vector<double>> bank(n_filters, std::vector<double>(fft_bins, 0.0));
    for (std::size_t i = 0; i < n_filters; ++i) {
        const double lo = edges_hz[i], center = edges_hz[i + 1], hi = edges_hz[i + 2];
        for (std::size_t k = 0; k < fft_bins; ++k) {
            const double f = static_cast<double>(k) * sample_rate / static_cast<double>(fft_len);
            double w = 0.0;
            if (f > lo && f < hi) {
                w = f <= center ? (f - lo) / (center - lo) : (hi - f) / (hi - center);
            }
            bank[i][k] = w;
        }
    }
    return bank;
}

std::vector<double> compute_mfcc_frame(const audio::Frame& frame, const MfccConfig& config,
                                       const std::vector<std::vector<double>>& filterbank) {
    const auto power = power_spectrum(frame);
    if (filterbank.empty() || filterbank.front().size() != power.size()) {
        throw ShapeError("filterbank expects " +
                         std::to_string(filterbank.empty() ? 0 : filterbank.front().size()) +
                         " bins, power spectrum has " + std::to_string(power.size()));
    }

    std::vector<double> log_mel(filterbank.size());
    for (std::size_t i = 0; i < filterbank.size(); ++i) {
        double e = 0.0;
        const auto& row = filterbank[i];
        for (std::size_t k = 0; k < power.size(); ++k) e += row[k] * power[k];
        log_mel[i] = std::log(e + kLogFloor);
    }

    auto cepstra = dsp::dct2_ortho(log_mel);
    const std::size_t keep = std::min(config.cepstral_per_frame, cepstra.size());
    cepstra.resize(keep);
    return cepstra;
}

MfccInput assemble_mfcc_input(const audio::AudioClip& clip, const MfccConfig& config) {
    if (clip.samples.empty()) throw InvalidArgumentError("clip has no samples");
    if (config.output_dim == 0) throw InvalidArgumentError("output_dim must be >= 1");
    if (config.cepstral_per_frame > config.mel_filters) {
        throw InvalidArgumentError("cepstral_per_frame cannot exceed mel_filters");
    }

    auto frames = audio::frame_signal(clip, config.window_seconds, config.hop_seconds);
    const auto window = audio::hamming_window(frames.front().values.size());
    const std::size_t fft_bins =
        dsp::next_pow2(frames.front().values.size()) / 2 + 1;
    const auto bank = build_mel_filterbank(config.mel_filters, fft_bins, clip.sample_rate);

    MfccInput out;
    out.clip_id = clip.clip_id;
    out.values.reserve(config.output_dim);
    for (const auto& frame : frames) {
        audio::Frame windowed;
        windowed.start_index = frame.start_index;
        windowed.values.resize(frame.values.size());
        for (std::size_t i = 0; i < frame.values.size(); ++i) {
            windowed.values[i] = frame.values[i] * window[i];
        }
        auto cepstra = compute_mfcc_frame(windowed, config, bank);
        for (double c : cepstra) {
            if (out.values.size() == config.output_dim) break;
            out.values.push_back(c);
        }
        if (out.values.size() == config.output_dim) break;
    }
    out.values.resize(config.output_dim, 0.0);  // zero-pad short clips
    return out;
}

}  // namespace emoaudionet::mfcc
