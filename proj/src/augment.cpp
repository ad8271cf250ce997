#include "emoaudionet/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "emoaudionet/errors.hpp"
#include "emoaudionet/rng.hpp"

namespace emoaudionet::augment {

namespace {

std::string format_factor(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

/// Reads `samples` at fractional position `pos` (linear interpolation).
double sample_at(const std::vector<double>& samples, double pos) {
    const auto i0 = static_cast<std::size_t>(pos);
    if (i0 + 1 >= samples.size()) return samples.back();
    const double t = pos - static_cast<double>(i0);
    return (1.0 - t) * samples[i0] + t * samples[i0 + 1];
}

/// Resamples by reading positions i * ratio; frequencies scale by `ratio`.
std::vector<double> resample_by_ratio(const std::vector<double>& in, double ratio) {
    const auto out_len = static_cast<std::size_t>(
        std::floor(static_cast<double>(in.size() - 1) / ratio)) + 1;
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = sample_at(in, i * ratio);
    return out;
}

/// Time-stretches `in` to exactly `target_len` samples without changing
/// pitch. Hann-windowed overlap-add; each analysis window is chosen within a
/// small search range so it best continues the previously copied segment.
std::vector<double> stretch_to_length(const std::vector<double>& in, std::size_t target_len,
                                      std::uint32_t sample_rate) {
    const std::size_t in_len = in.size();
    if (in_len == target_len) return in;

    std::size_t window = std::min<std::size_t>(in_len, (sample_rate / 20) & ~std::size_t{1});
    window = std::max<std::size_t>(window, 4);
    const std::size_t hop = window / 2;
    const std::size_t search = std::min<std::size_t>(sample_rate / 100, in_len / 4);

    std::vector<double> win(window);
    for (std::size_t i = 0; i < window; ++i) {
        win[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / static_cast<double>(window));
    }

    const double stretch = static_cast<double>(in_len) / static_cast<double>(target_len);
    std::vector<double> acc(target_len, 0.0);
    std::vector<double> weight(target_len, 0.0);

    std::size_t prev_pos = 0;
    for (std::size_t out_pos = 0; out_pos < target_len; out_pos += hop) {
        std::size_t nominal = static_cast<std::size_t>(out_pos * stretch);
        nominal = std::min(nominal, in_len > window ? in_len - window : 0);

        std::size_t best = nominal;
        if (out_pos > 0 && search > 0 && in_len > window) {
            // The natural continuation of the previous segment starts hop
            // samples after it; pick the candidate most correlated with it.
            const std::size_t ref = std::min(prev_pos + hop, in_len - window);
            const std::size_t lo = nominal > search ? nominal - search : 0;
            const std::size_t hi = std::min(nominal + search, in_len - window);
            double best_score = -std::numeric_limits<double>::infinity();
            for (std::size_t cand = lo; cand <= hi; ++cand) {
                double dot = 0.0, norm = 0.0;
                for (std::size_t i = 0; i < window; i += 4) {  // coarse correlation
                    dot += in[cand + i] * in[ref + i];
                    norm += in[cand + i] * in[cand + i];
                }
                const double score = norm > 0.0 ? dot / std::sqrt(norm) : dot;
                if (score > best_score) {
                    best_score = score;
                    best = cand;
                }
            }
        }
        prev_pos = best;

        for (std::size_t i = 0; i < window && out_pos + i < target_len; ++i) {
            acc[out_pos + i] += in[best + i] * win[i];
            weight[out_pos + i] += win[i];
        }
    }

    for (std::size_t i = 0; i < target_len; ++i) {
        acc[i] = weight[i] > 1e-9 ? acc[i] / weight[i] : 0.0;
        acc[i] = std::clamp(acc[i], -1.0, 1.0);
    }
    return acc;
}

}  // namespace

audio::AudioClip add_noise(const audio::AudioClip& clip, double alpha, std::uint64_t seed) {
    if (alpha < 0.0) throw InvalidArgumentError("noise factor must be >= 0");
    audio::AudioClip out = clip;
    if (alpha == 0.0) return out;
    std::mt19937_64 rng(seed);
    for (double& s : out.samples) {
        s = std::clamp(s + alpha * uniform_pm1(rng), -1.0, 1.0);
    }
    return out;
}

audio::AudioClip pitch_shift(const audio::AudioClip& clip, double semitones_down) {
    if (semitones_down < 0.0) throw InvalidArgumentError("semitone shift must be >= 0");
    if (semitones_down == 0.0) return clip;
    if (clip.samples.size() < 2) return clip;

    const double ratio = std::pow(2.0, -semitones_down / 12.0);
    const auto slowed = resample_by_ratio(clip.samples, ratio);

    audio::AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.clip_id = clip.clip_id;
    out.samples = stretch_to_length(slowed, clip.samples.size(), clip.sample_rate);
    return out;
}

std::vector<audio::AudioClip> augment_corpus(const std::vector<audio::AudioClip>& clips,
                                             const AugmentSpec& spec) {
    if (clips.empty()) throw InvalidArgumentError("augment_corpus needs at least one clip");
    for (double a : spec.noise_factors) {
        if (a < 0.0) throw InvalidArgumentError("noise factor must be >= 0");
    }
    for (double s : spec.pitch_semitones) {
        if (s < 0.0) throw InvalidArgumentError("semitone shift must be >= 0");
    }

    std::vector<audio::AudioClip> out;
    out.reserve(clips.size() * (1 + spec.noise_factors.size() + spec.pitch_semitones.size()));
    for (const auto& clip : clips) {
        out.push_back(clip);
        for (std::size_t i = 0; i < spec.noise_factors.size(); ++i) {
            const std::uint64_t seed =
                derive_seed(spec.seed, clip.clip_id + "|noise", i);
            auto copy = add_noise(clip, spec.noise_factors[i], seed);
            copy.clip_id = clip.clip_id + "__noise" + format_factor(spec.noise_factors[i]);
            out.push_back(std::move(copy));
        }
        for (std::size_t i = 0; i < spec.pitch_semitones.size(); ++i) {
            auto copy = pitch_shift(clip, spec.pitch_semitones[i]);
            copy.clip_id = clip.clip_id + "__pitch" + format_factor(spec.pitch_semitones[i]);
            out.push_back(std::move(copy));
        }
    }
    return out;
}

}  // namespace emoaudionet::augment
