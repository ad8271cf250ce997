#pragma once

#include <cstdint>
#include <vector>

#include "emoaudionet/audio.hpp"

namespace emoaudionet::augment {

struct AugmentSpec {
    std::vector<double> noise_factors{0.01, 0.02, 0.03};
    std::vector<double> pitch_semitones{0.5, 2.0, 5.0};
    std::uint64_t seed = 0;
};

/// z[i] = x[i] + alpha * r[i], r[i] i.i.d. uniform in [-1, 1) from a seeded
/// generator; result clamped to [-1, 1].
audio::AudioClip add_noise(const audio::AudioClip& clip, double alpha, std::uint64_t seed);

/// Lowers the pitch by `semitones_down`: resample by 2^(-s/12), then
/// time-stretch back to the original length with a windowed overlap-add that
/// aligns segments by cross-correlation. s = 0 returns the clip unchanged.
audio::AudioClip pitch_shift(const audio::AudioClip& clip, double semitones_down);

/// Originals plus one copy per (clip, noise factor) and per (clip, semitone).
/// Copy seeds derive from (spec.seed, clip_id, factor index), so output is
/// independent of evaluation order.
std::vector<audio::AudioClip> augment_corpus(const std::vector<audio::AudioClip>& clips,
                                             const AugmentSpec& spec);

}  // namespace emoaudionet::augment
