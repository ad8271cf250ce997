#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace emoaudionet::audio {

/// Mono PCM clip, samples normalized to [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    std::uint32_t sample_rate = 0;
    std::string clip_id;

    double duration_seconds() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

/// One analysis window cut from a clip. Short trailing windows are
/// zero-padded so every frame has the configured length.
struct Frame {
    std::vector<double> values;
    std::size_t start_index = 0;
};

/// Reads a RIFF/WAVE file: PCM 16-bit or IEEE float 32-bit, mono or stereo.
/// Stereo is downmixed by channel mean; 16-bit samples are divided by 32768.
/// Unknown chunks are skipped. Throws DecodeError / UnsupportedFormatError.
AudioClip load_wav(const std::string& path);

/// Writes a mono clip as 16-bit PCM. Samples are clamped to [-1, 1] and
/// rounded; round(1.0 * 32768) saturates to 32767.
void save_wav(const std::string& path, const AudioClip& clip);

/// Linear-interpolation resampler. Output length is
/// round(input_length * target_rate / source_rate), clamped to >= 1.
AudioClip resample_linear(const AudioClip& clip, std::uint32_t target_rate);

/// Hamming weights w[k] = 0.54 - 0.46*cos(2*pi*k/(n-1)); n = 1 gives {1.0}.
std::vector<double> hamming_window(std::size_t n);

/// Cuts frames of `window_seconds` every `hop_seconds`, starting at 0.
/// A frame starts at every hop offset below the clip length; material past
/// the end is zero-padded, so short clips still yield one frame.
std::vector<Frame> frame_signal(const AudioClip& clip, double window_seconds,
                                double hop_seconds);

}  // namespace emoaudionet::audio
