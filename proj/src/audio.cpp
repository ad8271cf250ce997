#include "emoaudionet/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "emoaudionet/errors.hpp"

namespace emoaudionet::audio {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

struct FmtChunk {
    std::uint16_t format_tag = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
};

}  // namespace

AudioClip load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open wav file: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw DecodeError("not a RIFF/WAVE file: " + path);
    }

    FmtChunk fmt;
    bool have_fmt = false;
    const unsigned char* data_ptr = nullptr;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        char id[5] = {0};
        std::memcpy(id, bytes.data() + pos, 4);
        std::uint32_t chunk_size = read_u32(bytes.data() + pos + 4);
        pos += 8;
        if (pos + chunk_size > bytes.size()) {
            throw DecodeError(std::string("truncated '") + id + "' chunk in " + path);
        }
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (chunk_size < 16) throw DecodeError("short 'fmt ' chunk in " + path);
            const unsigned char* p = bytes.data() + pos;
            fmt.format_tag = read_u16(p);
            fmt.channels = read_u16(p + 2);
            fmt.sample_rate = read_u32(p + 4);
            fmt.bits_per_sample = read_u16(p + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data_ptr = bytes.data() + pos;
            data_len = chunk_size;
            // fmt is required before data can be decoded, but keep scanning
            // behaviour simple: data always follows fmt in practice.
        }
        pos += chunk_size + (chunk_size & 1);  // chunks are word-aligned
    }

    if (!have_fmt) throw DecodeError("missing 'fmt ' chunk in " + path);
    if (data_ptr == nullptr) throw DecodeError("missing 'data' chunk in " + path);
    if (fmt.sample_rate == 0) throw DecodeError("zero sample rate in 'fmt ' chunk of " + path);
    if (fmt.channels != 1 && fmt.channels != 2) {
        throw UnsupportedFormatError("unsupported channel count " +
                                     std::to_string(fmt.channels) + " in " + path);
    }

    std::size_t bytes_per_sample;
    if (fmt.format_tag == kFormatPcm && fmt.bits_per_sample == 16) {
        bytes_per_sample = 2;
    } else if (fmt.format_tag == kFormatIeeeFloat && fmt.bits_per_sample == 32) {
        bytes_per_sample = 4;
    } else {
        throw UnsupportedFormatError("unsupported encoding (format tag " +
                                     std::to_string(fmt.format_tag) + ", " +
                                     std::to_string(fmt.bits_per_sample) + " bits) in " + path);
    }

    const std::size_t frame_bytes = bytes_per_sample * fmt.channels;
    if (data_len % frame_bytes != 0) {
        throw DecodeError("'data' chunk size not a multiple of the frame size in " + path);
    }
    const std::size_t n_frames = data_len / frame_bytes;
    if (n_frames == 0) throw DecodeError("empty 'data' chunk in " + path);

    AudioClip clip;
    clip.sample_rate = fmt.sample_rate;
    clip.clip_id = std::filesystem::path(path).stem().string();
    clip.samples.resize(n_frames);

    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < fmt.channels; ++c) {
            const unsigned char* p = data_ptr + (i * fmt.channels + c) * bytes_per_sample;
            double v;
            if (bytes_per_sample == 2) {
                std::int16_t s = static_cast<std::int16_t>(read_u16(p));
                v = static_cast<double>(s) / 32768.0;
            } else {
                float f;
                std::memcpy(&f, p, 4);
                if (!std::isfinite(f)) throw DecodeError("non-finite float sample in " + path);
                v = std::clamp(static_cast<double>(f), -1.0, 1.0);
            }
            acc += v;
        }
        clip.samples[i] = acc / fmt.channels;
    }
    return clip;
}

void save_wav(const std::string& path, const AudioClip& clip) {
    if (clip.samples.empty()) throw InvalidArgumentError("cannot save empty clip");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);

    const std::uint32_t data_len = static_cast<std::uint32_t>(clip.samples.size() * 2);
    auto put_u32 = [&out](std::uint32_t v) {
        unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff),
                              static_cast<unsigned char>((v >> 16) & 0xff),
                              static_cast<unsigned char>((v >> 24) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 4);
    };
    auto put_u16 = [&out](std::uint16_t v) {
        unsigned char b[2] = {static_cast<unsigned char>(v & 0xff),
                              static_cast<unsigned char>((v >> 8) & 0xff)};
        out.write(reinterpret_cast<const char*>(b), 2);
    };

    out.write("RIFF", 4);
    put_u32(36 + data_len);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    put_u32(16);
    put_u16(kFormatPcm);
    put_u16(1);  // mono
    put_u32(clip.sample_rate);
    put_u32(clip.sample_rate * 2);  // byte rate
    put_u16(2);                     // block align
    put_u16(16);
    out.write("data", 4);
    put_u32(data_len);
    for (double s : clip.samples) {
        double scaled = std::round(std::clamp(s, -1.0, 1.0) * 32768.0);
        auto q = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
        put_u16(static_cast<std::uint16_t>(q));
    }
    if (!out) throw IoError("write failed: " + path);
}

AudioClip resample_linear(const AudioClip& clip, std::uint32_t target_rate) {
    if (target_rate == 0) throw InvalidArgumentError("target_rate must be positive");
    if (target_rate == clip.sample_rate) return clip;

    const std::size_t in_len = clip.samples.size();
    const double ratio = static_cast<double>(target_rate) / clip.sample_rate;
    std::size_t out_len = static_cast<std::size_t>(
        std::llround(static_cast<double>(in_len) * ratio));
    out_len = std::max<std::size_t>(out_len, 1);

    AudioClip out;
    out.sample_rate = target_rate;
    out.clip_id = clip.clip_id;
    out.samples.resize(out_len);

    const double step = static_cast<double>(clip.sample_rate) / target_rate;
    for (std::size_t i = 0; i < out_len; ++i) {
        double pos = i * step;
        auto i0 = static_cast<std::size_t>(pos);
        if (i0 >= in_len - 1) {
            out.samples[i] = clip.samples[in_len - 1];
            continue;
        }
        double t = pos - static_cast<double>(i0);
        out.samples[i] = (1.0 - t) * clip.samples[i0] + t * clip.samples[i0 + 1];
    }
    return out;
}

std::vector<double> hamming_window(std::size_t n) {
    if (n == 0) throw InvalidArgumentError("window length must be >= 1");
    if (n == 1) return {1.0};
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) {
        w[k] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * k / (n - 1));
    }
    return w;
}

std::vector<Frame> frame_signal(const AudioClip& clip, double window_seconds,
                                double hop_seconds) {
    if (window_seconds <= 0.0 || hop_seconds <= 0.0) {
        throw InvalidArgumentError("window and hop must be positive");
    }
    const auto window_len = static_cast<std::size_t>(std::llround(window_seconds * clip.sample_rate));
    const auto hop_len = static_cast<std::size_t>(std::llround(hop_seconds * clip.sample_rate));
    if (window_len == 0 || hop_len == 0) {
        throw InvalidArgumentError("window/hop shorter than one sample at this rate");
    }

    const std::size_t len = clip.samples.size();
    std::vector<Frame> frames;
    for (std::size_t start = 0; start == 0 || start < len; start += hop_len) {
        Frame f;
        f.start_index = start;
        f.values.assign(window_len, 0.0);
        const std::size_t avail = start < len ? std::min(window_len, len - start) : 0;
        std::copy_n(clip.samples.begin() + static_cast<std::ptrdiff_t>(start), avail,
                    f.values.begin());
        frames.push_back(std::move(f));
    }
    return frames;
}

}  // namespace emoaudionet::audio
