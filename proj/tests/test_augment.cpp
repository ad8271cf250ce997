#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "emoaudionet/augment.hpp"
#include "emoaudionet/dsp.hpp"
#include "emoaudionet/errors.hpp"
#include "oracles.hpp"

using namespace emoaudionet;

namespace {

audio::AudioClip sine_clip(double freq, double seconds = 2.0, std::uint32_t rate = 16000) {
    audio::AudioClip clip;
    clip.sample_rate = rate;
    clip.clip_id = "sine";
    clip.samples = oracle::make_sine(freq, rate, seconds);
    return clip;
}

double rms(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double v : xs) acc += v * v;
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

}  // namespace

TEST_CASE("add_noise") {
    auto clip = sine_clip(440.0, 0.5);

    SUBCASE("alpha = 0 is the identity") {
        const auto out = augment::add_noise(clip, 0.0, 123);
        CHECK(out.samples == clip.samples);
    }
    SUBCASE("zero signal stays within the alpha bound") {
        audio::AudioClip silent;
        silent.sample_rate = 16000;
        silent.samples.assign(8000, 0.0);
        const auto out = augment::add_noise(silent, 0.03, 7);
        for (double v : out.samples) CHECK(std::abs(v) <= 0.03);
    }
    SUBCASE("seed reproducibility") {
        const auto a = augment::add_noise(clip, 0.02, 99);
        const auto b = augment::add_noise(clip, 0.02, 99);
        const auto c = augment::add_noise(clip, 0.02, 100);
        CHECK(a.samples == b.samples);
        CHECK(a.samples != c.samples);
    }
    SUBCASE("negative alpha is rejected") {
        CHECK_THROWS_AS(augment::add_noise(clip, -0.01, 1), InvalidArgumentError);
    }
    SUBCASE("RMS increase is bounded by alpha") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            audio::AudioClip c;
            c.sample_rate = 16000;
            c.samples = oracle::random_vector(4000, rng, 0.7);
            const double alpha = 0.05 * uniform01(rng);
            const auto out = augment::add_noise(c, alpha, trial);
            CHECK(rms(out.samples) <= rms(c.samples) + alpha + 1e-12);
        }
    }
}

TEST_CASE("pitch_shift") {
    SUBCASE("zero semitones returns the clip unchanged") {
        const auto clip = sine_clip(440.0);
        const auto out = augment::pitch_shift(clip, 0.0);
        CHECK(out.samples == clip.samples);
    }
    SUBCASE("negative shift is rejected") {
        CHECK_THROWS_AS(augment::pitch_shift(sine_clip(440.0), -1.0), InvalidArgumentError);
    }
    SUBCASE("peak frequency scales by 2^(-s/12)") {
        for (double s : {0.5, 2.0, 5.0, 12.0}) {
            const auto clip = sine_clip(440.0);
            const auto out = augment::pitch_shift(clip, s);
            const double expected = 440.0 * std::pow(2.0, -s / 12.0);
            const double peak = dsp::dominant_frequency_hz(out.samples, 16000.0);
            CHECK(std::abs(peak - expected) <= 0.02 * expected);
            // duration restored exactly
            CHECK(out.samples.size() == clip.samples.size());
            CHECK(out.sample_rate == clip.sample_rate);
        }
    }
}

TEST_CASE("augment_corpus") {
    std::vector<audio::AudioClip> clips;
    for (int i = 0; i < 10; ++i) {
        auto c = sine_clip(200.0 + 40.0 * i, 0.25);
        c.clip_id = "clip" + std::to_string(i);
        clips.push_back(std::move(c));
    }
    augment::AugmentSpec spec;
    spec.seed = 42;

    SUBCASE("default spec multiplies the corpus by 7") {
        const auto out = augment::augment_corpus(clips, spec);
        CHECK(out.size() == 70);
    }
    SUBCASE("empty factor lists keep only the originals") {
        augment::AugmentSpec none;
        none.noise_factors.clear();
        none.pitch_semitones.clear();
        const auto out = augment::augment_corpus(clips, none);
        REQUIRE(out.size() == clips.size());
        for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i].samples == clips[i].samples);
    }
    SUBCASE("same spec twice gives element-wise identical corpora") {
        const auto a = augment::augment_corpus(clips, spec);
        const auto b = augment::augment_corpus(clips, spec);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].clip_id == b[i].clip_id);
            CHECK(a[i].samples == b[i].samples);
        }
    }
    SUBCASE("copies carry provenance ids") {
        const auto out = augment::augment_corpus(clips, spec);
        CHECK(out[0].clip_id == "clip0");
        CHECK(out[1].clip_id == "clip0__noise0.01");
        CHECK(out[3].clip_id == "clip0__noise0.03");
        CHECK(out[4].clip_id == "clip0__pitch0.5");
        CHECK(out[6].clip_id == "clip0__pitch5");
    }
    SUBCASE("empty input is rejected") {
        CHECK_THROWS_AS(augment::augment_corpus({}, spec), InvalidArgumentError);
    }
    SUBCASE("rate and duration are preserved") {
        const auto out = augment::augment_corpus(clips, spec);
        for (const auto& c : out) {
            CHECK(c.sample_rate == 16000);
            CHECK(std::abs(static_cast<double>(c.samples.size()) -
                           static_cast<double>(clips[0].samples.size())) <=
                  0.02 * static_cast<double>(clips[0].samples.size()));
        }
    }
}
