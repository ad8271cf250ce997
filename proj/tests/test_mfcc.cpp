#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "emoaudionet/audio.hpp"
#include "emoaudionet/dsp.hpp"
#include "emoaudionet/errors.hpp"
#include "emoaudionet/mfcc.hpp"
#include "oracles.hpp"

using namespace emoaudionet;

TEST_CASE("power_spectrum matches the naive DFT oracle") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t len = 3 + uniform_below(rng, 510);
        audio::Frame frame;
        frame.values = oracle::random_vector(len, rng);

        auto padded = frame.values;
        padded.resize(oracle::pow2_at_least(len), 0.0);
        const auto expected = oracle::naive_dft_power(padded);

        const auto got = mfcc::power_spectrum(frame);
        REQUIRE(got.size() == expected.size());
        for (std::size_t k = 0; k < got.size(); ++k) {
            CHECK(std::abs(got[k] - expected[k]) <= 1e-9);
        }
    }
}

TEST_CASE("power_spectrum closed forms") {
    SUBCASE("all-zero frame") {
        audio::Frame frame;
        frame.values.assign(64, 0.0);
        for (double v : mfcc::power_spectrum(frame)) CHECK(v == 0.0);
    }
    SUBCASE("unit impulse at t=0, n=8 is flat at 1") {
        audio::Frame frame;
        frame.values.assign(8, 0.0);
        frame.values[0] = 1.0;
        const auto power = mfcc::power_spectrum(frame);
        REQUIRE(power.size() == 5);
        for (double v : power) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("pure cosine at bin 3, n=64, rectangular window") {
        audio::Frame frame;
        frame.values.resize(64);
        for (std::size_t t = 0; t < 64; ++t) {
            frame.values[t] = std::cos(2.0 * std::numbers::pi * 3.0 * t / 64.0);
        }
        const auto power = mfcc::power_spectrum(frame);
        CHECK(power[3] == doctest::Approx(1024.0).epsilon(1e-9));  // (n/2)^2
        double rest = 0.0;
        for (std::size_t k = 0; k < power.size(); ++k) {
            if (k != 3) rest += power[k];
        }
        CHECK(rest <= 1e-9);
    }
}

TEST_CASE("mel scale formula") {
    CHECK(mfcc::hz_to_mel(0.0) == 0.0);
    CHECK(mfcc::hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK(mfcc::hz_to_mel(700.0) == doctest::Approx(781.17).epsilon(1e-4));
    CHECK(mfcc::mel_to_hz(mfcc::hz_to_mel(1234.5)) == doctest::Approx(1234.5).epsilon(1e-9));
}

TEST_CASE("mel filterbank shape and triangles") {
    const auto bank = mfcc::build_mel_filterbank(24, 257, 16000);
    REQUIRE(bank.size() == 24);
    for (const auto& row : bank) {
        REQUIRE(row.size() == 257);
        double sum = 0.0;
        for (double v : row) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum > 0.0);
        // unimodal: rises to a single peak then falls
        std::size_t peak = 0;
        for (std::size_t k = 1; k < row.size(); ++k) {
            if (row[k] > row[peak]) peak = k;
        }
        for (std::size_t k = 1; k <= peak; ++k) CHECK(row[k] >= row[k - 1] - 1e-12);
        for (std::size_t k = peak + 1; k < row.size(); ++k) CHECK(row[k] <= row[k - 1] + 1e-12);
    }
    CHECK_THROWS_AS(mfcc::build_mel_filterbank(24, 25, 16000), InvalidArgumentError);
    CHECK_THROWS_AS(mfcc::build_mel_filterbank(1, 257, 16000), InvalidArgumentError);
}

TEST_CASE("orthonormal DCT-II/III round trip") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 1 + uniform_below(rng, 64);
        const auto y = oracle::random_vector(m, rng, 3.0);
        const auto back = dsp::dct3_ortho(dsp::dct2_ortho(y));
        for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(back[i] - y[i]) <= 1e-9);
    }
}

namespace {

audio::Frame windowed_random_frame(std::size_t len, std::mt19937_64& rng) {
    audio::Frame f;
    f.values = oracle::random_vector(len, rng);
    const auto w = audio::hamming_window(len);
    for (std::size_t i = 0; i < len; ++i) f.values[i] *= w[i];
    return f;
}

}  // namespace

TEST_CASE("compute_mfcc_frame") {
    mfcc::MfccConfig config;
    std::mt19937_64 rng(4);

    SUBCASE("inverse DCT of the full coefficient set recovers the log-mel energies") {
        const auto frame = windowed_random_frame(400, rng);
        const auto power = mfcc::power_spectrum(frame);
        const auto bank = mfcc::build_mel_filterbank(config.mel_filters, power.size(), 16000);

        std::vector<double> log_mel(bank.size());
        for (std::size_t i = 0; i < bank.size(); ++i) {
            double e = 0.0;
            for (std::size_t k = 0; k < power.size(); ++k) e += bank[i][k] * power[k];
            log_mel[i] = std::log(e + 1e-10);
        }

        const auto cepstra = mfcc::compute_mfcc_frame(frame, config, bank);
        REQUIRE(cepstra.size() == config.mel_filters);  // default keeps all bands
        const auto back = dsp::dct3_ortho(cepstra);
        for (std::size_t i = 0; i < log_mel.size(); ++i) {
            CHECK(std::abs(back[i] - log_mel[i]) <= 1e-9);
        }
    }

    SUBCASE("global gain moves only coefficient zero") {
        const auto frame = windowed_random_frame(512, rng);
        const double gain = 3.7;
        audio::Frame scaled = frame;
        for (double& v : scaled.values) v *= gain;

        const auto power = mfcc::power_spectrum(frame);
        const auto bank = mfcc::build_mel_filterbank(config.mel_filters, power.size(), 16000);
        const auto base = mfcc::compute_mfcc_frame(frame, config, bank);
        const auto boosted = mfcc::compute_mfcc_frame(scaled, config, bank);

        const double m = static_cast<double>(config.mel_filters);
        const double expected_c0_shift = std::sqrt(m) * 2.0 * std::log(gain);
        CHECK(boosted[0] - base[0] == doctest::Approx(expected_c0_shift).epsilon(1e-6));
        for (std::size_t i = 1; i < base.size(); ++i) {
            CHECK(std::abs(boosted[i] - base[i]) <= 1e-6);
        }
    }

    SUBCASE("all-zero frame leaves only c0 nonzero") {
        audio::Frame frame;
        frame.values.assign(256, 0.0);
        const auto bank = mfcc::build_mel_filterbank(config.mel_filters, 129, 16000);
        const auto cepstra = mfcc::compute_mfcc_frame(frame, config, bank);
        for (std::size_t i = 1; i < cepstra.size(); ++i) CHECK(std::abs(cepstra[i]) <= 1e-12);
        CHECK(cepstra[0] == doctest::Approx(std::sqrt(24.0) * std::log(1e-10)).epsilon(1e-9));
    }
}

TEST_CASE("assemble_mfcc_input") {
    mfcc::MfccConfig config;
    std::mt19937_64 rng(21);

    SUBCASE("long clip yields exactly 177 values, the prefix of the concatenation") {
        audio::AudioClip clip;
        clip.sample_rate = 16000;
        clip.clip_id = "long";
        clip.samples = oracle::random_vector(16000 * 6, rng, 0.8);  // 12 frames
        const auto input = mfcc::assemble_mfcc_input(clip, config);
        REQUIRE(input.values.size() == 177);

        // recompute frame 0 independently and compare the first 24 values
        auto frames = audio::frame_signal(clip, config.window_seconds, config.hop_seconds);
        const auto w = audio::hamming_window(frames[0].values.size());
        for (std::size_t i = 0; i < frames[0].values.size(); ++i) frames[0].values[i] *= w[i];
        const auto bank = mfcc::build_mel_filterbank(
            config.mel_filters, dsp::next_pow2(frames[0].values.size()) / 2 + 1, 16000);
        const auto cep0 = mfcc::compute_mfcc_frame(frames[0], config, bank);
        for (std::size_t i = 0; i < cep0.size(); ++i) CHECK(input.values[i] == cep0[i]);
    }

    SUBCASE("single-frame clip pads with zeros after 24 coefficients") {
        audio::AudioClip clip;
        clip.sample_rate = 16000;
        clip.clip_id = "short";
        clip.samples = oracle::random_vector(4000, rng, 0.5);  // 0.25 s -> one frame
        const auto input = mfcc::assemble_mfcc_input(clip, config);
        REQUIRE(input.values.size() == 177);
        bool head_nonzero = false;
        for (std::size_t i = 0; i < 24; ++i) head_nonzero |= input.values[i] != 0.0;
        CHECK(head_nonzero);
        for (std::size_t i = 24; i < 177; ++i) CHECK(input.values[i] == 0.0);
    }

    SUBCASE("bit-identical across runs") {
        audio::AudioClip clip;
        clip.sample_rate = 16000;
        clip.clip_id = "det";
        clip.samples = oracle::random_vector(16000 * 3, rng, 0.7);
        const auto a = mfcc::assemble_mfcc_input(clip, config);
        const auto b = mfcc::assemble_mfcc_input(clip, config);
        CHECK(a.values == b.values);
    }

    SUBCASE("empty clip is rejected") {
        audio::AudioClip clip;
        clip.sample_rate = 16000;
        CHECK_THROWS_AS(mfcc::assemble_mfcc_input(clip, config), InvalidArgumentError);
    }
}
