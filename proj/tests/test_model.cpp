#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "emoaudionet/errors.hpp"
#include "emoaudionet/model.hpp"
#include "emoaudionet/optim.hpp"
#include "oracles.hpp"

using namespace emoaudionet;
using model::TaskKind;
using nn::Tensor;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng, double scale = 1.0) {
    Tensor t(shape);
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = scale * uniform_pm1(rng);
    return t;
}

}  // namespace

TEST_CASE("paper-size construction: 1152 + 2816 -> 3968") {
    auto net = model::build_model(TaskKind::depression_binary, 128);
    CHECK(net.spec_feature_dim() == 1152);
    CHECK(net.mfcc_feature_dim() == 2816);
    CHECK(net.fused_dim() == 3968);
    CHECK(net.n_classes() == 2);
}

TEST_CASE("flatten sizes scale as 9*width and 22*width") {
    for (std::size_t width : {1, 8, 32}) {
        auto net = model::build_model(TaskKind::arousal, width);
        CHECK(net.spec_feature_dim() == 9 * width);
        CHECK(net.mfcc_feature_dim() == 22 * width);
    }
}

TEST_CASE("task head sizes") {
    CHECK(model::task_classes(TaskKind::depression_binary) == 2);
    CHECK(model::task_classes(TaskKind::depression_severity) == 24);
    CHECK(model::task_classes(TaskKind::arousal) == 10);
    CHECK(model::task_classes(TaskKind::valence) == 10);
    CHECK(model::task_from_name("dep-sev") == TaskKind::depression_severity);
    CHECK_THROWS_AS(model::task_from_name("mood"), InvalidArgumentError);
}

TEST_CASE("invalid architecture parameters are rejected") {
    CHECK_THROWS_AS(model::build_model(TaskKind::arousal, 0), InvalidArgumentError);
    CHECK_THROWS_AS(model::build_model(TaskKind::arousal, 8, 0, 40), InvalidArgumentError);
    CHECK_THROWS_AS(model::build_model(TaskKind::arousal, 8, 32, 0), InvalidArgumentError);
}

TEST_CASE("forward contract on the reduced model") {
    std::mt19937_64 rng(10);
    auto net = model::build_model(TaskKind::depression_binary, 4, 32, 40, 77);
    const Tensor spectro = random_tensor({32, 32, 3}, rng);
    const Tensor mfcc_in = random_tensor({40, 1}, rng);

    SUBCASE("probabilities have head length and sum to one") {
        auto [probs, features] = model::classify(net, spectro, mfcc_in);
        REQUIRE(probs.probs.numel() == 2);
        CHECK(probs.probs[0] + probs.probs[1] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(features.spec_features.numel() == net.spec_feature_dim());
        CHECK(features.mfcc_features.numel() == net.mfcc_feature_dim());
    }
    SUBCASE("zero weights give uniform probabilities for any input") {
        for (auto* p : net.parameters()) {
            std::fill(p->value.values().begin(), p->value.values().end(), 0.0);
        }
        auto [probs, features] = model::classify(net, spectro, mfcc_in);
        CHECK(probs.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(probs.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("different inputs give different stream features") {
        const Tensor spectro2 = random_tensor({32, 32, 3}, rng);
        const Tensor mfcc2 = random_tensor({40, 1}, rng);
        auto a = model::classify(net, spectro, mfcc_in).second;
        auto b = model::classify(net, spectro2, mfcc2).second;
        CHECK(a.spec_features.values() != b.spec_features.values());
        CHECK(a.mfcc_features.values() != b.mfcc_features.values());
    }
    SUBCASE("eval forward is deterministic") {
        auto a = model::classify(net, spectro, mfcc_in).first;
        auto b = model::classify(net, spectro, mfcc_in).first;
        CHECK(a.probs.values() == b.probs.values());
    }
    SUBCASE("mismatched input shape raises") {
        nn::RunContext ctx;
        const Tensor bad = random_tensor({16, 16, 3}, rng);
        CHECK_THROWS_AS(net.forward(bad, mfcc_in, ctx), ShapeError);
    }
}

TEST_CASE("same seed builds identical networks") {
    auto a = model::build_model(TaskKind::valence, 8, 32, 40, 123);
    auto b = model::build_model(TaskKind::valence, 8, 32, 40, 123);
    auto pa = a.parameters(), pb = b.parameters();
    REQUIRE(pa.size() == pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
        CHECK(pa[i]->name == pb[i]->name);
        CHECK(pa[i]->value.values() == pb[i]->value.values());
    }
}

TEST_CASE("one optimizer step updates all three parameter groups") {
    std::mt19937_64 rng(11);
    auto net = model::build_model(TaskKind::depression_binary, 4, 32, 40, 5);
    const Tensor spectro = random_tensor({32, 32, 3}, rng, 0.5);
    const Tensor mfcc_in = random_tensor({40, 1}, rng, 0.5);

    std::vector<std::vector<double>> before;
    for (auto* p : net.parameters()) before.push_back(p->value.values());

    nn::RunContext ctx;
    ctx.mode = nn::Mode::train;
    std::mt19937_64 dropout_rng(99);
    ctx.rng = &dropout_rng;
    auto fwd = net.forward(spectro, mfcc_in, ctx);
    auto xent = nn::softmax_cross_entropy(fwd.logits, 1);
    net.backward(nn::softmax_cross_entropy_backward(xent.probs, 1));
    nn::adam_step(net.parameters(), {});

    auto max_delta = [&before, &net](std::vector<nn::Parameter*> group) {
        auto all = net.parameters();
        double worst = 0.0;
        for (auto* p : group) {
            for (std::size_t i = 0; i < all.size(); ++i) {
                if (all[i] != p) continue;
                for (std::size_t k = 0; k < p->numel(); ++k) {
                    worst = std::max(worst, std::abs(p->value[k] - before[i][k]));
                }
            }
        }
        return worst;
    };
    CHECK(max_delta(net.spectro_parameters()) > 0.0);
    CHECK(max_delta(net.mfcc_parameters()) > 0.0);
    CHECK(max_delta(net.head_parameters()) > 0.0);
}

TEST_CASE("grad_check on the reduced full model stays within 1e-4") {
    std::mt19937_64 rng(12);
    auto net = model::build_model(TaskKind::depression_binary, 8, 32, 40, 21);
    // biased-positive inputs keep most ReLU pre-activations away from zero
    Tensor spectro = random_tensor({32, 32, 3}, rng, 0.4);
    for (auto& v : spectro.values()) v += 0.5;
    Tensor mfcc_in = random_tensor({40, 1}, rng, 0.4);
    for (auto& v : mfcc_in.values()) v += 0.5;

    const auto result = model::grad_check(net, spectro, mfcc_in, 1, 60, 77);
    CHECK(result.evaluated == 60);
    CHECK(result.max_rel_error <= 1e-4);
}

TEST_CASE("predict_label rejects a task mismatch") {
    auto net = model::build_model(TaskKind::depression_binary, 1, 32, 40);
    audio::AudioClip clip;
    clip.sample_rate = 16000;
    clip.samples = oracle::make_sine(300.0, 16000.0, 0.5);
    model::FeatureConfig features;
    CHECK_THROWS_AS(model::predict_label(net, clip, TaskKind::arousal, features), ConfigError);
}
