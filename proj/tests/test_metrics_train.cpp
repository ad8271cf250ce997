#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "emoaudionet/errors.hpp"
#include "emoaudionet/metrics.hpp"
#include "emoaudionet/train.hpp"
#include "oracles.hpp"

using namespace emoaudionet;
using model::TaskKind;
using nn::Tensor;

namespace {

/// Expands confusion counts (rows = predicted, cols = actual) into sequences.
void expand_confusion(const std::vector<std::vector<std::uint64_t>>& conf,
                      std::vector<std::size_t>& predicted, std::vector<std::size_t>& actual) {
    for (std::size_t p = 0; p < conf.size(); ++p) {
        for (std::size_t a = 0; a < conf[p].size(); ++a) {
            for (std::uint64_t k = 0; k < conf[p][a]; ++k) {
                predicted.push_back(p);
                actual.push_back(a);
            }
        }
    }
}

Tensor random_tensor(std::vector<std::size_t> shape, std::mt19937_64& rng, double scale = 1.0) {
    Tensor t(shape);
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = scale * uniform_pm1(rng);
    return t;
}

std::vector<train::LabeledExample> tiny_examples(std::size_t count, std::size_t classes,
                                                 std::mt19937_64& rng) {
    std::vector<train::LabeledExample> out;
    for (std::size_t i = 0; i < count; ++i) {
        train::LabeledExample ex;
        ex.clip_id = "ex" + std::to_string(i);
        ex.label = i % classes;
        ex.spectro = random_tensor({16, 16, 3}, rng, 0.5);
        ex.mfcc = random_tensor({40, 1}, rng, 0.5);
        // nudge the two streams apart by label so the task is learnable
        for (auto& v : ex.mfcc.values()) v += static_cast<double>(ex.label);
        out.push_back(std::move(ex));
    }
    return out;
}

}  // namespace

TEST_CASE("bin_labels") {
    SUBCASE("arousal bins are right-open with 1.0 in the top bin") {
        const auto b = train::bin_labels({-1.0, 1.0, 0.0, -0.31, 0.99}, TaskKind::arousal);
        CHECK(b.classes == std::vector<std::size_t>{0, 9, 5, 3, 9});
        CHECK(b.bin_centers[3] == doctest::Approx(-0.3).epsilon(1e-12));
        CHECK(b.bin_centers[0] == doctest::Approx(-0.9).epsilon(1e-12));
    }
    SUBCASE("severity is the identity on 0..23") {
        const auto b = train::bin_labels({0.0, 23.0, 12.0}, TaskKind::depression_severity);
        CHECK(b.classes == std::vector<std::size_t>{0, 23, 12});
        CHECK(b.bin_centers[23] == 23.0);
    }
    SUBCASE("out-of-range values raise") {
        CHECK_THROWS_AS(train::bin_labels({1.5}, TaskKind::valence), RangeError);
        CHECK_THROWS_AS(train::bin_labels({24.0}, TaskKind::depression_severity), RangeError);
        CHECK_THROWS_AS(train::bin_labels({0.5}, TaskKind::depression_binary), RangeError);
    }
}

TEST_CASE("compute_metrics reproduces the published confusion arithmetic") {
    const std::vector<std::vector<std::uint64_t>> conf = {{1441, 354}, {283, 303}};
    std::vector<std::size_t> predicted, actual;
    expand_confusion(conf, predicted, actual);

    const auto centers = train::task_bin_centers(TaskKind::depression_binary);
    const auto report =
        train::compute_metrics(predicted, actual, centers, TaskKind::depression_binary);

    CHECK(report.confusion == conf);
    CHECK(report.accuracy * 100.0 == doctest::Approx(73.25).epsilon(0.0002));
    CHECK(report.per_class[1].precision * 100.0 == doctest::Approx(51.71).epsilon(0.0002));
    CHECK(report.per_class[1].recall * 100.0 == doctest::Approx(46.12).epsilon(0.0002));
    CHECK(report.per_class[1].f1 * 100.0 == doctest::Approx(49.0).epsilon(0.011));
    CHECK(report.per_class[0].f1 * 100.0 == doctest::Approx(82.0).epsilon(0.005));
}

TEST_CASE("compute_metrics basic contracts") {
    const auto centers = train::task_bin_centers(TaskKind::arousal);

    SUBCASE("perfect prediction") {
        const std::vector<std::size_t> ys = {0, 3, 9, 5, 2, 7};
        const auto r = train::compute_metrics(ys, ys, centers, TaskKind::arousal);
        CHECK(r.accuracy == 1.0);
        CHECK(r.pcc_defined);
        CHECK(r.pcc == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(r.rmse == 0.0);
        CHECK(r.nrmse == 0.0);
    }
    SUBCASE("constant predictions leave PCC undefined, not zero") {
        const std::vector<std::size_t> pred(5, 4), act = {0, 1, 2, 3, 4};
        const auto r = train::compute_metrics(pred, act, centers, TaskKind::arousal);
        CHECK_FALSE(r.pcc_defined);
        CHECK(std::isnan(r.pcc));
        const auto j = r.to_json();
        CHECK(j.at("pcc").is_null());
    }
    SUBCASE("length mismatch and empty input raise") {
        CHECK_THROWS_AS(train::compute_metrics({1}, {1, 2}, centers, TaskKind::arousal),
                        InvalidArgumentError);
        CHECK_THROWS_AS(train::compute_metrics({}, {}, centers, TaskKind::arousal),
                        InvalidArgumentError);
    }
    SUBCASE("accuracy equals confusion trace over total") {
        std::mt19937_64 rng(13);
        std::vector<std::size_t> pred, act;
        for (int i = 0; i < 500; ++i) {
            pred.push_back(uniform_below(rng, 10));
            act.push_back(uniform_below(rng, 10));
        }
        const auto r = train::compute_metrics(pred, act, centers, TaskKind::arousal);
        std::uint64_t trace = 0, total = 0;
        for (std::size_t c = 0; c < 10; ++c) {
            trace += r.confusion[c][c];
            for (std::size_t k = 0; k < 10; ++k) total += r.confusion[c][k];
        }
        CHECK(total == 500);
        CHECK(r.accuracy == doctest::Approx(static_cast<double>(trace) / 500.0).epsilon(1e-12));
    }
    SUBCASE("F1 is the harmonic mean re-derivable from the confusion matrix") {
        std::mt19937_64 rng(14);
        std::vector<std::size_t> pred, act;
        for (int i = 0; i < 300; ++i) {
            pred.push_back(uniform_below(rng, 4));
            act.push_back(uniform_below(rng, 4));
        }
        const auto centers2 = train::task_bin_centers(TaskKind::arousal);
        const auto r = train::compute_metrics(pred, act, centers2, TaskKind::arousal);
        for (std::size_t c = 0; c < 10; ++c) {
            std::uint64_t row = 0, col = 0;
            for (std::size_t k = 0; k < 10; ++k) {
                row += r.confusion[c][k];
                col += r.confusion[k][c];
            }
            if (row == 0 || col == 0) continue;
            const double p = static_cast<double>(r.confusion[c][c]) / static_cast<double>(row);
            const double q = static_cast<double>(r.confusion[c][c]) / static_cast<double>(col);
            const double f1 = p + q > 0 ? 2 * p * q / (p + q) : 0.0;
            CHECK(r.per_class[c].f1 == doctest::Approx(f1).epsilon(1e-12));
        }
    }
    SUBCASE("PCC matches the reference and is affine invariant") {
        std::mt19937_64 rng(15);
        std::vector<std::size_t> pred, act;
        for (int i = 0; i < 200; ++i) {
            pred.push_back(uniform_below(rng, 10));
            act.push_back((pred.back() + uniform_below(rng, 3)) % 10);
        }
        const auto r = train::compute_metrics(pred, act, centers, TaskKind::arousal);
        std::vector<double> pv, av;
        for (std::size_t i = 0; i < pred.size(); ++i) {
            pv.push_back(centers[pred[i]]);
            av.push_back(centers[act[i]]);
        }
        REQUIRE(r.pcc_defined);
        CHECK(r.pcc == doctest::Approx(oracle::pearson_ref(pv, av)).epsilon(1e-12));

        // positive affine transform of either argument leaves PCC unchanged
        std::vector<double> pv2 = pv;
        for (auto& v : pv2) v = 3.7 * v + 11.0;
        CHECK(oracle::pearson_ref(pv2, av) == doctest::Approx(r.pcc).epsilon(1e-9));
    }
    SUBCASE("nRMSE divides by the task range") {
        const std::vector<std::size_t> pred = {0, 10, 23}, act = {5, 10, 20};
        const auto c = train::task_bin_centers(TaskKind::depression_severity);
        const auto r = train::compute_metrics(pred, act, c, TaskKind::depression_severity);
        CHECK(r.nrmse == doctest::Approx(r.rmse / 23.0).epsilon(1e-12));
    }
    SUBCASE("expected-value mode uses probability-weighted centers") {
        const std::vector<std::size_t> pred = {0}, act = {1};
        std::vector<std::vector<double>> probs = {{0.0, 0.5, 0.5, 0, 0, 0, 0, 0, 0, 0}};
        const auto r = train::compute_metrics(pred, act, centers, TaskKind::arousal, probs, true);
        // expected value = 0.5*(-0.7) + 0.5*(-0.5) = -0.6; actual center = -0.7
        CHECK(r.rmse == doctest::Approx(0.1).epsilon(1e-9));
    }
}

TEST_CASE("metrics report JSON round trip") {
    const std::vector<std::size_t> pred = {0, 1, 1, 0}, act = {0, 1, 0, 0};
    const auto centers = train::task_bin_centers(TaskKind::depression_binary);
    const auto r = train::compute_metrics(pred, act, centers, TaskKind::depression_binary);
    const auto j = r.to_json();
    CHECK(j.contains("accuracy"));
    CHECK(j.contains("per_class"));
    CHECK(j.at("per_class").size() == 2);
    const auto back = train::MetricsReport::from_json(j);
    CHECK(back.accuracy == r.accuracy);
    CHECK(back.confusion == r.confusion);
    CHECK(back.to_json() == j);
}

TEST_CASE("train_model contracts at desk scale") {
    std::mt19937_64 rng(16);

    SUBCASE("loss decreases over the first epochs when overfitting one example") {
        auto examples = tiny_examples(1, 2, rng);
        auto net = model::build_model(TaskKind::depression_binary, 8, 16, 40, 3);
        train::TrainConfig config;
        config.max_epochs = 12;
        config.early_stop_patience = 50;
        config.learning_rate = 1e-2;  // steps large enough to dominate dropout noise
        config.seed = 5;
        config.width = 8;
        const auto result = train::train_model(net, examples, examples, config);
        REQUIRE(result.history.size() >= 10);
        for (std::size_t i = 1; i < 10; ++i) {
            CHECK(result.history[i].train_loss < result.history[i - 1].train_loss);
        }
    }

    SUBCASE("constant dev accuracy halts after exactly the patience window") {
        auto examples = tiny_examples(4, 2, rng);
        auto net = model::build_model(TaskKind::depression_binary, 2, 16, 40, 3);
        train::TrainConfig config;
        config.max_epochs = 100;
        config.early_stop_patience = 10;
        config.learning_rate = 1e-300;  // updates are numerically invisible
        config.seed = 5;
        const auto result = train::train_model(net, examples, examples, config);
        CHECK(result.stopped_epoch == 11);  // epoch 1 sets the baseline, then 10 flat
        CHECK(result.best_epoch == 1);
    }

    SUBCASE("empty splits are rejected") {
        auto examples = tiny_examples(2, 2, rng);
        auto net = model::build_model(TaskKind::depression_binary, 2, 16, 40, 3);
        CHECK_THROWS_AS(train::train_model(net, {}, examples, {}), InvalidArgumentError);
        CHECK_THROWS_AS(train::train_model(net, examples, {}, {}), InvalidArgumentError);
    }

    SUBCASE("a poisoned parameter surfaces as a numeric error with context") {
        auto examples = tiny_examples(2, 2, rng);
        auto net = model::build_model(TaskKind::depression_binary, 2, 16, 40, 3);
        net.parameters()[0]->value[0] = std::nan("");
        train::TrainConfig config;
        config.max_epochs = 3;
        try {
            train::train_model(net, examples, examples, config);
            FAIL("expected NumericError");
        } catch (const NumericError& e) {
            CHECK(std::string(e.what()).find("epoch 1") != std::string::npos);
        }
    }

    SUBCASE("returned checkpoint is the best dev accuracy seen") {
        auto examples = tiny_examples(6, 2, rng);
        auto net = model::build_model(TaskKind::depression_binary, 4, 16, 40, 9);
        train::TrainConfig config;
        config.max_epochs = 15;
        config.early_stop_patience = 15;
        config.learning_rate = 1e-3;
        config.seed = 2;
        const auto result = train::train_model(net, examples, examples, config);
        double best_seen = 0.0;
        for (const auto& rec : result.history) best_seen = std::max(best_seen, rec.dev_accuracy);
        CHECK(result.best_dev_accuracy == best_seen);
        CHECK(train::evaluate_accuracy(net, examples) ==
              doctest::Approx(best_seen).epsilon(1e-12));
    }

    SUBCASE("learning rate halves after the loss plateaus") {
        auto examples = tiny_examples(2, 2, rng);
        auto net = model::build_model(TaskKind::depression_binary, 2, 16, 40, 3);
        // all-zero parameters pin the loss at exactly ln(2) every epoch,
        // regardless of dropout masks, and keep updates numerically invisible
        for (auto* p : net.parameters()) {
            std::fill(p->value.values().begin(), p->value.values().end(), 0.0);
        }
        train::TrainConfig config;
        config.max_epochs = 14;
        config.early_stop_patience = 100;
        config.learning_rate = 1e-300;
        config.lr_reduce.patience = 5;
        config.lr_reduce.floor = 1e-301;
        const auto result = train::train_model(net, examples, examples, config);
        REQUIRE(result.history.size() == 14);
        CHECK(result.history.front().learning_rate == 1e-300);
        // plateau from epoch 2; the first reduction lands before epoch 8
        CHECK(result.history[6].learning_rate == doctest::Approx(0.5e-300));
        CHECK(result.history.back().learning_rate < 1e-300);
    }
}

TEST_CASE("history CSV layout") {
    std::vector<train::EpochRecord> history = {{1, 0.5, 0.25, 1e-5}, {2, 0.4, 0.5, 1e-5}};
    const auto csv = train::history_csv(history);
    CHECK(csv.find("epoch,train_loss,dev_accuracy,lr\n") == 0);
    CHECK(csv.find("1,0.5,0.25,1.0000000000000001e-05") != std::string::npos);
}
