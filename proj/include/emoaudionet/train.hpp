#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emoaudionet/model.hpp"
#include "emoaudionet/tensor.hpp"

namespace emoaudionet::train {

struct LrReduceConfig {
    double factor = 0.5;
    std::size_t patience = 5;  // epochs without train-loss improvement
    double floor = 1e-7;
};

struct TrainConfig {
    double learning_rate = 1e-5;
    std::size_t batch_size = 100;
    std::size_t max_epochs = 500;
    std::size_t early_stop_patience = 10;  // epochs, monitored on dev accuracy
    LrReduceConfig lr_reduce;
    std::uint64_t seed = 0;
    std::size_t width = 128;
};

struct LabeledExample {
    std::string clip_id;
    nn::Tensor spectro;  // [S x S x 3]
    nn::Tensor mfcc;     // [D x 1]
    std::size_t label = 0;
    double raw_label = 0.0;  // original arousal/valence value or PHQ-8 score
};

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double dev_accuracy = 0.0;
    double learning_rate = 0.0;
};

struct TrainResult {
    std::vector<EpochRecord> history;
    double best_dev_accuracy = 0.0;
    std::size_t best_epoch = 0;
    std::size_t stopped_epoch = 0;
};

/// Joint training: per batch, forward both streams, fuse, cross-entropy,
/// backward, one ADAM step over all three parameter groups. Stops when dev
/// accuracy has not improved for `early_stop_patience` epochs or at
/// max_epochs; the model is left holding the best-dev-accuracy snapshot
/// (parameters and optimizer state).
TrainResult train_model(model::TwoStreamModel& model, const std::vector<LabeledExample>& train,
                        const std::vector<LabeledExample>& dev, const TrainConfig& config);

/// Eval-mode class predictions for every example.
std::vector<model::ClassProbs> predict_all(model::TwoStreamModel& model,
                                           const std::vector<LabeledExample>& examples);

double evaluate_accuracy(model::TwoStreamModel& model,
                         const std::vector<LabeledExample>& examples);

std::string history_csv(const std::vector<EpochRecord>& history);

}  // namespace emoaudionet::train
