#include "emoaudionet/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "emoaudionet/errors.hpp"
#include "emoaudionet/optim.hpp"
#include "emoaudionet/rng.hpp"

namespace emoaudionet::train {

namespace {

/// Parameter values + optimizer state, captured at the best dev epoch.
struct Snapshot {
    std::vector<std::vector<double>> values, m, v;
    std::vector<std::uint64_t> steps;
};

Snapshot take_snapshot(const std::vector<nn::Parameter*>& params) {
    Snapshot s;
    for (const auto* p : params) {
        s.values.push_back(p->value.values());
        s.m.push_back(p->adam_m);
        s.v.push_back(p->adam_v);
        s.steps.push_back(p->step_count);
    }
    return s;
}

void restore_snapshot(const Snapshot& s, const std::vector<nn::Parameter*>& params) {
    for (std::size_t i = 0; i < params.size(); ++i) {
        params[i]->value.values() = s.values[i];
        params[i]->adam_m = s.m[i];
        params[i]->adam_v = s.v[i];
        params[i]->step_count = s.steps[i];
    }
}

void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = uniform_below(rng, i);
        std::swap(idx[i - 1], idx[j]);
    }
}

}  // namespace

TrainResult train_model(model::TwoStreamModel& net, const std::vector<LabeledExample>& train,
                        const std::vector<LabeledExample>& dev, const TrainConfig& config) {
    if (train.empty() || dev.empty()) {
        throw InvalidArgumentError("train and dev splits must be non-empty");
    }
    const std::size_t n_classes = net.n_classes();
    for (const auto& ex : train) {
        if (ex.label >= n_classes) {
            throw InvalidArgumentError("label " + std::to_string(ex.label) +
                                       " out of range for task (clip " + ex.clip_id + ")");
        }
    }

    auto params = net.parameters();
    nn::AdamConfig adam;
    adam.learning_rate = config.learning_rate;

    TrainResult result;
    Snapshot best = take_snapshot(params);
    double best_dev = -1.0;
    double best_loss = std::numeric_limits<double>::infinity();
    std::size_t epochs_since_dev_improvement = 0;
    std::size_t epochs_since_loss_improvement = 0;

    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::mt19937_64 shuffle_rng(derive_seed(config.seed, "shuffle", epoch));
        shuffle_indices(order, shuffle_rng);

        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(start + config.batch_size, order.size());
            const double batch_n = static_cast<double>(end - start);
            std::mt19937_64 dropout_rng(
                derive_seed(config.seed, "dropout", (epoch << 20) | n_batches));

            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const auto& ex = train[order[i]];
                try {
                    nn::RunContext ctx;
                    ctx.mode = nn::Mode::train;
                    ctx.record = true;
                    ctx.rng = &dropout_rng;
                    auto fwd = net.forward(ex.spectro, ex.mfcc, ctx);
                    auto xent = nn::softmax_cross_entropy(fwd.logits, ex.label);
                    if (!std::isfinite(xent.loss)) throw NumericError("non-finite loss");
                    batch_loss += xent.loss;
                    auto grad = nn::softmax_cross_entropy_backward(xent.probs, ex.label);
                    for (auto& g : grad.values()) g /= batch_n;  // mean-loss gradient
                    net.backward(grad);
                } catch (const NumericError& e) {
                    throw NumericError(std::string(e.what()) + " (epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(n_batches) + ", clip " + ex.clip_id + ")");
                }
            }
            adam_step(params, adam);
            epoch_loss += batch_loss / batch_n;
            ++n_batches;
        }
        epoch_loss /= static_cast<double>(n_batches);

        const double dev_acc = evaluate_accuracy(net, dev);
        result.history.push_back({epoch, epoch_loss, dev_acc, adam.learning_rate});

        if (dev_acc > best_dev) {
            best_dev = dev_acc;
            best = take_snapshot(params);
            result.best_epoch = epoch;
            epochs_since_dev_improvement = 0;
        } else {
            ++epochs_since_dev_improvement;
        }

        if (epoch_loss < best_loss) {
            best_loss = epoch_loss;
            epochs_since_loss_improvement = 0;
        } else {
            ++epochs_since_loss_improvement;
            if (epochs_since_loss_improvement >= config.lr_reduce.patience) {
                adam.learning_rate =
                    std::max(adam.learning_rate * config.lr_reduce.factor, config.lr_reduce.floor);
                epochs_since_loss_improvement = 0;
            }
        }

        result.stopped_epoch = epoch;
        if (epochs_since_dev_improvement >= config.early_stop_patience) break;
    }

    restore_snapshot(best, params);
    result.best_dev_accuracy = best_dev;
    return result;
}

std::vector<model::ClassProbs> predict_all(model::TwoStreamModel& net,
                                           const std::vector<LabeledExample>& examples) {
    std::vector<model::ClassProbs> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) {
        out.push_back(model::classify(net, ex.spectro, ex.mfcc).first);
    }
    return out;
}

double evaluate_accuracy(model::TwoStreamModel& net, const std::vector<LabeledExample>& examples) {
    if (examples.empty()) throw InvalidArgumentError("cannot evaluate zero examples");
    std::size_t correct = 0;
    for (const auto& ex : examples) {
        const auto probs = model::classify(net, ex.spectro, ex.mfcc).first;
        correct += probs.predicted_class == ex.label;
    }
    return static_cast<double>(correct) / static_cast<double>(examples.size());
}

std::string history_csv(const std::vector<EpochRecord>& history) {
    std::ostringstream os;
    os << "epoch,train_loss,dev_accuracy,lr\n";
    os.precision(17);
    for (const auto& r : history) {
        os << r.epoch << ',' << r.train_loss << ',' << r.dev_accuracy << ',' << r.learning_rate
           << '\n';
    }
    return os.str();
}

}  // namespace emoaudionet::train
