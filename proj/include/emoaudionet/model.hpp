#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "emoaudionet/audio.hpp"
#include "emoaudionet/layers.hpp"
#include "emoaudionet/mfcc.hpp"
#include "emoaudionet/spectrogram.hpp"
#include "emoaudionet/tensor.hpp"

namespace emoaudionet::model {

enum class TaskKind { depression_binary, depression_severity, arousal, valence };

std::size_t task_classes(TaskKind task);        // 2, 24, 10, 10
std::string task_name(TaskKind task);           // dep-bin, dep-sev, arousal, valence
TaskKind task_from_name(const std::string& name);

struct ModelConfig {
    TaskKind task = TaskKind::depression_binary;
    std::size_t width = 128;        // channels of every conv layer
    std::size_t spectro_size = 224; // square input image edge
    std::size_t mfcc_dim = 177;
    std::uint64_t init_seed = 0;
};

/// Feature-extraction settings shared by training and inference.
struct FeatureConfig {
    std::uint32_t sample_rate = 16000;
    mfcc::MfccConfig mfcc;
};

struct StreamFeatures {
    nn::Tensor spec_features;
    nn::Tensor mfcc_features;
};

struct ClassProbs {
    nn::Tensor probs;
    std::size_t predicted_class = 0;  // lowest-index argmax
};

struct ForwardResult {
    nn::Tensor logits;
    StreamFeatures features;
};

/// The two-stream network: a spectrogram CNN and an MFCC CNN whose flattened
/// features are concatenated ([mfcc, spectro]) and fed to a dense softmax
/// head of task_classes(task) units.
class TwoStreamModel {
public:
    explicit TwoStreamModel(const ModelConfig& config);

    const ModelConfig& config() const { return config_; }
    std::size_t spec_feature_dim() const { return spec_feature_dim_; }
    std::size_t mfcc_feature_dim() const { return mfcc_feature_dim_; }
    std::size_t fused_dim() const { return spec_feature_dim_ + mfcc_feature_dim_; }
    std::size_t n_classes() const { return task_classes(config_.task); }

    ForwardResult forward(const nn::Tensor& spectro, const nn::Tensor& mfcc_in,
                          nn::RunContext& ctx);
    /// Propagates d(loss)/d(logits) through head and both streams,
    /// accumulating parameter gradients. Requires a recorded forward.
    void backward(const nn::Tensor& grad_logits);

    std::vector<nn::Parameter*> spectro_parameters();  // Theta
    std::vector<nn::Parameter*> mfcc_parameters();     // phi
    std::vector<nn::Parameter*> head_parameters();     // theta
    std::vector<nn::Parameter*> parameters();          // all, in stable order

private:
    ModelConfig config_;
    std::vector<std::unique_ptr<nn::Layer>> spectro_layers_;
    std::vector<std::unique_ptr<nn::Layer>> mfcc_layers_;
    std::unique_ptr<nn::Layer> head_;
    std::size_t spec_feature_dim_ = 0;
    std::size_t mfcc_feature_dim_ = 0;
};

TwoStreamModel build_model(TaskKind task, std::size_t width = 128,
                           std::size_t spectro_size = 224, std::size_t mfcc_dim = 177,
                           std::uint64_t init_seed = 0);

/// Softmax over logits plus the argmax class.
ClassProbs class_probs(const nn::Tensor& logits);

/// Eval-mode forward yielding probabilities and the per-stream features.
std::pair<ClassProbs, StreamFeatures> classify(TwoStreamModel& model, const nn::Tensor& spectro,
                                               const nn::Tensor& mfcc_in);

nn::Tensor spectro_to_tensor(const spectro::SpectroImage& image);
nn::Tensor mfcc_to_tensor(const mfcc::MfccInput& input);

/// End-to-end inference: feature pipelines + eval forward. Throws ConfigError
/// if the model was built for a different task.
ClassProbs predict_label(TwoStreamModel& model, const audio::AudioClip& clip, TaskKind task,
                         const FeatureConfig& features);

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // probes rejected for crossing a ReLU/argmax branch
};

/// Central-difference check of d(loss)/d(parameter) on `samples` randomly
/// chosen parameter coordinates (dropout off, double precision). A probe pair
/// whose branch signatures differ is skipped and resampled; the result is the
/// max of |analytic - numeric| / max(1, |analytic| + |numeric|).
GradCheckResult grad_check(TwoStreamModel& model, const nn::Tensor& spectro,
                           const nn::Tensor& mfcc_in, std::size_t target, std::size_t samples,
                           std::uint64_t seed, double step = 1e-5);

}  // namespace emoaudionet::model
