#include "emoaudionet/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "emoaudionet/errors.hpp"
#include "emoaudionet/rng.hpp"

namespace emoaudionet::model {

using nn::LayerSpec;
using nn::Tensor;

std::size_t task_classes(TaskKind task) {
    switch (task) {
        case TaskKind::depression_binary: return 2;
        case TaskKind::depression_severity: return 24;
        case TaskKind::arousal: return 10;
        case TaskKind::valence: return 10;
    }
    throw InvalidArgumentError("unknown task");
}

std::string task_name(TaskKind task) {
    switch (task) {
        case TaskKind::depression_binary: return "dep-bin";
        case TaskKind::depression_severity: return "dep-sev";
        case TaskKind::arousal: return "arousal";
        case TaskKind::valence: return "valence";
    }
    throw InvalidArgumentError("unknown task");
}

TaskKind task_from_name(const std::string& name) {
    if (name == "dep-bin") return TaskKind::depression_binary;
    if (name == "dep-sev") return TaskKind::depression_severity;
    if (name == "arousal") return TaskKind::arousal;
    if (name == "valence") return TaskKind::valence;
    throw InvalidArgumentError("unknown task '" + name +
                               "' (expected dep-bin, dep-sev, arousal or valence)");
}

namespace {

constexpr double kDropoutRate = 0.1;
constexpr std::size_t kPoolStride = 8;

std::vector<LayerSpec> spectro_stream_spec(std::size_t width) {
    std::vector<LayerSpec> s;
    for (int block = 0; block < 2; ++block) {
        s.push_back(LayerSpec::conv2d(3, width));
        s.push_back(LayerSpec::relu());
        s.push_back(LayerSpec::conv2d(3, width));
        s.push_back(LayerSpec::relu());
        s.push_back(LayerSpec::dropout(kDropoutRate));
        s.push_back(LayerSpec::maxpool2d(kPoolStride));
        s.push_back(LayerSpec::conv2d(3, width));
        s.push_back(LayerSpec::relu());
    }
    s.push_back(LayerSpec::flatten());
    return s;
}

std::vector<LayerSpec> mfcc_stream_spec(std::size_t width) {
    return {LayerSpec::conv1d(5, width), LayerSpec::relu(),
            LayerSpec::conv1d(5, width), LayerSpec::relu(),
            LayerSpec::dropout(kDropoutRate), LayerSpec::maxpool1d(kPoolStride),
            LayerSpec::flatten()};
}

std::string spectro_layer_name(std::size_t index) {
    // 8 specs per block; conv positions within a block are 0, 2, 6.
    const std::size_t block = index / 8 + 1;
    const std::size_t pos = index % 8;
    const std::size_t conv = pos == 0 ? 1 : (pos == 2 ? 2 : 3);
    return "spectro.block" + std::to_string(block) + ".conv" + std::to_string(conv);
}

std::vector<std::size_t> build_stream(const std::vector<LayerSpec>& specs,
                                      std::vector<std::size_t> shape,
                                      const std::string& stream,
                                      std::vector<std::unique_ptr<nn::Layer>>& out,
                                      std::mt19937_64& rng) {
    std::size_t conv_index = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        std::string name;
        if (specs[i].kind == LayerSpec::Kind::conv1d) {
            name = stream + ".conv" + std::to_string(++conv_index);
        } else if (specs[i].kind == LayerSpec::Kind::conv2d) {
            name = spectro_layer_name(i);
        }
        auto layer = nn::make_layer(specs[i], shape, name, rng);
        shape = layer->output_shape(shape);
        out.push_back(std::move(layer));
    }
    return shape;
}

}  // namespace

TwoStreamModel::TwoStreamModel(const ModelConfig& config) : config_(config) {
    if (config.width < 1) {
        throw InvalidArgumentError("invalid architecture: width must be >= 1");
    }
    if (config.spectro_size < 1 || config.mfcc_dim < 1) {
        throw InvalidArgumentError("invalid architecture: input dimensions must be >= 1");
    }

    std::mt19937_64 rng(config.init_seed);
    auto spec_shape = build_stream(spectro_stream_spec(config.width),
                                   {config.spectro_size, config.spectro_size, 3}, "spectro",
                                   spectro_layers_, rng);
    auto mfcc_shape = build_stream(mfcc_stream_spec(config.width), {config.mfcc_dim, 1}, "mfcc",
                                   mfcc_layers_, rng);
    spec_feature_dim_ = spec_shape[0];
    mfcc_feature_dim_ = mfcc_shape[0];
    if (spec_feature_dim_ == 0 || mfcc_feature_dim_ == 0) {
        throw InvalidArgumentError("invalid architecture: a stream flattens to zero features");
    }

    head_ = nn::make_layer(LayerSpec::dense(task_classes(config.task)),
                           {fused_dim()}, "head.dense", rng);
    // The output head starts near zero (uniform in +/-1e-3). Glorot-scale
    // head weights put the initial logits orders of magnitude above what the
    // 1e-5 learning rate can traverse in a few hundred steps.
    const double glorot_limit =
        std::sqrt(6.0 / static_cast<double>(fused_dim() + task_classes(config.task)));
    const double head_scale = 1e-3 / glorot_limit;
    for (auto* p : head_->parameters()) {
        if (p->name.ends_with(".weights")) {
            for (auto& w : p->value.values()) w *= head_scale;
        }
    }
}

ForwardResult TwoStreamModel::forward(const Tensor& spectro, const Tensor& mfcc_in,
                                      nn::RunContext& ctx) {
    const std::vector<std::size_t> want_spec{config_.spectro_size, config_.spectro_size, 3};
    const std::vector<std::size_t> want_mfcc{config_.mfcc_dim, 1};
    if (spectro.shape() != want_spec) {
        throw ShapeError("spectrogram input: expected " + Tensor::shape_string(want_spec) +
                         ", got " + Tensor::shape_string(spectro.shape()));
    }
    if (mfcc_in.shape() != want_mfcc) {
        throw ShapeError("mfcc input: expected " + Tensor::shape_string(want_mfcc) + ", got " +
                         Tensor::shape_string(mfcc_in.shape()));
    }

    Tensor spec_feat = spectro;
    for (auto& layer : spectro_layers_) spec_feat = layer->forward(spec_feat, ctx);
    Tensor mfcc_feat = mfcc_in;
    for (auto& layer : mfcc_layers_) mfcc_feat = layer->forward(mfcc_feat, ctx);

    // Feature-level fusion: [mfcc, spectro].
    Tensor fused({fused_dim()});
    std::copy(mfcc_feat.values().begin(), mfcc_feat.values().end(), fused.values().begin());
    std::copy(spec_feat.values().begin(), spec_feat.values().end(),
              fused.values().begin() + static_cast<std::ptrdiff_t>(mfcc_feature_dim_));

    Tensor logits = head_->forward(fused, ctx);
    return {std::move(logits), {std::move(spec_feat), std::move(mfcc_feat)}};
}

void TwoStreamModel::backward(const Tensor& grad_logits) {
    Tensor grad_fused = head_->backward(grad_logits);

    Tensor grad_mfcc({mfcc_feature_dim_});
    Tensor grad_spec({spec_feature_dim_});
    std::copy_n(grad_fused.values().begin(), mfcc_feature_dim_, grad_mfcc.values().begin());
    std::copy_n(grad_fused.values().begin() + static_cast<std::ptrdiff_t>(mfcc_feature_dim_),
                spec_feature_dim_, grad_spec.values().begin());

    for (auto it = mfcc_layers_.rbegin(); it != mfcc_layers_.rend(); ++it) {
        grad_mfcc = (*it)->backward(grad_mfcc);
    }
    for (auto it = spectro_layers_.rbegin(); it != spectro_layers_.rend(); ++it) {
        grad_spec = (*it)->backward(grad_spec);
    }
}

std::vector<nn::Parameter*> TwoStreamModel::spectro_parameters() {
    std::vector<nn::Parameter*> out;
    for (auto& l : spectro_layers_) {
        for (auto* p : l->parameters()) out.push_back(p);
    }
    return out;
}

std::vector<nn::Parameter*> TwoStreamModel::mfcc_parameters() {
    std::vector<nn::Parameter*> out;
    for (auto& l : mfcc_layers_) {
        for (auto* p : l->parameters()) out.push_back(p);
    }
    return out;
}

std::vector<nn::Parameter*> TwoStreamModel::head_parameters() { return head_->parameters(); }

std::vector<nn::Parameter*> TwoStreamModel::parameters() {
    auto out = spectro_parameters();
    for (auto* p : mfcc_parameters()) out.push_back(p);
    for (auto* p : head_parameters()) out.push_back(p);
    return out;
}

TwoStreamModel build_model(TaskKind task, std::size_t width, std::size_t spectro_size,
                           std::size_t mfcc_dim, std::uint64_t init_seed) {
    ModelConfig config;
    config.task = task;
    config.width = width;
    config.spectro_size = spectro_size;
    config.mfcc_dim = mfcc_dim;
    config.init_seed = init_seed;
    return TwoStreamModel(config);
}

ClassProbs class_probs(const nn::Tensor& logits) {
    auto sm = nn::softmax_cross_entropy(logits, 0);  // loss against class 0 is discarded
    ClassProbs out;
    out.probs = std::move(sm.probs);
    out.predicted_class = 0;
    for (std::size_t i = 1; i < out.probs.numel(); ++i) {
        if (out.probs[i] > out.probs[out.predicted_class]) out.predicted_class = i;
    }
    return out;
}

std::pair<ClassProbs, StreamFeatures> classify(TwoStreamModel& model, const nn::Tensor& spectro,
                                               const nn::Tensor& mfcc_in) {
    nn::RunContext ctx;
    ctx.mode = nn::Mode::eval;
    ctx.record = false;
    auto result = model.forward(spectro, mfcc_in, ctx);
    return {class_probs(result.logits), std::move(result.features)};
}

nn::Tensor spectro_to_tensor(const spectro::SpectroImage& image) {
    return Tensor({spectro::kImageSize, spectro::kImageSize, 3}, image.pixels);
}

nn::Tensor mfcc_to_tensor(const mfcc::MfccInput& input) {
    return Tensor({input.values.size(), 1}, input.values);
}

ClassProbs predict_label(TwoStreamModel& model, const audio::AudioClip& clip, TaskKind task,
                         const FeatureConfig& features) {
    if (model.config().task != task) {
        throw ConfigError("model was trained for task '" + task_name(model.config().task) +
                          "', requested '" + task_name(task) + "'");
    }
    audio::AudioClip working = clip.sample_rate == features.sample_rate
                                   ? clip
                                   : audio::resample_linear(clip, features.sample_rate);
    const auto mfcc_in = mfcc::assemble_mfcc_input(working, features.mfcc);
    const auto image = spectro::render_spectro_image(working);
    return classify(model, spectro_to_tensor(image), mfcc_to_tensor(mfcc_in)).first;
}

GradCheckResult grad_check(TwoStreamModel& model, const Tensor& spectro, const Tensor& mfcc_in,
                           std::size_t target, std::size_t samples, std::uint64_t seed,
                           double step) {
    auto params = model.parameters();
    for (auto* p : params) p->zero_grad();

    // Analytic gradients from one recorded eval-mode pass (dropout off).
    nn::RunContext ctx;
    ctx.mode = nn::Mode::eval;
    ctx.record = true;
    auto fwd = model.forward(spectro, mfcc_in, ctx);
    auto xent = nn::softmax_cross_entropy(fwd.logits, target);
    model.backward(nn::softmax_cross_entropy_backward(xent.probs, target));

    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (auto* p : params) {
        analytic.push_back(p->grad);
        p->zero_grad();
    }

    auto probe_loss = [&](std::vector<std::uint64_t>* sig) {
        nn::RunContext probe;
        probe.mode = nn::Mode::eval;
        probe.record = false;
        probe.signature = sig;
        auto r = model.forward(spectro, mfcc_in, probe);
        return nn::softmax_cross_entropy(r.logits, target).loss;
    };

    std::size_t total_coords = 0;
    for (auto* p : params) total_coords += p->numel();

    std::mt19937_64 rng(seed);
    GradCheckResult result;
    const std::size_t max_attempts = samples * 10;
    std::size_t attempts = 0;
    while (result.evaluated < samples && attempts < max_attempts) {
        ++attempts;
        std::size_t flat = uniform_below(rng, total_coords);
        std::size_t pi = 0;
        while (flat >= params[pi]->numel()) flat -= params[pi++]->numel();
        nn::Parameter* p = params[pi];

        const double original = p->value[flat];
        std::vector<std::uint64_t> sig_plus, sig_minus;
        p->value[flat] = original + step;
        const double loss_plus = probe_loss(&sig_plus);
        p->value[flat] = original - step;
        const double loss_minus = probe_loss(&sig_minus);
        p->value[flat] = original;

        if (sig_plus != sig_minus) {
            ++result.skipped;  // the probe crossed a ReLU sign or argmax switch
            continue;
        }
        const double numeric = (loss_plus - loss_minus) / (2.0 * step);
        const double a = analytic[pi][flat];
        const double rel = std::abs(a - numeric) / std::max(1.0, std::abs(a) + std::abs(numeric));
        result.max_rel_error = std::max(result.max_rel_error, rel);
        ++result.evaluated;
    }
    return result;
}

}  // namespace emoaudionet::model
