#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "emoaudionet/tensor.hpp"

namespace emoaudionet::nn {

enum class Padding { same, valid };
enum class Mode { train, eval };

/// Per-forward-pass context. `record` enables the caches backward needs;
/// `rng` drives dropout masks in train mode; `signature`, when set, collects
/// a hash of every data-dependent branch decision (ReLU signs, pool argmax)
/// so a gradient checker can reject probes that cross a kink.
struct RunContext {
    Mode mode = Mode::eval;
    bool record = true;
    std::mt19937_64* rng = nullptr;
    std::vector<std::uint64_t>* signature = nullptr;
};

class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& input, RunContext& ctx) = 0;
    /// Gradient w.r.t. the last recorded input; accumulates into parameter
    /// gradients. Requires a preceding forward with record = true.
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual std::vector<Parameter*> parameters() { return {}; }
    virtual std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const = 0;
    virtual std::string kind() const = 0;
};

/// 1D cross-correlation, stride 1. Input [L x Cin], kernel [K x Cin x Cout],
/// bias [Cout]. Same padding keeps L (extra zero on the right for even K).
class Conv1d : public Layer {
public:
    Conv1d(std::string name, std::size_t kernel, std::size_t in_channels,
           std::size_t out_channels, Padding padding, std::mt19937_64& rng);

    Tensor forward(const Tensor& input, RunContext& ctx) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Parameter*> parameters() override { return {&kernel_, &bias_}; }
    std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const override;
    std::string kind() const override { return "conv1d"; }

private:
    Parameter kernel_, bias_;
    std::size_t k_, cin_, cout_;
    Padding padding_;
    Tensor cached_input_;
};

/// 2D cross-correlation, stride 1. Input [H x W x Cin],
/// kernel [Kh x Kw x Cin x Cout], bias [Cout].
class Conv2d : public Layer {
public:
    Conv2d(std::string name, std::size_t kernel_h, std::size_t kernel_w,
           std::size_t in_channels, std::size_t out_channels, Padding padding,
           std::mt19937_64& rng);

    Tensor forward(const Tensor& input, RunContext& ctx) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Parameter*> parameters() override { return {&kernel_, &bias_}; }
    std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const override;
    std::string kind() const override { return "conv2d"; }

private:
    Parameter kernel_, bias_;
    std::size_t kh_, kw_, cin_, cout_;
    Padding padding_;
    Tensor cached_input_;
};

class Relu : public Layer {
public:
    Tensor forward(const Tensor& input, RunContext& ctx) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const override {
        return in;
    }
    std::string kind() const override { return "relu"; }

private:
    std::vector<unsigned char> mask_;  // x > 0; gradient is zero at x == 0
    std::vector<std::size_t> cached_shape_;
};

/// Inverted dropout: train mode zeroes each element with probability `rate`
/// and scales survivors by 1/(1-rate); eval mode is the identity.
class Dropout : public Layer {
public:
    explicit Dropout(double rate);

    Tensor forward(const Tensor& input, RunContext& ctx) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const override {
        return in;
    }
    std::string kind() const override { return "dropout"; }
    double rate() const { return rate_; }

private:
    double rate_;
    std::vector<double> scale_;  // 0 or 1/(1-rate) per element
    bool identity_pass_ = true;
};

/// Non-overlapping max pooling over the leading spatial axes (window ==
/// stride). Output spatial dim is floor(in/stride), clamped to 1: an input
/// shorter than the stride is pooled as a single window. Gradient routes to
/// the first-occurrence argmax.
class MaxPool : public Layer {
public:
    MaxPool(std::size_t stride, std::size_t spatial_axes);

    Tensor forward(const Tensor& input, RunContext& ctx) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const override;
    std::string kind() const override { return spatial_axes_ == 1 ? "maxpool1d" : "maxpool2d"; }

private:
    std::size_t stride_, spatial_axes_;
    std::vector<std::size_t> argmax_;  // flat input index per output element
    std::vector<std::size_t> cached_in_shape_;
};

/// y = W.x + b with W of shape [D x U].
class Dense : public Layer {
public:
    Dense(std::string name, std::size_t in_dim, std::size_t units, std::mt19937_64& rng);

    Tensor forward(const Tensor& input, RunContext& ctx) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<Parameter*> parameters() override { return {&weights_, &bias_}; }
    std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const override;
    std::string kind() const override { return "dense"; }

private:
    Parameter weights_, bias_;
    std::size_t d_, u_;
    Tensor cached_input_;
};

class Flatten : public Layer {
public:
    Tensor forward(const Tensor& input, RunContext& ctx) override;
    Tensor backward(const Tensor& grad_out) override;
    std::vector<std::size_t> output_shape(std::vector<std::size_t> in) const override;
    std::string kind() const override { return "flatten"; }

private:
    std::vector<std::size_t> cached_shape_;
};

/// Declarative layer description; build_model assembles streams from these.
struct LayerSpec {
    enum class Kind { conv1d, conv2d, relu, dropout, maxpool1d, maxpool2d, dense, flatten };
    Kind kind;
    std::size_t channels = 0;  // conv output channels
    std::size_t kernel = 0;    // conv kernel extent (square for conv2d)
    std::size_t stride = 0;    // pooling stride
    std::size_t units = 0;     // dense units
    double rate = 0.0;         // dropout rate
    Padding padding = Padding::same;

    static LayerSpec conv1d(std::size_t kernel, std::size_t channels, Padding p = Padding::same);
    static LayerSpec conv2d(std::size_t kernel, std::size_t channels, Padding p = Padding::same);
    static LayerSpec relu();
    static LayerSpec dropout(double rate);
    static LayerSpec maxpool1d(std::size_t stride);
    static LayerSpec maxpool2d(std::size_t stride);
    static LayerSpec dense(std::size_t units);
    static LayerSpec flatten();
};

/// Instantiates a layer for the given input shape (Glorot-uniform weights,
/// zero biases, drawn from `rng`).
std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const std::vector<std::size_t>& in_shape,
                                  const std::string& name, std::mt19937_64& rng);

struct SoftmaxXent {
    double loss;
    Tensor probs;
};

/// Numerically stable softmax + cross entropy against a class index.
SoftmaxXent softmax_cross_entropy(const Tensor& logits, std::size_t target);

/// d(loss)/d(logits) = probs - onehot(target).
Tensor softmax_cross_entropy_backward(const Tensor& probs, std::size_t target);

}  // namespace emoaudionet::nn
