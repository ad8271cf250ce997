#include "emoaudionet/layers.hpp"

#include <algorithm>
#include <cmath>

#include "emoaudionet/errors.hpp"
#include "emoaudionet/rng.hpp"

namespace emoaudionet::nn {

namespace {

void expect_shape(const Tensor& t, const std::vector<std::size_t>& shape,
                  const std::string& who) {
    if (t.shape() != shape) {
        throw ShapeError(who + ": expected " + Tensor::shape_string(shape) + ", got " +
                         Tensor::shape_string(t.shape()));
    }
}

void expect_rank(const Tensor& t, std::size_t rank, const std::string& who) {
    if (t.rank() != rank) {
        throw ShapeError(who + ": expected rank " + std::to_string(rank) + " input, got " +
                         Tensor::shape_string(t.shape()));
    }
}

Tensor glorot_uniform(std::vector<std::size_t> shape, std::size_t fan_in, std::size_t fan_out,
                      std::mt19937_64& rng) {
    Tensor t(std::move(shape));
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (std::size_t i = 0; i < t.numel(); ++i) t[i] = limit * uniform_pm1(rng);
    return t;
}

/// Left zero-pad for same padding; the extra zero goes on the right for
/// even kernels.
std::size_t pad_left(Padding p, std::size_t k) { return p == Padding::same ? (k - 1) / 2 : 0; }

std::size_t conv_out_dim(std::size_t in, std::size_t k, Padding p, const std::string& who) {
    if (p == Padding::same) return in;
    if (k > in) {
        throw ShapeError(who + ": valid padding needs kernel " + std::to_string(k) +
                         " <= input " + std::to_string(in));
    }
    return in - k + 1;
}

std::size_t pool_out_dim(std::size_t in, std::size_t stride) {
    return std::max<std::size_t>(in / stride, 1);
}

void record_signature(RunContext& ctx, std::uint64_t h) {
    if (ctx.signature) ctx.signature->push_back(h);
}

}  // namespace

// ---------------------------------------------------------------- Conv1d

Conv1d::Conv1d(std::string name, std::size_t kernel, std::size_t in_channels,
               std::size_t out_channels, Padding padding, std::mt19937_64& rng)
    : kernel_(name + ".kernel", glorot_uniform({kernel, in_channels, out_channels},
                                               kernel * in_channels, kernel * out_channels, rng)),
      bias_(name + ".bias", Tensor({out_channels})),
      k_(kernel),
      cin_(in_channels),
      cout_(out_channels),
      padding_(padding) {
    if (kernel == 0 || in_channels == 0 || out_channels == 0) {
        throw InvalidArgumentError("conv1d dimensions must be positive");
    }
}

std::vector<std::size_t> Conv1d::output_shape(std::vector<std::size_t> in) const {
    if (in.size() != 2 || in[1] != cin_) {
        throw ShapeError("conv1d expects [L x " + std::to_string(cin_) + "], got " +
                         Tensor::shape_string(in));
    }
    return {conv_out_dim(in[0], k_, padding_, "conv1d"), cout_};
}

Tensor Conv1d::forward(const Tensor& input, RunContext& ctx) {
    expect_rank(input, 2, "conv1d");
    const auto out_shape = output_shape(input.shape());
    const std::size_t len = input.dim(0);
    const std::size_t out_len = out_shape[0];
    const std::size_t pl = pad_left(padding_, k_);

    Tensor out(out_shape);
    const double* in = input.data();
    const double* ker = kernel_.value.data();
    const double* bias = bias_.value.data();

    for (std::size_t l = 0; l < out_len; ++l) {
        double* op = out.data() + l * cout_;
        for (std::size_t co = 0; co < cout_; ++co) op[co] = bias[co];
        for (std::size_t k = 0; k < k_; ++k) {
            const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(l + k) -
                                     static_cast<std::ptrdiff_t>(pl);
            if (t < 0 || t >= static_cast<std::ptrdiff_t>(len)) continue;
            const double* ip = in + static_cast<std::size_t>(t) * cin_;
            const double* kp = ker + k * cin_ * cout_;
            for (std::size_t ci = 0; ci < cin_; ++ci) {
                const double v = ip[ci];
                const double* kr = kp + ci * cout_;
                for (std::size_t co = 0; co < cout_; ++co) op[co] += v * kr[co];
            }
        }
    }
    out.check_finite("conv1d output");
    if (ctx.record) cached_input_ = input;
    record_signature(ctx, 0);
    return out;
}

Tensor Conv1d::backward(const Tensor& grad_out) {
    if (cached_input_.numel() == 0) throw StateError("conv1d backward before forward");
    const Tensor& input = cached_input_;
    const std::size_t len = input.dim(0);
    const std::size_t out_len = grad_out.dim(0);
    expect_shape(grad_out, {out_len, cout_}, "conv1d backward");
    const std::size_t pl = pad_left(padding_, k_);

    const double* in = input.data();
    const double* ker = kernel_.value.data();
    const double* go = grad_out.data();

    Tensor grad_in(input.shape());
    double* gi = grad_in.data();
    for (std::size_t t = 0; t < len; ++t) {
        double* gp = gi + t * cin_;
        for (std::size_t k = 0; k < k_; ++k) {
            // out position l satisfies l + k - pl == t
            const std::ptrdiff_t l = static_cast<std::ptrdiff_t>(t + pl) -
                                     static_cast<std::ptrdiff_t>(k);
            if (l < 0 || l >= static_cast<std::ptrdiff_t>(out_len)) continue;
            const double* gop = go + static_cast<std::size_t>(l) * cout_;
            const double* kp = ker + k * cin_ * cout_;
            for (std::size_t ci = 0; ci < cin_; ++ci) {
                const double* kr = kp + ci * cout_;
                double acc = 0.0;
                for (std::size_t co = 0; co < cout_; ++co) acc += gop[co] * kr[co];
                gp[ci] += acc;
            }
        }
    }

    std::vector<double> gk(kernel_.numel(), 0.0);
    for (std::size_t k = 0; k < k_; ++k) {
        double* gkp = gk.data() + k * cin_ * cout_;
        for (std::size_t l = 0; l < out_len; ++l) {
            const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(l + k) -
                                     static_cast<std::ptrdiff_t>(pl);
            if (t < 0 || t >= static_cast<std::ptrdiff_t>(len)) continue;
            const double* ip = in + static_cast<std::size_t>(t) * cin_;
            const double* gop = go + l * cout_;
            for (std::size_t ci = 0; ci < cin_; ++ci) {
                const double v = ip[ci];
                double* g = gkp + ci * cout_;
                for (std::size_t co = 0; co < cout_; ++co) g[co] += v * gop[co];
            }
        }
    }
    kernel_.accumulate_grad(gk);

    std::vector<double> gb(cout_, 0.0);
    for (std::size_t l = 0; l < out_len; ++l) {
        const double* gop = go + l * cout_;
        for (std::size_t co = 0; co < cout_; ++co) gb[co] += gop[co];
    }
    bias_.accumulate_grad(gb);

    return grad_in;
}

// ---------------------------------------------------------------- Conv2d

Conv2d::Conv2d(std::string name, std::size_t kernel_h, std::size_t kernel_w,
               std::size_t in_channels, std::size_t out_channels, Padding padding,
               std::mt19937_64& rng)
    : kernel_(name + ".kernel",
              glorot_uniform({kernel_h, kernel_w, in_channels, out_channels},
                             kernel_h * kernel_w * in_channels,
                             kernel_h * kernel_w * out_channels, rng)),
      bias_(name + ".bias", Tensor({out_channels})),
      kh_(kernel_h),
      kw_(kernel_w),
      cin_(in_channels),
      cout_(out_channels),
      padding_(padding) {
    if (kernel_h == 0 || kernel_w == 0 || in_channels == 0 || out_channels == 0) {
        throw InvalidArgumentError("conv2d dimensions must be positive");
    }
}

std::vector<std::size_t> Conv2d::output_shape(std::vector<std::size_t> in) const {
    if (in.size() != 3 || in[2] != cin_) {
        throw ShapeError("conv2d expects [H x W x " + std::to_string(cin_) + "], got " +
                         Tensor::shape_string(in));
    }
    return {conv_out_dim(in[0], kh_, padding_, "conv2d"),
            conv_out_dim(in[1], kw_, padding_, "conv2d"), cout_};
}

Tensor Conv2d::forward(const Tensor& input, RunContext& ctx) {
    expect_rank(input, 3, "conv2d");
    const auto out_shape = output_shape(input.shape());
    const std::size_t h = input.dim(0), w = input.dim(1);
    const std::size_t oh = out_shape[0], ow = out_shape[1];
    const std::size_t pt = pad_left(padding_, kh_), plft = pad_left(padding_, kw_);

    Tensor out(out_shape);
    const double* in = input.data();
    const double* ker = kernel_.value.data();
    const double* bias = bias_.value.data();
    double* op_base = out.data();

#pragma omp parallel for schedule(static)
    for (std::size_t y = 0; y < oh; ++y) {
        for (std::size_t x = 0; x < ow; ++x) {
            double* op = op_base + (y * ow + x) * cout_;
            for (std::size_t co = 0; co < cout_; ++co) op[co] = bias[co];
            for (std::size_t dy = 0; dy < kh_; ++dy) {
                const std::ptrdiff_t yy = static_cast<std::ptrdiff_t>(y + dy) -
                                          static_cast<std::ptrdiff_t>(pt);
                if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(h)) continue;
                for (std::size_t dx = 0; dx < kw_; ++dx) {
                    const std::ptrdiff_t xx = static_cast<std::ptrdiff_t>(x + dx) -
                                              static_cast<std::ptrdiff_t>(plft);
                    if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(w)) continue;
                    const double* ip = in + (static_cast<std::size_t>(yy) * w +
                                             static_cast<std::size_t>(xx)) * cin_;
                    const double* kp = ker + (dy * kw_ + dx) * cin_ * cout_;
                    for (std::size_t ci = 0; ci < cin_; ++ci) {
                        const double v = ip[ci];
                        const double* kr = kp + ci * cout_;
                        for (std::size_t co = 0; co < cout_; ++co) op[co] += v * kr[co];
                    }
                }
            }
        }
    }
    out.check_finite("conv2d output");
    if (ctx.record) cached_input_ = input;
    record_signature(ctx, 0);
    return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
    if (cached_input_.numel() == 0) throw StateError("conv2d backward before forward");
    const Tensor& input = cached_input_;
    const std::size_t h = input.dim(0), w = input.dim(1);
    const auto out_shape = output_shape(input.shape());
    expect_shape(grad_out, out_shape, "conv2d backward");
    const std::size_t oh = out_shape[0], ow = out_shape[1];
    const std::size_t pt = pad_left(padding_, kh_), plft = pad_left(padding_, kw_);

    const double* in = input.data();
    const double* ker = kernel_.value.data();
    const double* go = grad_out.data();

    Tensor grad_in(input.shape());
    double* gi_base = grad_in.data();
#pragma omp parallel for schedule(static)
    for (std::size_t yy = 0; yy < h; ++yy) {
        for (std::size_t xx = 0; xx < w; ++xx) {
            double* gp = gi_base + (yy * w + xx) * cin_;
            for (std::size_t dy = 0; dy < kh_; ++dy) {
                const std::ptrdiff_t y = static_cast<std::ptrdiff_t>(yy + pt) -
                                         static_cast<std::ptrdiff_t>(dy);
                if (y < 0 || y >= static_cast<std::ptrdiff_t>(oh)) continue;
                for (std::size_t dx = 0; dx < kw_; ++dx) {
                    const std::ptrdiff_t x = static_cast<std::ptrdiff_t>(xx + plft) -
                                             static_cast<std::ptrdiff_t>(dx);
                    if (x < 0 || x >= static_cast<std::ptrdiff_t>(ow)) continue;
                    const double* gop = go + (static_cast<std::size_t>(y) * ow +
                                              static_cast<std::size_t>(x)) * cout_;
                    const double* kp = ker + (dy * kw_ + dx) * cin_ * cout_;
                    for (std::size_t ci = 0; ci < cin_; ++ci) {
                        const double* kr = kp + ci * cout_;
                        double acc = 0.0;
                        for (std::size_t co = 0; co < cout_; ++co) acc += gop[co] * kr[co];
                        gp[ci] += acc;
                    }
                }
            }
        }
    }

    std::vector<double> gk(kernel_.numel(), 0.0);
#pragma omp parallel for schedule(static)
    for (std::size_t tap = 0; tap < kh_ * kw_; ++tap) {
        const std::size_t dy = tap / kw_, dx = tap % kw_;
        double* gkp = gk.data() + tap * cin_ * cout_;
        for (std::size_t y = 0; y < oh; ++y) {
            const std::ptrdiff_t yy = static_cast<std::ptrdiff_t>(y + dy) -
                                      static_cast<std::ptrdiff_t>(pt);
            if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(h)) continue;
            for (std::size_t x = 0; x < ow; ++x) {
                const std::ptrdiff_t xx = static_cast<std::ptrdiff_t>(x + dx) -
                                          static_cast<std::ptrdiff_t>(plft);
                if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(w)) continue;
                const double* ip = in + (static_cast<std::size_t>(yy) * w +
                                         static_cast<std::size_t>(xx)) * cin_;
                const double* gop = go + (y * ow + x) * cout_;
                for (std::size_t ci = 0; ci < cin_; ++ci) {
                    const double v = ip[ci];
                    double* g = gkp + ci * cout_;
                    for (std::size_t co = 0; co < cout_; ++co) g[co] += v * gop[co];
                }
            }
        }
    }
    kernel_.accumulate_grad(gk);

    std::vector<double> gb(cout_, 0.0);
    for (std::size_t i = 0; i < oh * ow; ++i) {
        const double* gop = go + i * cout_;
        for (std::size_t co = 0; co < cout_; ++co) gb[co] += gop[co];
    }
    bias_.accumulate_grad(gb);

    return grad_in;
}

// ------------------------------------------------------------------ Relu

Tensor Relu::forward(const Tensor& input, RunContext& ctx) {
    Tensor out(input.shape());
    std::vector<unsigned char> mask(input.numel());
    for (std::size_t i = 0; i < input.numel(); ++i) {
        const bool on = input[i] > 0.0;
        mask[i] = on;
        out[i] = on ? input[i] : 0.0;
    }
    if (ctx.signature) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char m : mask) {
            h ^= m;
            h *= 0x100000001b3ull;
        }
        ctx.signature->push_back(h);
    }
    if (ctx.record) {
        mask_ = std::move(mask);
        cached_shape_ = input.shape();
    }
    return out;
}

Tensor Relu::backward(const Tensor& grad_out) {
    if (mask_.empty()) throw StateError("relu backward before forward");
    expect_shape(grad_out, cached_shape_, "relu backward");
    Tensor grad_in(cached_shape_);
    for (std::size_t i = 0; i < grad_out.numel(); ++i) {
        grad_in[i] = mask_[i] ? grad_out[i] : 0.0;
    }
    return grad_in;
}

// --------------------------------------------------------------- Dropout

Dropout::Dropout(double rate) : rate_(rate) {
    if (rate < 0.0 || rate >= 1.0) {
        throw InvalidArgumentError("dropout rate must be in [0, 1), got " + std::to_string(rate));
    }
}

Tensor Dropout::forward(const Tensor& input, RunContext& ctx) {
    if (ctx.mode == Mode::eval || rate_ == 0.0) {
        identity_pass_ = true;
        return input;
    }
    if (!ctx.rng) throw StateError("dropout in train mode needs a seeded generator");
    identity_pass_ = false;
    const double keep_scale = 1.0 / (1.0 - rate_);
    Tensor out(input.shape());
    scale_.resize(input.numel());
    for (std::size_t i = 0; i < input.numel(); ++i) {
        const double s = uniform01(*ctx.rng) < rate_ ? 0.0 : keep_scale;
        scale_[i] = s;
        out[i] = input[i] * s;
    }
    return out;
}

Tensor Dropout::backward(const Tensor& grad_out) {
    if (identity_pass_) return grad_out;
    if (scale_.size() != grad_out.numel()) throw StateError("dropout backward shape mismatch");
    Tensor grad_in(grad_out.shape());
    for (std::size_t i = 0; i < grad_out.numel(); ++i) grad_in[i] = grad_out[i] * scale_[i];
    return grad_in;
}

// --------------------------------------------------------------- MaxPool

MaxPool::MaxPool(std::size_t stride, std::size_t spatial_axes)
    : stride_(stride), spatial_axes_(spatial_axes) {
    if (stride == 0) throw InvalidArgumentError("pool stride must be positive");
    if (spatial_axes != 1 && spatial_axes != 2) {
        throw InvalidArgumentError("maxpool supports 1 or 2 spatial axes");
    }
}

std::vector<std::size_t> MaxPool::output_shape(std::vector<std::size_t> in) const {
    if (in.size() != spatial_axes_ + 1) {
        throw ShapeError(kind() + " expects rank " + std::to_string(spatial_axes_ + 1) +
                         " input, got " + Tensor::shape_string(in));
    }
    auto out = in;
    for (std::size_t a = 0; a < spatial_axes_; ++a) out[a] = pool_out_dim(in[a], stride_);
    return out;
}

Tensor MaxPool::forward(const Tensor& input, RunContext& ctx) {
    const auto out_shape = output_shape(input.shape());
    const std::size_t channels = input.shape().back();
    Tensor out(out_shape);
    std::vector<std::size_t> argmax(out.numel());

    // Windows are [o*stride, (o+1)*stride); when the whole axis is shorter
    // than one stride the single window covers what exists. Trailing
    // remainder samples are dropped, matching floor(in/stride).
    auto window = [this](std::size_t o, std::size_t in_dim) {
        if (in_dim < stride_) return std::pair<std::size_t, std::size_t>{0, in_dim};
        return std::pair<std::size_t, std::size_t>{o * stride_, (o + 1) * stride_};
    };

    if (spatial_axes_ == 1) {
        const std::size_t in_len = input.dim(0), out_len = out_shape[0];
        for (std::size_t o = 0; o < out_len; ++o) {
            const auto [b, e] = window(o, in_len);
            for (std::size_t c = 0; c < channels; ++c) {
                std::size_t best = b * channels + c;
                double best_v = input[best];
                for (std::size_t t = b + 1; t < e; ++t) {
                    const std::size_t idx = t * channels + c;
                    if (input[idx] > best_v) {
                        best_v = input[idx];
                        best = idx;
                    }
                }
                const std::size_t oi = o * channels + c;
                out[oi] = best_v;
                argmax[oi] = best;
            }
        }
    } else {
        const std::size_t in_h = input.dim(0), in_w = input.dim(1);
        const std::size_t out_h = out_shape[0], out_w = out_shape[1];
        for (std::size_t oy = 0; oy < out_h; ++oy) {
            const auto [yb, ye] = window(oy, in_h);
            for (std::size_t ox = 0; ox < out_w; ++ox) {
                const auto [xb, xe] = window(ox, in_w);
                for (std::size_t c = 0; c < channels; ++c) {
                    std::size_t best = (yb * in_w + xb) * channels + c;
                    double best_v = input[best];
                    for (std::size_t y = yb; y < ye; ++y) {
                        for (std::size_t x = xb; x < xe; ++x) {
                            const std::size_t idx = (y * in_w + x) * channels + c;
                            if (input[idx] > best_v) {
                                best_v = input[idx];
                                best = idx;
                            }
                        }
                    }
                    const std::size_t oi = (oy * out_w + ox) * channels + c;
                    out[oi] = best_v;
                    argmax[oi] = best;
                }
            }
        }
    }

    if (ctx.signature) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::size_t a : argmax) h = fnv1a64_u64(a, h);
        ctx.signature->push_back(h);
    }
    if (ctx.record) {
        argmax_ = std::move(argmax);
        cached_in_shape_ = input.shape();
    }
    return out;
}

Tensor MaxPool::backward(const Tensor& grad_out) {
    if (cached_in_shape_.empty()) throw StateError("maxpool backward before forward");
    if (grad_out.numel() != argmax_.size()) {
        throw ShapeError("maxpool backward: gradient has " + std::to_string(grad_out.numel()) +
                         " elements, expected " + std::to_string(argmax_.size()));
    }
    Tensor grad_in(cached_in_shape_);
    for (std::size_t i = 0; i < argmax_.size(); ++i) grad_in[argmax_[i]] += grad_out[i];
    return grad_in;
}

// ----------------------------------------------------------------- Dense

Dense::Dense(std::string name, std::size_t in_dim, std::size_t units, std::mt19937_64& rng)
    : weights_(name + ".weights", glorot_uniform({in_dim, units}, in_dim, units, rng)),
      bias_(name + ".bias", Tensor({units})),
      d_(in_dim),
      u_(units) {
    if (in_dim == 0 || units == 0) throw InvalidArgumentError("dense dimensions must be positive");
}

std::vector<std::size_t> Dense::output_shape(std::vector<std::size_t> in) const {
    if (in != std::vector<std::size_t>{d_}) {
        throw ShapeError("dense expects [" + std::to_string(d_) + "], got " +
                         Tensor::shape_string(in));
    }
    return {u_};
}

Tensor Dense::forward(const Tensor& input, RunContext& ctx) {
    expect_shape(input, {d_}, "dense");
    Tensor out({u_});
    const double* w = weights_.value.data();
    for (std::size_t u = 0; u < u_; ++u) out[u] = bias_.value[u];
    for (std::size_t d = 0; d < d_; ++d) {
        const double v = input[d];
        const double* wr = w + d * u_;
        for (std::size_t u = 0; u < u_; ++u) out[u] += v * wr[u];
    }
    out.check_finite("dense output");
    if (ctx.record) cached_input_ = input;
    record_signature(ctx, 0);
    return out;
}

Tensor Dense::backward(const Tensor& grad_out) {
    if (cached_input_.numel() == 0) throw StateError("dense backward before forward");
    expect_shape(grad_out, {u_}, "dense backward");

    Tensor grad_in({d_});
    const double* w = weights_.value.data();
    std::vector<double> gw(weights_.numel(), 0.0);
    for (std::size_t d = 0; d < d_; ++d) {
        const double* wr = w + d * u_;
        double* gwr = gw.data() + d * u_;
        const double x = cached_input_[d];
        double acc = 0.0;
        for (std::size_t u = 0; u < u_; ++u) {
            acc += grad_out[u] * wr[u];
            gwr[u] = x * grad_out[u];
        }
        grad_in[d] = acc;
    }
    weights_.accumulate_grad(gw);
    bias_.accumulate_grad(grad_out.values());
    return grad_in;
}

// --------------------------------------------------------------- Flatten

Tensor Flatten::forward(const Tensor& input, RunContext& ctx) {
    if (ctx.record) cached_shape_ = input.shape();
    return Tensor({input.numel()}, input.values());
}

Tensor Flatten::backward(const Tensor& grad_out) {
    if (cached_shape_.empty()) throw StateError("flatten backward before forward");
    return Tensor(cached_shape_, grad_out.values());
}

std::vector<std::size_t> Flatten::output_shape(std::vector<std::size_t> in) const {
    std::size_t n = 1;
    for (std::size_t d : in) n *= d;
    return {n};
}

// ------------------------------------------------------------- LayerSpec

LayerSpec LayerSpec::conv1d(std::size_t kernel, std::size_t channels, Padding p) {
    LayerSpec s;
    s.kind = Kind::conv1d;
    s.kernel = kernel;
    s.channels = channels;
    s.padding = p;
    return s;
}

LayerSpec LayerSpec::conv2d(std::size_t kernel, std::size_t channels, Padding p) {
    LayerSpec s;
    s.kind = Kind::conv2d;
    s.kernel = kernel;
    s.channels = channels;
    s.padding = p;
    return s;
}

LayerSpec LayerSpec::relu() {
    LayerSpec s;
    s.kind = Kind::relu;
    return s;
}

LayerSpec LayerSpec::dropout(double rate) {
    LayerSpec s;
    s.kind = Kind::dropout;
    s.rate = rate;
    return s;
}

LayerSpec LayerSpec::maxpool1d(std::size_t stride) {
    LayerSpec s;
    s.kind = Kind::maxpool1d;
    s.stride = stride;
    return s;
}

LayerSpec LayerSpec::maxpool2d(std::size_t stride) {
    LayerSpec s;
    s.kind = Kind::maxpool2d;
    s.stride = stride;
    return s;
}

LayerSpec LayerSpec::dense(std::size_t units) {
    LayerSpec s;
    s.kind = Kind::dense;
    s.units = units;
    return s;
}

LayerSpec LayerSpec::flatten() {
    LayerSpec s;
    s.kind = Kind::flatten;
    return s;
}

std::unique_ptr<Layer> make_layer(const LayerSpec& spec, const std::vector<std::size_t>& in_shape,
                                  const std::string& name, std::mt19937_64& rng) {
    switch (spec.kind) {
        case LayerSpec::Kind::conv1d:
            if (in_shape.size() != 2) {
                throw ShapeError("conv1d needs [L x C] input, got " +
                                 Tensor::shape_string(in_shape));
            }
            return std::make_unique<Conv1d>(name, spec.kernel, in_shape[1], spec.channels,
                                            spec.padding, rng);
        case LayerSpec::Kind::conv2d:
            if (in_shape.size() != 3) {
                throw ShapeError("conv2d needs [H x W x C] input, got " +
                                 Tensor::shape_string(in_shape));
            }
            return std::make_unique<Conv2d>(name, spec.kernel, spec.kernel, in_shape[2],
                                            spec.channels, spec.padding, rng);
        case LayerSpec::Kind::relu:
            return std::make_unique<Relu>();
        case LayerSpec::Kind::dropout:
            return std::make_unique<Dropout>(spec.rate);
        case LayerSpec::Kind::maxpool1d:
            return std::make_unique<MaxPool>(spec.stride, 1);
        case LayerSpec::Kind::maxpool2d:
            return std::make_unique<MaxPool>(spec.stride, 2);
        case LayerSpec::Kind::dense: {
            if (in_shape.size() != 1) {
                throw ShapeError("dense needs flat input, got " + Tensor::shape_string(in_shape));
            }
            return std::make_unique<Dense>(name, in_shape[0], spec.units, rng);
        }
        case LayerSpec::Kind::flatten:
            return std::make_unique<Flatten>();
    }
    throw InvalidArgumentError("unknown layer kind");
}

// ------------------------------------------------- softmax cross entropy

SoftmaxXent softmax_cross_entropy(const Tensor& logits, std::size_t target) {
    const std::size_t n = logits.numel();
    if (n == 0) throw InvalidArgumentError("softmax needs at least one logit");
    if (target >= n) {
        throw InvalidArgumentError("target " + std::to_string(target) + " out of range for " +
                                   std::to_string(n) + " classes");
    }
    double max_logit = logits[0];
    for (std::size_t i = 1; i < n; ++i) max_logit = std::max(max_logit, logits[i]);

    Tensor probs({n});
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        denom += probs[i];
    }
    for (std::size_t i = 0; i < n; ++i) probs[i] /= denom;

    const double loss = -(logits[target] - max_logit - std::log(denom));
    return {loss, std::move(probs)};
}

Tensor softmax_cross_entropy_backward(const Tensor& probs, std::size_t target) {
    Tensor grad(probs.shape(), probs.values());
    grad[target] -= 1.0;
    return grad;
}

}  // namespace emoaudionet::nn
