#pragma once

#include <vector>

#include "emoaudionet/tensor.hpp"

namespace emoaudionet::nn {

struct AdamConfig {
    double learning_rate = 1e-5;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// One bias-corrected ADAM update over every parameter. Each parameter must
/// hold a gradient from a completed backward pass (grad_ready), which this
/// consumes and clears.
void adam_step(const std::vector<Parameter*>& params, const AdamConfig& config);

}  // namespace emoaudionet::nn
