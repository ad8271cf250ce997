#include "emoaudionet/tensor.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "emoaudionet/errors.hpp"

namespace emoaudionet::nn {

namespace {

std::size_t shape_numel(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (std::size_t d : shape) n *= d;
    return n;
}

}  // namespace

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(shape_numel(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_numel(shape_)) {
        throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_string(shape_));
    }
}

std::vector<double>& Tensor::grad() {
    if (!grad_) grad_.emplace(data_.size(), 0.0);
    return *grad_;
}

const std::vector<double>& Tensor::grad() const {
    if (!grad_) throw StateError("tensor has no gradient");
    return *grad_;
}

void Tensor::check_finite(const std::string& what) const {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw NumericError("non-finite value in " + what);
        }
    }
}

std::string Tensor::shape_string(const std::vector<std::size_t>& shape) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) os << 'x';
        os << shape[i];
    }
    os << ']';
    return os.str();
}

Parameter::Parameter(std::string name_, Tensor value_)
    : name(std::move(name_)),
      value(std::move(value_)),
      grad(value.numel(), 0.0),
      adam_m(value.numel(), 0.0),
      adam_v(value.numel(), 0.0) {}

void Parameter::zero_grad() {
    std::fill(grad.begin(), grad.end(), 0.0);
    grad_ready = false;
}

void Parameter::accumulate_grad(const std::vector<double>& g) {
    if (g.size() != grad.size()) {
        throw ShapeError("gradient length mismatch for parameter " + name);
    }
    for (std::size_t i = 0; i < g.size(); ++i) grad[i] += g[i];
    grad_ready = true;
}

}  // namespace emoaudionet::nn
