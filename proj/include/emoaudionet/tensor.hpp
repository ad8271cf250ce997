#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emoaudionet::nn {

/// Dense row-major n-dimensional array of doubles with an optional gradient
/// slot of the same shape.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
    Tensor(std::vector<std::size_t> shape, std::vector<double> data);

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t dim(std::size_t axis) const { return shape_[axis]; }
    std::size_t numel() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    bool has_grad() const { return grad_.has_value(); }
    std::vector<double>& grad();              // allocates zeros on first use
    const std::vector<double>& grad() const;  // throws StateError if absent
    void clear_grad() { grad_.reset(); }

    /// Throws NumericError naming `what` if any value is NaN/Inf.
    void check_finite(const std::string& what) const;

    static std::string shape_string(const std::vector<std::size_t>& shape);

private:
    std::vector<std::size_t> shape_;
    std::vector<double> data_;
    std::optional<std::vector<double>> grad_;
};

/// Trainable tensor plus its ADAM state.
struct Parameter {
    std::string name;
    Tensor value;
    std::vector<double> grad;    // same length as value; zeroed between steps
    std::vector<double> adam_m;  // first-moment buffer
    std::vector<double> adam_v;  // second-moment buffer
    std::uint64_t step_count = 0;
    bool grad_ready = false;  // set by backward, cleared by the optimizer

    Parameter() = default;
    Parameter(std::string name_, Tensor value_);

    std::size_t numel() const { return value.numel(); }
    void zero_grad();
    void accumulate_grad(const std::vector<double>& g);
};

}  // namespace emoaudionet::nn
