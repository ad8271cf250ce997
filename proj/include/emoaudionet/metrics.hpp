#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emoaudionet/model.hpp"

#include <nlohmann/json_fwd.hpp>

namespace emoaudionet::train {

struct PerClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool zero_denominator = false;  // some rate had an empty row/column
};

/// Confusion convention: rows are predicted classes, columns are actual.
struct MetricsReport {
    double accuracy = 0.0;
    double pcc = 0.0;
    bool pcc_defined = false;  // false when either value sequence is constant
    double rmse = 0.0;
    double nrmse = 0.0;
    std::vector<PerClassMetrics> per_class;
    std::vector<std::vector<std::uint64_t>> confusion;

    nlohmann::json to_json() const;  // pcc serializes as null when undefined
    static MetricsReport from_json(const nlohmann::json& j);
};

struct BinnedLabels {
    std::vector<std::size_t> classes;
    std::vector<double> bin_centers;  // one center per class of the task
};

/// Continuous arousal/valence in [-1, 1] maps to 10 equal right-open bins
/// (1.0 lands in bin 9); severity scores 0..23 and binary labels map to
/// themselves. Out-of-range raw values throw RangeError.
BinnedLabels bin_labels(const std::vector<double>& raw, model::TaskKind task);

/// Class-index -> representative value mapping used for PCC/RMSE.
std::vector<double> task_bin_centers(model::TaskKind task);

/// Label range used as the nRMSE denominator (23, 2.0, or 1.0 for binary).
double task_value_range(model::TaskKind task);

/// Full metric battery. Predicted/actual values for PCC/RMSE are the bin
/// centers of the class indices; when `use_expected_value` is set and probs
/// are given, the predicted value is the probability-weighted center instead.
MetricsReport compute_metrics(const std::vector<std::size_t>& predicted,
                              const std::vector<std::size_t>& actual,
                              const std::vector<double>& bin_centers, model::TaskKind task,
                              const std::vector<std::vector<double>>& probs = {},
                              bool use_expected_value = false);

}  // namespace emoaudionet::train
