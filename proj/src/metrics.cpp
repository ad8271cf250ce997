#include "emoaudionet/metrics.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "emoaudionet/errors.hpp"

namespace emoaudionet::train {

namespace {

double quiet_nan() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

nlohmann::json MetricsReport::to_json() const {
    nlohmann::json j;
    j["accuracy"] = accuracy;
    if (pcc_defined) {
        j["pcc"] = pcc;
    } else {
        j["pcc"] = nullptr;
    }
    j["rmse"] = rmse;
    j["nrmse"] = nrmse;
    j["per_class"] = nlohmann::json::array();
    for (const auto& pc : per_class) {
        j["per_class"].push_back({{"precision", pc.precision},
                                  {"recall", pc.recall},
                                  {"f1", pc.f1},
                                  {"zero_denominator", pc.zero_denominator}});
    }
    j["confusion"] = confusion;
    return j;
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
    MetricsReport r;
    r.accuracy = j.at("accuracy").get<double>();
    if (j.at("pcc").is_null()) {
        r.pcc = quiet_nan();
        r.pcc_defined = false;
    } else {
        r.pcc = j.at("pcc").get<double>();
        r.pcc_defined = true;
    }
    r.rmse = j.at("rmse").get<double>();
    r.nrmse = j.at("nrmse").get<double>();
    for (const auto& pc : j.at("per_class")) {
        r.per_class.push_back({pc.at("precision").get<double>(), pc.at("recall").get<double>(),
                               pc.at("f1").get<double>(), pc.at("zero_denominator").get<bool>()});
    }
    r.confusion = j.at("confusion").get<std::vector<std::vector<std::uint64_t>>>();
    return r;
}

std::vector<double> task_bin_centers(model::TaskKind task) {
    const std::size_t n = model::task_classes(task);
    std::vector<double> centers(n);
    switch (task) {
        case model::TaskKind::arousal:
        case model::TaskKind::valence:
            for (std::size_t c = 0; c < n; ++c) {
                centers[c] = -1.0 + (static_cast<double>(c) + 0.5) * 0.2;
            }
            break;
        case model::TaskKind::depression_severity:
        case model::TaskKind::depression_binary:
            for (std::size_t c = 0; c < n; ++c) centers[c] = static_cast<double>(c);
            break;
    }
    return centers;
}

double task_value_range(model::TaskKind task) {
    switch (task) {
        case model::TaskKind::depression_severity: return 23.0;
        case model::TaskKind::arousal:
        case model::TaskKind::valence: return 2.0;
        case model::TaskKind::depression_binary: return 1.0;
    }
    throw InvalidArgumentError("unknown task");
}

BinnedLabels bin_labels(const std::vector<double>& raw, model::TaskKind task) {
    BinnedLabels out;
    out.bin_centers = task_bin_centers(task);
    out.classes.reserve(raw.size());
    const std::size_t n = model::task_classes(task);

    for (double v : raw) {
        std::size_t cls;
        switch (task) {
            case model::TaskKind::arousal:
            case model::TaskKind::valence: {
                if (v < -1.0 || v > 1.0) {
                    throw RangeError("arousal/valence value " + std::to_string(v) +
                                     " outside [-1, 1]");
                }
                cls = std::min<std::size_t>(
                    static_cast<std::size_t>(std::floor((v + 1.0) / 0.2)), n - 1);
                break;
            }
            case model::TaskKind::depression_severity:
            case model::TaskKind::depression_binary: {
                const double r = std::round(v);
                if (std::abs(v - r) > 1e-9 || r < 0.0 || r > static_cast<double>(n - 1)) {
                    throw RangeError("label value " + std::to_string(v) +
                                     " is not an integer in [0, " + std::to_string(n - 1) + "]");
                }
                cls = static_cast<std::size_t>(r);
                break;
            }
            default:
                throw InvalidArgumentError("unknown task");
        }
        out.classes.push_back(cls);
    }
    return out;
}

MetricsReport compute_metrics(const std::vector<std::size_t>& predicted,
                              const std::vector<std::size_t>& actual,
                              const std::vector<double>& bin_centers, model::TaskKind task,
                              const std::vector<std::vector<double>>& probs,
                              bool use_expected_value) {
    if (predicted.size() != actual.size()) {
        throw InvalidArgumentError("predicted and actual lengths differ: " +
                                   std::to_string(predicted.size()) + " vs " +
                                   std::to_string(actual.size()));
    }
    if (predicted.empty()) throw InvalidArgumentError("cannot compute metrics of zero examples");
    if (use_expected_value && probs.size() != predicted.size()) {
        throw InvalidArgumentError("expected-value mode needs per-example probabilities");
    }

    const std::size_t n = model::task_classes(task);
    if (bin_centers.size() != n) {
        throw InvalidArgumentError("bin_centers must have one entry per class");
    }

    MetricsReport report;
    report.confusion.assign(n, std::vector<std::uint64_t>(n, 0));
    std::uint64_t correct = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] >= n || actual[i] >= n) {
            throw InvalidArgumentError("class index out of range for task");
        }
        report.confusion[predicted[i]][actual[i]] += 1;
        correct += predicted[i] == actual[i];
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(predicted.size());

    // Back-mapped values for correlation and error metrics.
    std::vector<double> pv(predicted.size()), av(predicted.size());
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        av[i] = bin_centers[actual[i]];
        if (use_expected_value) {
            double e = 0.0;
            for (std::size_t c = 0; c < n; ++c) e += probs[i][c] * bin_centers[c];
            pv[i] = e;
        } else {
            pv[i] = bin_centers[predicted[i]];
        }
    }

    double se = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        const double d = pv[i] - av[i];
        se += d * d;
    }
    report.rmse = std::sqrt(se / static_cast<double>(pv.size()));
    report.nrmse = report.rmse / task_value_range(task);

    double pm = 0.0, am = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        pm += pv[i];
        am += av[i];
    }
    pm /= static_cast<double>(pv.size());
    am /= static_cast<double>(av.size());
    double cov = 0.0, pvar = 0.0, avar = 0.0;
    for (std::size_t i = 0; i < pv.size(); ++i) {
        cov += (pv[i] - pm) * (av[i] - am);
        pvar += (pv[i] - pm) * (pv[i] - pm);
        avar += (av[i] - am) * (av[i] - am);
    }
    if (pvar <= 0.0 || avar <= 0.0) {
        report.pcc = quiet_nan();
        report.pcc_defined = false;
    } else {
        report.pcc = cov / std::sqrt(pvar * avar);
        report.pcc_defined = true;
    }

    report.per_class.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::uint64_t row = 0, col = 0;
        for (std::size_t k = 0; k < n; ++k) {
            row += report.confusion[c][k];
            col += report.confusion[k][c];
        }
        auto& pc = report.per_class[c];
        const double tp = static_cast<double>(report.confusion[c][c]);
        pc.zero_denominator = row == 0 || col == 0;
        pc.precision = row == 0 ? 0.0 : tp / static_cast<double>(row);
        pc.recall = col == 0 ? 0.0 : tp / static_cast<double>(col);
        const double pr = pc.precision + pc.recall;
        if (pr <= 0.0) {
            pc.f1 = 0.0;
            pc.zero_denominator = true;
        } else {
            pc.f1 = 2.0 * pc.precision * pc.recall / pr;
        }
    }
    return report;
}

}  // namespace emoaudionet::train
