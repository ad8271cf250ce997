#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "emoaudionet/audio.hpp"
#include "emoaudionet/augment.hpp"
#include "emoaudionet/checkpoint.hpp"
#include "emoaudionet/errors.hpp"
#include "emoaudionet/metrics.hpp"
#include "emoaudionet/mfcc.hpp"
#include "emoaudionet/model.hpp"
#include "emoaudionet/spectrogram.hpp"

namespace py = pybind11;
using namespace emoaudionet;

namespace {

audio::AudioClip clip_from_array(const py::array_t<double>& samples, std::uint32_t rate,
                                 const std::string& clip_id = "buffer") {
    if (samples.ndim() != 1) throw InvalidArgumentError("samples must be a 1-D array");
    audio::AudioClip clip;
    clip.sample_rate = rate;
    clip.clip_id = clip_id;
    clip.samples.assign(samples.data(), samples.data() + samples.size());
    return clip;
}

py::array_t<double> to_array(const std::vector<double>& values) {
    py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_image(const std::vector<double>& pixels) {
    py::array_t<double> out({py::ssize_t(spectro::kImageSize), py::ssize_t(spectro::kImageSize),
                             py::ssize_t(3)});
    std::copy(pixels.begin(), pixels.end(), out.mutable_data());
    return out;
}

py::dict metrics_to_dict(const train::MetricsReport& report) {
    py::dict d;
    d["accuracy"] = report.accuracy;
    if (report.pcc_defined) {
        d["pcc"] = report.pcc;
    } else {
        d["pcc"] = py::none();
    }
    d["rmse"] = report.rmse;
    d["nrmse"] = report.nrmse;
    py::list per_class;
    for (const auto& pc : report.per_class) {
        py::dict c;
        c["precision"] = pc.precision;
        c["recall"] = pc.recall;
        c["f1"] = pc.f1;
        per_class.append(c);
    }
    d["per_class"] = per_class;
    d["confusion"] = report.confusion;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Two-stream (MFCC + spectrogram) audio affect recognition toolkit";

    py::register_exception<Error>(m, "EmoAudioNetError");

    m.def(
        "load_wav",
        [](const std::string& path) {
            const auto clip = audio::load_wav(path);
            return py::make_tuple(to_array(clip.samples), clip.sample_rate, clip.clip_id);
        },
        py::arg("path"), "Reads a wav file; returns (samples, sample_rate, clip_id).");

    m.def(
        "save_wav",
        [](const std::string& path, const py::array_t<double>& samples, std::uint32_t rate) {
            audio::save_wav(path, clip_from_array(samples, rate));
        },
        py::arg("path"), py::arg("samples"), py::arg("sample_rate"));

    m.def(
        "resample",
        [](const py::array_t<double>& samples, std::uint32_t rate, std::uint32_t target) {
            return to_array(audio::resample_linear(clip_from_array(samples, rate), target)
                                .samples);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("target_rate"));

    m.def(
        "hamming_window",
        [](std::size_t n) { return to_array(audio::hamming_window(n)); }, py::arg("n"));

    m.def(
        "add_noise",
        [](const py::array_t<double>& samples, std::uint32_t rate, double alpha,
           std::uint64_t seed) {
            return to_array(augment::add_noise(clip_from_array(samples, rate), alpha, seed)
                                .samples);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("alpha"), py::arg("seed") = 0);

    m.def(
        "pitch_shift",
        [](const py::array_t<double>& samples, std::uint32_t rate, double semitones_down) {
            return to_array(
                augment::pitch_shift(clip_from_array(samples, rate), semitones_down).samples);
        },
        py::arg("samples"), py::arg("sample_rate"), py::arg("semitones_down"));

    m.def(
        "mfcc_features",
        [](const py::array_t<double>& samples, std::uint32_t rate) {
            return to_array(
                mfcc::assemble_mfcc_input(clip_from_array(samples, rate), mfcc::MfccConfig{})
                    .values);
        },
        py::arg("samples"), py::arg("sample_rate"),
        "The fixed 177-value cepstral vector feeding the 1D stream.");

    m.def(
        "spectrogram_image",
        [](const py::array_t<double>& samples, std::uint32_t rate) {
            return to_image(
                spectro::render_spectro_image(clip_from_array(samples, rate)).pixels);
        },
        py::arg("samples"), py::arg("sample_rate"),
        "The 224x224x3 color spectrogram feeding the 2D stream.");

    m.def(
        "stream_feature_dims",
        [](const std::string& task, std::size_t width) {
            auto net = model::build_model(model::task_from_name(task), width);
            return py::make_tuple(net.spec_feature_dim(), net.mfcc_feature_dim());
        },
        py::arg("task"), py::arg("width") = 128,
        "Flattened (spectrogram, mfcc) feature sizes of the two streams.");

    m.def(
        "bin_labels",
        [](const std::vector<double>& raw, const std::string& task) {
            return train::bin_labels(raw, model::task_from_name(task)).classes;
        },
        py::arg("raw"), py::arg("task"));

    m.def(
        "compute_metrics",
        [](const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& actual,
           const std::string& task) {
            const auto kind = model::task_from_name(task);
            return metrics_to_dict(train::compute_metrics(
                predicted, actual, train::task_bin_centers(kind), kind));
        },
        py::arg("predicted"), py::arg("actual"), py::arg("task"),
        "Accuracy, PCC, RMSE, nRMSE, per-class precision/recall/F1 and the confusion matrix.");

    m.def(
        "predict",
        [](const std::string& checkpoint_path, const std::string& wav_path) {
            ckpt::CheckpointMeta meta;
            auto net = ckpt::load_checkpoint(checkpoint_path, &meta);
            const auto clip = audio::load_wav(wav_path);
            const auto probs = model::predict_label(net, clip, meta.task, meta.features);
            py::dict d;
            d["clip_id"] = clip.clip_id;
            d["task"] = model::task_name(meta.task);
            d["predicted_class"] = probs.predicted_class;
            d["probs"] = to_array(probs.probs.values());
            return d;
        },
        py::arg("checkpoint_path"), py::arg("wav_path"),
        "End-to-end inference through both feature pipelines and the fused model.");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
