#include "emoaudionet/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emoaudionet/augment.hpp"
#include "emoaudionet/checkpoint.hpp"
#include "emoaudionet/errors.hpp"
#include "emoaudionet/metrics.hpp"
#include "emoaudionet/pngio.hpp"

namespace fs = std::filesystem;

namespace emoaudionet::cli {

namespace {

model::FeatureConfig feature_config_with_rate(std::uint32_t rate) {
    model::FeatureConfig fc;
    fc.sample_rate = rate;
    return fc;
}

std::vector<train::LabeledExample> featurize_split(const corpus::CorpusManifest& manifest,
                                                   const std::vector<std::size_t>& indices,
                                                   const model::FeatureConfig& features,
                                                   const corpus::FeatureCache& cache,
                                                   model::TaskKind task) {
    std::vector<train::LabeledExample> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        out.push_back(featurize_entry(manifest.entries[i], features, cache, task));
    }
    return out;
}

double entry_label(const corpus::ManifestEntry& entry, model::TaskKind task) {
    const auto it = entry.labels.find(model::task_name(task));
    if (it == entry.labels.end()) {
        throw ValidationError("clip " + entry.clip_id + " has no label for task " +
                              model::task_name(task));
    }
    return it->second;
}

int run_synth(const corpus::SyntheticSpec& spec, const std::string& out_dir,
              const std::string& task_name) {
    const auto task = model::task_from_name(task_name);
    const auto manifest = corpus::generate_synthetic_corpus(spec, out_dir, task);
    std::cerr << "wrote " << manifest.entries.size() << " clips to " << out_dir << '\n';
    return 0;
}

int run_extract(const std::string& kind, const std::string& manifest_path,
                const std::string& out_dir, std::uint32_t rate, const std::string& png_dir) {
    if (kind != "mfcc" && kind != "spectro") {
        throw InvalidArgumentError("--kind must be mfcc or spectro");
    }
    const auto manifest = corpus::load_manifest(manifest_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) throw IoError("cannot create output directory: " + out_dir);
    if (!png_dir.empty()) {
        fs::create_directories(png_dir, ec);
        if (!fs::is_directory(png_dir)) throw IoError("cannot create png directory: " + png_dir);
    }

    const auto features = feature_config_with_rate(rate);
    for (const auto& entry : manifest.entries) {
        auto clip = audio::load_wav(entry.wav_path);
        clip.clip_id = entry.clip_id;
        if (clip.sample_rate != features.sample_rate) {
            clip = audio::resample_linear(clip, features.sample_rate);
        }
        std::vector<double> values;
        if (kind == "mfcc") {
            values = mfcc::assemble_mfcc_input(clip, features.mfcc).values;
        } else {
            const auto image = spectro::render_spectro_image(clip);
            values = image.pixels;
            if (!png_dir.empty()) {
                std::vector<unsigned char> rgb(values.size());
                for (std::size_t i = 0; i < values.size(); ++i) {
                    rgb[i] = static_cast<unsigned char>(
                        std::lround(std::clamp(values[i], 0.0, 1.0) * 255.0));
                }
                pngio::write_png_rgb8((fs::path(png_dir) / (entry.clip_id + ".png")).string(),
                                      rgb, spectro::kImageSize, spectro::kImageSize);
            }
        }
        corpus::write_feature_record((fs::path(out_dir) / (entry.clip_id + "." + kind)).string(),
                                     entry.clip_id, values);
    }
    std::cerr << "extracted " << kind << " features for " << manifest.entries.size()
              << " clips\n";
    return 0;
}

int run_augment(const std::string& in_dir, const std::string& out_dir,
                const std::vector<double>& noise, const std::vector<double>& pitch,
                std::uint64_t seed) {
    if (!fs::is_directory(in_dir)) throw IoError("input directory does not exist: " + in_dir);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (!fs::is_directory(out_dir)) throw IoError("cannot create output directory: " + out_dir);

    std::vector<std::string> wavs;
    for (const auto& e : fs::directory_iterator(in_dir)) {
        if (e.path().extension() == ".wav") wavs.push_back(e.path().string());
    }
    std::sort(wavs.begin(), wavs.end());
    if (wavs.empty()) throw ValidationError("no .wav files in " + in_dir);

    std::vector<audio::AudioClip> clips;
    clips.reserve(wavs.size());
    for (const auto& path : wavs) clips.push_back(audio::load_wav(path));

    augment::AugmentSpec spec;
    spec.noise_factors = noise;
    spec.pitch_semitones = pitch;
    spec.seed = seed;
    const auto augmented = augment::augment_corpus(clips, spec);
    for (const auto& clip : augmented) {
        audio::save_wav((fs::path(out_dir) / (clip.clip_id + ".wav")).string(), clip);
    }
    std::cerr << "wrote " << augmented.size() << " clips (from " << clips.size()
              << " originals)\n";
    return 0;
}

int run_train(const std::string& task_name, const std::string& manifest_path,
              const std::string& config_path, const std::string& out_path,
              const std::string& history_path, std::uint32_t rate) {
    const auto task = model::task_from_name(task_name);
    const auto manifest = corpus::load_manifest(manifest_path);
    const auto config =
        config_path.empty() ? train::TrainConfig{} : train_config_from_json_file(config_path);

    const auto splits = corpus::assign_splits(manifest, config.seed);
    if (splits.train.empty() || splits.dev.empty()) {
        throw ValidationError("corpus too small to form train and dev splits");
    }

    const auto features = feature_config_with_rate(rate);
    corpus::FeatureCache cache(corpus::default_cache_dir(manifest_path));
    auto train_set = featurize_split(manifest, splits.train, features, cache, task);
    auto dev_set = featurize_split(manifest, splits.dev, features, cache, task);

    auto net = model::build_model(task, config.width, spectro::kImageSize,
                                  features.mfcc.output_dim, config.seed);
    const auto result = train::train_model(net, train_set, dev_set, config);

    ckpt::CheckpointMeta meta;
    meta.task = task;
    meta.width = config.width;
    meta.spectro_size = spectro::kImageSize;
    meta.mfcc_dim = features.mfcc.output_dim;
    meta.seed = config.seed;
    meta.features = features;
    ckpt::save_checkpoint(net, meta, out_path);

    const std::string hist = history_path.empty() ? out_path + ".history.csv" : history_path;
    std::ofstream hout(hist);
    if (!hout) throw IoError("cannot write history: " + hist);
    hout << train::history_csv(result.history);

    std::cerr << "stopped at epoch " << result.stopped_epoch << ", best dev accuracy "
              << result.best_dev_accuracy << " (epoch " << result.best_epoch << ")\n";
    return 0;
}

int run_eval(const std::string& ckpt_path, const std::string& manifest_path,
             const std::string& report_path, const std::string& split_name, bool expected_value) {
    ckpt::CheckpointMeta meta;
    auto net = ckpt::load_checkpoint(ckpt_path, &meta);
    const auto manifest = corpus::load_manifest(manifest_path);

    const auto splits = corpus::assign_splits(manifest, meta.seed);
    std::vector<std::size_t> indices;
    if (split_name == "train") {
        indices = splits.train;
    } else if (split_name == "dev") {
        indices = splits.dev;
    } else if (split_name == "test") {
        indices = splits.test;
    } else if (split_name == "all") {
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) indices.push_back(i);
    } else {
        throw InvalidArgumentError("--split must be train, dev, test or all");
    }
    if (indices.empty()) throw ValidationError("selected split is empty");

    corpus::FeatureCache cache(corpus::default_cache_dir(manifest_path));
    const auto examples = featurize_split(manifest, indices, meta.features, cache, meta.task);

    const auto predictions = train::predict_all(net, examples);
    std::vector<std::size_t> predicted, actual;
    std::vector<std::vector<double>> probs;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        predicted.push_back(predictions[i].predicted_class);
        actual.push_back(examples[i].label);
        probs.push_back(predictions[i].probs.values());
    }
    const auto centers = train::task_bin_centers(meta.task);
    const auto report =
        train::compute_metrics(predicted, actual, centers, meta.task, probs, expected_value);

    const std::string json = report.to_json().dump(2);
    if (report_path.empty()) {
        std::cout << json << '\n';
    } else {
        std::ofstream out(report_path);
        if (!out) throw IoError("cannot write report: " + report_path);
        out << json << '\n';
    }
    return 0;
}

int run_predict(const std::string& ckpt_path, const std::string& wav_path,
                const std::string& task_name) {
    ckpt::CheckpointMeta meta;
    auto net = ckpt::load_checkpoint(ckpt_path, &meta);
    if (!task_name.empty() && model::task_from_name(task_name) != meta.task) {
        throw ConfigError("checkpoint was trained for task '" + model::task_name(meta.task) +
                          "', requested '" + task_name + "'");
    }
    const auto clip = audio::load_wav(wav_path);
    const auto probs = model::predict_label(net, clip, meta.task, meta.features);
    const auto centers = train::task_bin_centers(meta.task);

    nlohmann::json j;
    j["clip_id"] = clip.clip_id;
    j["task"] = model::task_name(meta.task);
    j["predicted_class"] = probs.predicted_class;
    j["predicted_value"] = centers[probs.predicted_class];
    j["probs"] = probs.probs.values();
    std::cout << j.dump(2) << '\n';
    return 0;
}

}  // namespace

train::TrainConfig train_config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DecodeError("bad config JSON " + path + ": " + e.what());
    }
    train::TrainConfig c;
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.batch_size = j.value("batch_size", c.batch_size);
    c.max_epochs = j.value("max_epochs", c.max_epochs);
    c.early_stop_patience = j.value("early_stop_patience", c.early_stop_patience);
    if (j.contains("lr_reduce")) {
        const auto& r = j.at("lr_reduce");
        c.lr_reduce.factor = r.value("factor", c.lr_reduce.factor);
        c.lr_reduce.patience = r.value("patience", c.lr_reduce.patience);
        c.lr_reduce.floor = r.value("floor", c.lr_reduce.floor);
    }
    c.seed = j.value("seed", c.seed);
    c.width = j.value("width", c.width);
    if (c.learning_rate <= 0.0 || c.batch_size == 0 || c.max_epochs == 0 ||
        c.early_stop_patience == 0 || c.width == 0) {
        throw ValidationError("config values must be positive: " + path);
    }
    return c;
}

train::LabeledExample featurize_entry(const corpus::ManifestEntry& entry,
                                      const model::FeatureConfig& features,
                                      const corpus::FeatureCache& cache, model::TaskKind task) {
    const std::uint64_t clip_hash = corpus::hash_file_bytes(entry.wav_path);
    const std::uint64_t mfcc_hash = corpus::hash_feature_config(features, "mfcc");
    const std::uint64_t spec_hash = corpus::hash_feature_config(features, "spectro");

    auto mfcc_values = cache.lookup(entry.clip_id, "mfcc", clip_hash, mfcc_hash);
    auto spec_values = cache.lookup(entry.clip_id, "spectro", clip_hash, spec_hash);
    if (!mfcc_values || !spec_values) {
        auto clip = audio::load_wav(entry.wav_path);
        clip.clip_id = entry.clip_id;
        if (clip.sample_rate != features.sample_rate) {
            clip = audio::resample_linear(clip, features.sample_rate);
        }
        if (!mfcc_values) {
            auto v = corpus::quantize_f32(mfcc::assemble_mfcc_input(clip, features.mfcc).values);
            cache.store(entry.clip_id, "mfcc", clip_hash, mfcc_hash, v);
            mfcc_values = std::move(v);
        }
        if (!spec_values) {
            auto v = corpus::quantize_f32(spectro::render_spectro_image(clip).pixels);
            cache.store(entry.clip_id, "spectro", clip_hash, spec_hash, v);
            spec_values = std::move(v);
        }
    }

    train::LabeledExample ex;
    ex.clip_id = entry.clip_id;
    ex.mfcc = nn::Tensor({features.mfcc.output_dim, 1}, std::move(*mfcc_values));
    ex.spectro = nn::Tensor({spectro::kImageSize, spectro::kImageSize, 3},
                            std::move(*spec_values));
    ex.raw_label = entry_label(entry, task);
    ex.label = train::bin_labels({ex.raw_label}, task).classes.front();
    return ex;
}

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"EmoAudioNet: two-stream audio affect recognition toolkit"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled tone corpus");
    corpus::SyntheticSpec synth_spec;
    std::string synth_out, synth_task = "dep-bin";
    synth->add_option("--classes", synth_spec.classes, "Number of classes")->required();
    synth->add_option("--per-class", synth_spec.clips_per_class, "Clips per class")->required();
    synth->add_option("--seed", synth_spec.seed, "Corpus seed");
    synth->add_option("--duration", synth_spec.duration_seconds, "Clip length in seconds");
    synth->add_option("--rate", synth_spec.sample_rate, "Sample rate in Hz");
    synth->add_option("--out", synth_out, "Output directory")->required();
    synth->add_option("--task", synth_task, "Label task (dep-bin, dep-sev, arousal, valence)");

    // extract
    auto* extract = app.add_subcommand("extract", "Extract features into binary records");
    std::string ex_kind, ex_manifest, ex_out, ex_png;
    std::uint32_t ex_rate = 16000;
    extract->add_option("--kind", ex_kind, "mfcc or spectro")->required();
    extract->add_option("--corpus", ex_manifest, "Manifest CSV")->required();
    extract->add_option("--out", ex_out, "Output directory")->required();
    extract->add_option("--rate", ex_rate, "Working sample rate in Hz");
    extract->add_option("--png", ex_png, "Also dump 8-bit spectrogram PNGs here");

    // augment
    auto* aug = app.add_subcommand("augment", "Write noise-mixed and pitch-shifted copies");
    std::string aug_in, aug_out;
    std::vector<double> aug_noise{0.01, 0.02, 0.03};
    std::vector<double> aug_pitch{0.5, 2.0, 5.0};
    std::uint64_t aug_seed = 0;
    aug->add_option("--in", aug_in, "Directory of input .wav files")->required();
    aug->add_option("--out", aug_out, "Output directory")->required();
    aug->add_option("--noise", aug_noise, "Noise factors")->delimiter(',');
    aug->add_option("--pitch", aug_pitch, "Downward shifts in semitones")->delimiter(',');
    aug->add_option("--seed", aug_seed, "Noise seed");

    // train
    auto* tr = app.add_subcommand("train", "Train the two-stream model");
    std::string tr_task, tr_manifest, tr_config, tr_out, tr_history;
    std::uint32_t tr_rate = 16000;
    tr->add_option("--task", tr_task, "dep-bin, dep-sev, arousal or valence")->required();
    tr->add_option("--corpus", tr_manifest, "Manifest CSV")->required();
    tr->add_option("--config", tr_config, "Training config JSON");
    tr->add_option("--out", tr_out, "Checkpoint output path")->required();
    tr->add_option("--history", tr_history, "History CSV path");
    tr->add_option("--rate", tr_rate, "Working sample rate in Hz");

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate a checkpoint on a corpus split");
    std::string ev_ckpt, ev_manifest, ev_report, ev_split = "test";
    bool ev_expected = false;
    ev->add_option("--ckpt", ev_ckpt, "Checkpoint path")->required();
    ev->add_option("--corpus", ev_manifest, "Manifest CSV")->required();
    ev->add_option("--report", ev_report, "Metrics JSON output (stdout when omitted)");
    ev->add_option("--split", ev_split, "train, dev, test or all");
    ev->add_flag("--expected-value", ev_expected,
                 "Back-map predictions by probability-weighted bin centers");

    // predict
    auto* pr = app.add_subcommand("predict", "Classify one wav file");
    std::string pr_ckpt, pr_wav, pr_task;
    pr->add_option("--ckpt", pr_ckpt, "Checkpoint path")->required();
    pr->add_option("--wav", pr_wav, "Input wav file")->required();
    pr->add_option("--task", pr_task, "Expected task (validated against the checkpoint)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) return run_synth(synth_spec, synth_out, synth_task);
        if (extract->parsed()) return run_extract(ex_kind, ex_manifest, ex_out, ex_rate, ex_png);
        if (aug->parsed()) return run_augment(aug_in, aug_out, aug_noise, aug_pitch, aug_seed);
        if (tr->parsed()) return run_train(tr_task, tr_manifest, tr_config, tr_out, tr_history,
                                           tr_rate);
        if (ev->parsed()) return run_eval(ev_ckpt, ev_manifest, ev_report, ev_split, ev_expected);
        if (pr->parsed()) return run_predict(pr_ckpt, pr_wav, pr_task);
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace emoaudionet::cli
