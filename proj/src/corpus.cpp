#include "emoaudionet/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emoaudionet/errors.hpp"
#include "emoaudionet/metrics.hpp"
#include "emoaudionet/rng.hpp"

namespace fs = std::filesystem;

namespace emoaudionet::corpus {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

CorpusManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest: " + path);
    const fs::path base = fs::path(path).parent_path();

    std::string line;
    if (!std::getline(in, line)) throw DecodeError("empty manifest: " + path);
    const auto header = split_csv_line(line);
    const std::vector<std::string> required = {"clip_id", "wav_path", "speaker_id", "label_task",
                                               "label_value"};
    for (std::size_t i = 0; i < required.size(); ++i) {
        if (i >= header.size() || header[i] != required[i]) {
            throw DecodeError("manifest " + path + " line 1: expected column '" + required[i] +
                              "' at position " + std::to_string(i + 1));
        }
    }
    const bool has_split = header.size() > 5 && header[5] == "split";

    CorpusManifest manifest;
    std::set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() < 5) {
            throw DecodeError("manifest " + path + " line " + std::to_string(line_no) +
                              ": expected at least 5 columns, got " +
                              std::to_string(fields.size()));
        }
        ManifestEntry entry;
        entry.clip_id = fields[0];
        if (entry.clip_id.empty()) {
            throw ValidationError("manifest " + path + " line " + std::to_string(line_no) +
                                  ": empty clip_id");
        }
        if (!seen.insert(entry.clip_id).second) {
            throw ValidationError("duplicate clip_id '" + entry.clip_id + "' in " + path);
        }
        fs::path wav(fields[1]);
        if (wav.is_relative()) wav = base / wav;
        entry.wav_path = wav.string();
        if (!fs::exists(entry.wav_path)) {
            throw ValidationError("manifest " + path + " line " + std::to_string(line_no) +
                                  ": wav file does not exist: " + entry.wav_path);
        }
        entry.speaker_id = fields[2];
        const std::string& task = fields[3];
        if (task.empty()) {
            throw DecodeError("manifest " + path + " line " + std::to_string(line_no) +
                              ": empty label_task");
        }
        try {
            entry.labels[task] = std::stod(fields[4]);
        } catch (const std::exception&) {
            throw DecodeError("manifest " + path + " line " + std::to_string(line_no) +
                              ": bad label_value '" + fields[4] + "'");
        }
        if (has_split && fields.size() > 5) entry.split = fields[5];
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

void save_manifest(const CorpusManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write manifest: " + path);
    bool any_split = false;
    for (const auto& e : manifest.entries) any_split |= !e.split.empty();
    out << "clip_id,wav_path,speaker_id,label_task,label_value";
    if (any_split) out << ",split";
    out << '\n';
    const fs::path base = fs::path(path).parent_path();
    for (const auto& e : manifest.entries) {
        for (const auto& [task, value] : e.labels) {
            fs::path wav(e.wav_path);
            auto rel = wav.lexically_relative(base);
            const std::string wav_str =
                (!rel.empty() && rel.native()[0] != '.') ? rel.string() : wav.string();
            out << e.clip_id << ',' << wav_str << ',' << e.speaker_id << ',' << task << ','
                << format_double(value);
            if (any_split) out << ',' << e.split;
            out << '\n';
        }
    }
    if (!out) throw IoError("manifest write failed: " + path);
}

CorpusManifest generate_synthetic_corpus(const SyntheticSpec& spec, const std::string& out_dir,
                                         model::TaskKind task) {
    if (spec.classes < 2) throw InvalidArgumentError("need at least 2 classes");
    if (spec.clips_per_class == 0) throw InvalidArgumentError("clips_per_class must be >= 1");
    if (spec.duration_seconds <= 0.0) throw InvalidArgumentError("duration must be positive");
    if (spec.classes > model::task_classes(task)) {
        throw InvalidArgumentError("task " + model::task_name(task) + " supports at most " +
                                   std::to_string(model::task_classes(task)) + " classes");
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) {
        throw IoError("cannot create output directory: " + out_dir);
    }

    const auto centers = train::task_bin_centers(task);
    const auto n_samples =
        static_cast<std::size_t>(std::llround(spec.duration_seconds * spec.sample_rate));

    CorpusManifest manifest;
    for (std::size_t c = 0; c < spec.classes; ++c) {
        const double f0 = 200.0 * static_cast<double>(c + 1);
        // Classes alternate between a dark and a bright harmonic profile in
        // addition to their fundamentals, so class means separate across many
        // mel bands, not just the fundamental's.
        const double brightness = static_cast<double>(c % 2);
        const double dark[3] = {0.55, 0.16, 0.05};
        const double bright[3] = {0.16, 0.28, 0.36};
        for (std::size_t j = 0; j < spec.clips_per_class; ++j) {
            std::mt19937_64 rng(derive_seed(spec.seed, "synth", c * spec.clips_per_class + j));
            double harmonics[3];
            for (int k = 0; k < 3; ++k) {
                const double base = dark[k] * (1.0 - brightness) + bright[k] * brightness;
                harmonics[k] = base * (1.0 + 0.1 * uniform_pm1(rng));
            }
            double phases[3];
            for (double& p : phases) p = 2.0 * std::numbers::pi * uniform01(rng);

            audio::AudioClip clip;
            clip.sample_rate = spec.sample_rate;
            clip.clip_id = "class" + std::to_string(c) + "_clip" + std::to_string(j);
            clip.samples.resize(n_samples);
            for (std::size_t t = 0; t < n_samples; ++t) {
                const double time = static_cast<double>(t) / spec.sample_rate;
                double v = 0.0;
                for (int k = 0; k < 3; ++k) {
                    v += harmonics[k] *
                         std::sin(2.0 * std::numbers::pi * (k + 1) * f0 * time + phases[k]);
                }
                v += 0.01 * uniform_pm1(rng);
                clip.samples[t] = std::clamp(v, -1.0, 1.0);
            }

            const std::string wav_path = (fs::path(out_dir) / (clip.clip_id + ".wav")).string();
            audio::save_wav(wav_path, clip);

            ManifestEntry entry;
            entry.clip_id = clip.clip_id;
            entry.wav_path = wav_path;
            entry.speaker_id = "spk_" + clip.clip_id;
            double raw;
            if (task == model::TaskKind::arousal || task == model::TaskKind::valence) {
                raw = centers[c];
            } else {
                raw = static_cast<double>(c);
            }
            entry.labels[model::task_name(task)] = raw;
            manifest.entries.push_back(std::move(entry));
        }
    }
    save_manifest(manifest, (fs::path(out_dir) / "manifest.csv").string());
    return manifest;
}

SplitIndices assign_splits(const CorpusManifest& manifest, std::uint64_t seed) {
    SplitIndices out;
    bool all_explicit = !manifest.entries.empty();
    for (const auto& e : manifest.entries) all_explicit &= !e.split.empty();
    if (all_explicit) {
        for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
            const auto& s = manifest.entries[i].split;
            if (s == "train") {
                out.train.push_back(i);
            } else if (s == "dev") {
                out.dev.push_back(i);
            } else if (s == "test") {
                out.test.push_back(i);
            } else {
                throw ValidationError("unknown split '" + s + "' for clip " +
                                      manifest.entries[i].clip_id);
            }
        }
        return out;
    }

    // Speaker-disjoint 70/15/15: all clips of a speaker stay together.
    std::map<std::string, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto& e = manifest.entries[i];
        const std::string key = e.speaker_id.empty() ? "#clip:" + e.clip_id : e.speaker_id;
        groups[key].push_back(i);
    }
    std::vector<std::vector<std::size_t>> group_list;
    group_list.reserve(groups.size());
    for (auto& [key, idx] : groups) group_list.push_back(std::move(idx));

    std::mt19937_64 rng(derive_seed(seed, "splits"));
    for (std::size_t i = group_list.size(); i > 1; --i) {
        std::swap(group_list[i - 1], group_list[uniform_below(rng, i)]);
    }

    const std::size_t total = manifest.entries.size();
    const auto train_target = static_cast<std::size_t>(std::llround(total * 0.70));
    const auto dev_target = static_cast<std::size_t>(std::llround(total * 0.15));
    for (const auto& g : group_list) {
        if (out.train.size() < train_target) {
            out.train.insert(out.train.end(), g.begin(), g.end());
        } else if (out.dev.size() < dev_target) {
            out.dev.insert(out.dev.end(), g.begin(), g.end());
        } else {
            out.test.insert(out.test.end(), g.begin(), g.end());
        }
    }
    // Tiny corpora: keep train and dev non-empty.
    if (out.dev.empty() && out.train.size() > 1) {
        out.dev.push_back(out.train.back());
        out.train.pop_back();
    }
    return out;
}

void write_feature_record(const std::string& path, const std::string& clip_id,
                          const std::vector<double>& values) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write feature record: " + path);
    auto put_u32 = [&out](std::uint32_t v) {
        out.write(reinterpret_cast<const char*>(&v), 4);
    };
    put_u32(static_cast<std::uint32_t>(clip_id.size()));
    out.write(clip_id.data(), static_cast<std::streamsize>(clip_id.size()));
    put_u32(static_cast<std::uint32_t>(values.size()));
    for (double v : values) {
        const float f = static_cast<float>(v);
        out.write(reinterpret_cast<const char*>(&f), 4);
    }
    if (!out) throw IoError("feature record write failed: " + path);
}

FeatureRecord read_feature_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open feature record: " + path);
    auto get_u32 = [&in, &path]() {
        std::uint32_t v;
        in.read(reinterpret_cast<char*>(&v), 4);
        if (!in) throw IntegrityError("feature record truncated: " + path);
        return v;
    };
    FeatureRecord rec;
    const auto id_len = get_u32();
    rec.clip_id.resize(id_len);
    in.read(rec.clip_id.data(), id_len);
    if (!in) throw IntegrityError("feature record truncated: " + path);
    const auto dim = get_u32();
    rec.values.resize(dim);
    for (auto& v : rec.values) {
        float f;
        in.read(reinterpret_cast<char*>(&f), 4);
        if (!in) throw IntegrityError("feature record truncated: " + path);
        v = static_cast<double>(f);
    }
    return rec;
}

std::vector<double> quantize_f32(const std::vector<double>& values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = static_cast<double>(static_cast<float>(values[i]));
    }
    return out;
}

FeatureCache::FeatureCache(std::string dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create cache directory: " + dir_);
}

std::string FeatureCache::record_path(const std::string& clip_id, const std::string& kind) const {
    return (fs::path(dir_) / (clip_id + "." + kind)).string();
}

std::optional<std::vector<double>> FeatureCache::lookup(const std::string& clip_id,
                                                        const std::string& kind,
                                                        std::uint64_t clip_hash,
                                                        std::uint64_t config_hash) const {
    const std::string rec = record_path(clip_id, kind);
    const std::string meta = rec + ".meta.json";
    if (!fs::exists(rec) || !fs::exists(meta)) return std::nullopt;
    try {
        std::ifstream in(meta);
        nlohmann::json j;
        in >> j;
        if (j.at("clip_hash").get<std::uint64_t>() != clip_hash ||
            j.at("config_hash").get<std::uint64_t>() != config_hash) {
            return std::nullopt;
        }
        return read_feature_record(rec).values;
    } catch (const std::exception&) {
        return std::nullopt;  // unreadable cache entries are treated as misses
    }
}

void FeatureCache::store(const std::string& clip_id, const std::string& kind,
                         std::uint64_t clip_hash, std::uint64_t config_hash,
                         const std::vector<double>& values) const {
    const std::string rec = record_path(clip_id, kind);
    write_feature_record(rec, clip_id, values);
    nlohmann::json j{{"clip_hash", clip_hash}, {"config_hash", config_hash}};
    std::ofstream out(rec + ".meta.json");
    if (!out) throw IoError("cannot write cache metadata: " + rec + ".meta.json");
    out << j.dump() << '\n';
}

std::uint64_t hash_file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        h = fnv1a64(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
        if (!in) break;
    }
    return h;
}

std::uint64_t hash_feature_config(const model::FeatureConfig& config, const std::string& kind) {
    std::ostringstream os;
    os << kind << "|rate=" << config.sample_rate << "|win=" << config.mfcc.window_seconds
       << "|hop=" << config.mfcc.hop_seconds << "|mel=" << config.mfcc.mel_filters
       << "|cpf=" << config.mfcc.cepstral_per_frame << "|dim=" << config.mfcc.output_dim
       << "|segments=" << spectro::kSegments << "|image=" << spectro::kImageSize;
    return fnv1a64(os.str());
}

std::string default_cache_dir(const std::string& manifest_path) {
    if (const char* env = std::getenv("EMOAUDIONET_CACHE_DIR"); env && *env) {
        return env;
    }
    return (fs::path(manifest_path).parent_path() / ".feature_cache").string();
}

}  // namespace emoaudionet::corpus
