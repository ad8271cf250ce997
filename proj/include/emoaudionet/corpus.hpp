#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emoaudionet/model.hpp"

namespace emoaudionet::corpus {

struct ManifestEntry {
    std::string clip_id;
    std::string wav_path;  // resolved against the manifest directory
    std::string speaker_id;
    std::map<std::string, double> labels;  // task name -> raw value
    std::string split;                     // optional: train/dev/test
};

struct CorpusManifest {
    std::vector<ManifestEntry> entries;
};

/// CSV with header clip_id,wav_path,speaker_id,label_task,label_value and an
/// optional trailing split column. Relative wav paths resolve against the
/// manifest location; every referenced file must exist.
CorpusManifest load_manifest(const std::string& path);

void save_manifest(const CorpusManifest& manifest, const std::string& path);

struct SyntheticSpec {
    std::size_t classes = 2;
    std::size_t clips_per_class = 20;
    double duration_seconds = 4.0;
    std::uint32_t sample_rate = 16000;
    std::uint64_t seed = 0;
};

/// Writes WAVs of harmonic tones (class c has fundamental 200*(c+1) Hz, plus
/// mild seeded noise) and a manifest labeled for `task`. Deterministic per
/// seed, byte for byte.
CorpusManifest generate_synthetic_corpus(const SyntheticSpec& spec, const std::string& out_dir,
                                         model::TaskKind task = model::TaskKind::depression_binary);

struct SplitIndices {
    std::vector<std::size_t> train, dev, test;
};

/// Uses explicit manifest split assignments when every entry carries one;
/// otherwise splits 70/15/15, keeping all clips of a speaker in one split.
SplitIndices assign_splits(const CorpusManifest& manifest, std::uint64_t seed);

// ---------------------------------------------------------- feature records

/// Binary record: u32 clip_id length, clip_id bytes, u32 dim, then dim
/// little-endian f32 values.
void write_feature_record(const std::string& path, const std::string& clip_id,
                          const std::vector<double>& values);

struct FeatureRecord {
    std::string clip_id;
    std::vector<double> values;  // widened from f32
};

FeatureRecord read_feature_record(const std::string& path);

/// Quantizes through f32 exactly as the on-disk record does, so cached and
/// freshly computed features are bit-identical.
std::vector<double> quantize_f32(const std::vector<double>& values);

// ------------------------------------------------------------------- cache

/// Content-addressed feature cache: an entry is reused only when both the
/// clip-bytes hash and the feature-config hash match its metadata.
class FeatureCache {
public:
    explicit FeatureCache(std::string dir);

    std::optional<std::vector<double>> lookup(const std::string& clip_id, const std::string& kind,
                                              std::uint64_t clip_hash,
                                              std::uint64_t config_hash) const;
    void store(const std::string& clip_id, const std::string& kind, std::uint64_t clip_hash,
               std::uint64_t config_hash, const std::vector<double>& values) const;

    const std::string& dir() const { return dir_; }

private:
    std::string record_path(const std::string& clip_id, const std::string& kind) const;
    std::string dir_;
};

std::uint64_t hash_file_bytes(const std::string& path);
std::uint64_t hash_feature_config(const model::FeatureConfig& config, const std::string& kind);

/// EMOAUDIONET_CACHE_DIR when set, else `<manifest_dir>/.feature_cache`.
std::string default_cache_dir(const std::string& manifest_path);

}  // namespace emoaudionet::corpus
