#pragma once

#include <string>
#include <vector>

#include "emoaudionet/corpus.hpp"
#include "emoaudionet/train.hpp"

namespace emoaudionet::cli {

/// Entry point for the emoaudionet tool. Subcommands: synth, extract,
/// augment, train, eval, predict. Returns 0 on success, 1 on validation
/// errors, 2 on I/O errors; diagnostics go to stderr.
int dispatch(int argc, const char* const* argv);

/// TrainConfig from a JSON object mirroring its field names; missing fields
/// keep their defaults.
train::TrainConfig train_config_from_json_file(const std::string& path);

/// Computes (or fetches from `cache`) both feature tensors for a manifest
/// entry, quantized through f32 like the on-disk records.
train::LabeledExample featurize_entry(const corpus::ManifestEntry& entry,
                                      const model::FeatureConfig& features,
                                      const corpus::FeatureCache& cache, model::TaskKind task);

}  // namespace emoaudionet::cli
