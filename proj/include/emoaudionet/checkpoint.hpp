#pragma once

#include <string>

#include "emoaudionet/model.hpp"

namespace emoaudionet::ckpt {

/// Everything needed to rebuild a compatible model before loading weights.
struct CheckpointMeta {
    model::TaskKind task = model::TaskKind::depression_binary;
    std::size_t width = 128;
    std::size_t spectro_size = 224;
    std::size_t mfcc_dim = 177;
    std::uint64_t seed = 0;
    model::FeatureConfig features;
};

/// Binary container: magic "EANC", format version u32, parameter count u32,
/// then per parameter: name (u32 length + UTF-8), rank u32, dims u32[],
/// values f64[], ADAM first and second moments f64[], step count u64.
/// Little-endian throughout. A JSON sidecar at <path>.json carries the meta.
void save_checkpoint(model::TwoStreamModel& model, const CheckpointMeta& meta,
                     const std::string& path);

/// Rebuilds the model described by the sidecar and loads every parameter and
/// moment bit-exactly. Throws FormatError (magic/version), IntegrityError
/// (truncation), ShapeError (first mismatched parameter), ConfigError
/// (requested task differs from the sidecar).
model::TwoStreamModel load_checkpoint(const std::string& path, CheckpointMeta* meta_out = nullptr);

/// Loads checkpoint weights into an existing model (shapes must match).
void load_checkpoint_into(model::TwoStreamModel& model, const std::string& path);

CheckpointMeta read_checkpoint_meta(const std::string& path);

}  // namespace emoaudionet::ckpt
