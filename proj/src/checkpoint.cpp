#include "emoaudionet/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "emoaudionet/errors.hpp"

namespace emoaudionet::ckpt {

namespace {

constexpr char kMagic[4] = {'E', 'A', 'N', 'C'};
constexpr std::uint32_t kVersion = 1;

// The toolkit only targets little-endian hosts; writes are raw.
template <typename T>
void write_raw(std::ofstream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& in, const std::string& path) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw IntegrityError("checkpoint truncated: " + path);
    return v;
}

void write_doubles(std::ofstream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_doubles(std::ifstream& in, std::vector<double>& v, const std::string& path) {
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw IntegrityError("checkpoint truncated: " + path);
}

nlohmann::json meta_to_json(const CheckpointMeta& meta) {
    return {
        {"task", model::task_name(meta.task)},
        {"width", meta.width},
        {"spectro_size", meta.spectro_size},
        {"mfcc_dim", meta.mfcc_dim},
        {"seed", meta.seed},
        {"feature",
         {{"sample_rate", meta.features.sample_rate},
          {"mfcc",
           {{"window_seconds", meta.features.mfcc.window_seconds},
            {"hop_seconds", meta.features.mfcc.hop_seconds},
            {"mel_filters", meta.features.mfcc.mel_filters},
            {"cepstral_per_frame", meta.features.mfcc.cepstral_per_frame},
            {"output_dim", meta.features.mfcc.output_dim}}}}},
    };
}

CheckpointMeta meta_from_json(const nlohmann::json& j) {
    CheckpointMeta meta;
    meta.task = model::task_from_name(j.at("task").get<std::string>());
    meta.width = j.at("width").get<std::size_t>();
    meta.spectro_size = j.at("spectro_size").get<std::size_t>();
    meta.mfcc_dim = j.at("mfcc_dim").get<std::size_t>();
    meta.seed = j.at("seed").get<std::uint64_t>();
    const auto& f = j.at("feature");
    meta.features.sample_rate = f.at("sample_rate").get<std::uint32_t>();
    const auto& m = f.at("mfcc");
    meta.features.mfcc.window_seconds = m.at("window_seconds").get<double>();
    meta.features.mfcc.hop_seconds = m.at("hop_seconds").get<double>();
    meta.features.mfcc.mel_filters = m.at("mel_filters").get<std::size_t>();
    meta.features.mfcc.cepstral_per_frame = m.at("cepstral_per_frame").get<std::size_t>();
    meta.features.mfcc.output_dim = m.at("output_dim").get<std::size_t>();
    return meta;
}

}  // namespace

void save_checkpoint(model::TwoStreamModel& net, const CheckpointMeta& meta,
                     const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open checkpoint for writing: " + path);

    auto params = net.parameters();
    out.write(kMagic, 4);
    write_raw(out, kVersion);
    write_raw(out, static_cast<std::uint32_t>(params.size()));
    for (const auto* p : params) {
        write_raw(out, static_cast<std::uint32_t>(p->name.size()));
        out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
        const auto& shape = p->value.shape();
        write_raw(out, static_cast<std::uint32_t>(shape.size()));
        for (std::size_t d : shape) write_raw(out, static_cast<std::uint32_t>(d));
        write_doubles(out, p->value.values());
        write_doubles(out, p->adam_m);
        write_doubles(out, p->adam_v);
        write_raw(out, static_cast<std::uint64_t>(p->step_count));
    }
    if (!out) throw IoError("checkpoint write failed: " + path);
    out.close();

    std::ofstream side(path + ".json");
    if (!side) throw IoError("cannot write checkpoint sidecar: " + path + ".json");
    side << meta_to_json(meta).dump(2) << '\n';
}

CheckpointMeta read_checkpoint_meta(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw IoError("missing checkpoint sidecar: " + path + ".json");
    nlohmann::json j;
    try {
        side >> j;
        return meta_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError("bad checkpoint sidecar " + path + ".json: " + e.what());
    }
}

void load_checkpoint_into(model::TwoStreamModel& net, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open checkpoint: " + path);

    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw FormatError("bad checkpoint magic in " + path);
    }
    const auto version = read_raw<std::uint32_t>(in, path);
    if (version != kVersion) {
        throw FormatError("unsupported checkpoint version " + std::to_string(version) + " in " +
                          path);
    }

    auto params = net.parameters();
    const auto count = read_raw<std::uint32_t>(in, path);
    if (count != params.size()) {
        throw ShapeError("checkpoint has " + std::to_string(count) + " parameters, model has " +
                         std::to_string(params.size()));
    }

    for (auto* p : params) {
        const auto name_len = read_raw<std::uint32_t>(in, path);
        std::string name(name_len, '\0');
        in.read(name.data(), name_len);
        if (!in) throw IntegrityError("checkpoint truncated: " + path);
        const auto rank = read_raw<std::uint32_t>(in, path);
        std::vector<std::size_t> shape(rank);
        for (auto& d : shape) d = read_raw<std::uint32_t>(in, path);
        if (name != p->name || shape != p->value.shape()) {
            throw ShapeError("parameter " + p->name + ": checkpoint has '" + name + "' " +
                             nn::Tensor::shape_string(shape) + ", model expects " +
                             nn::Tensor::shape_string(p->value.shape()));
        }
        read_doubles(in, p->value.values(), path);
        read_doubles(in, p->adam_m, path);
        read_doubles(in, p->adam_v, path);
        p->step_count = read_raw<std::uint64_t>(in, path);
    }
}

model::TwoStreamModel load_checkpoint(const std::string& path, CheckpointMeta* meta_out) {
    const auto meta = read_checkpoint_meta(path);
    auto net = model::build_model(meta.task, meta.width, meta.spectro_size, meta.mfcc_dim,
                                  meta.seed);
    load_checkpoint_into(net, path);
    if (meta_out) *meta_out = meta;
    return net;
}

}  // namespace emoaudionet::ckpt
