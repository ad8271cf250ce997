#include "emoaudionet/pngio.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include <zlib.h>

#include "emoaudionet/errors.hpp"

namespace emoaudionet::pngio {

namespace {

void put_u32_be(std::vector<unsigned char>& out, std::uint32_t v) {
    out.push_back(static_cast<unsigned char>(v >> 24));
    out.push_back(static_cast<unsigned char>(v >> 16));
    out.push_back(static_cast<unsigned char>(v >> 8));
    out.push_back(static_cast<unsigned char>(v));
}

void write_chunk(std::ofstream& out, const char type[4],
                 const std::vector<unsigned char>& payload) {
    std::vector<unsigned char> header;
    put_u32_be(header, static_cast<std::uint32_t>(payload.size()));
    out.write(reinterpret_cast<const char*>(header.data()), 4);
    out.write(type, 4);
    if (!payload.empty()) {
        out.write(reinterpret_cast<const char*>(payload.data()),
                  static_cast<std::streamsize>(payload.size()));
    }
    uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(type), 4);
    if (!payload.empty()) {
        crc = crc32(crc, payload.data(), static_cast<uInt>(payload.size()));
    }
    std::vector<unsigned char> tail;
    put_u32_be(tail, static_cast<std::uint32_t>(crc));
    out.write(reinterpret_cast<const char*>(tail.data()), 4);
}

}  // namespace

void write_png_rgb8(const std::string& path, const std::vector<unsigned char>& rgb,
                    std::size_t width, std::size_t height) {
    if (rgb.size() != width * height * 3) {
        throw InvalidArgumentError("png buffer size does not match dimensions");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write png: " + path);

    static const unsigned char signature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    out.write(reinterpret_cast<const char*>(signature), 8);

    std::vector<unsigned char> ihdr;
    put_u32_be(ihdr, static_cast<std::uint32_t>(width));
    put_u32_be(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(2);  // color type: truecolor
    ihdr.push_back(0);  // compression
    ihdr.push_back(0);  // filter
    ihdr.push_back(0);  // interlace
    write_chunk(out, "IHDR", ihdr);

    // Raw scanlines, each prefixed by filter byte 0.
    std::vector<unsigned char> raw;
    raw.reserve(height * (1 + width * 3));
    for (std::size_t y = 0; y < height; ++y) {
        raw.push_back(0);
        const unsigned char* row = rgb.data() + y * width * 3;
        raw.insert(raw.end(), row, row + width * 3);
    }

    uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
    std::vector<unsigned char> comp(comp_len);
    if (compress2(comp.data(), &comp_len, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK) {
        throw IoError("zlib compression failed for " + path);
    }
    comp.resize(comp_len);
    write_chunk(out, "IDAT", comp);
    write_chunk(out, "IEND", {});
    if (!out) throw IoError("png write failed: " + path);
}

}  // namespace emoaudionet::pngio
