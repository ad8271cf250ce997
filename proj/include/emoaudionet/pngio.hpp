#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace emoaudionet::pngio {

/// Writes an 8-bit RGB PNG (one zlib-compressed IDAT, filter type 0).
void write_png_rgb8(const std::string& path, const std::vector<unsigned char>& rgb,
                    std::size_t width, std::size_t height);

}  // namespace emoaudionet::pngio
