#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "icd/image.hpp"

namespace icd::io {

// Raw float grid as stored in a PFM file: 1 (Pf) or 3 (PF) channels,
// top-to-bottom rows in memory.
struct FloatMap {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 0;
    std::vector<double> data;
};

// Reads either byte order; throws ParseError with the byte offset of the
// first malformed token or of the truncated data block.
FloatMap read_pfm(const std::filesystem::path& path);
FloatMap parse_pfm(const std::vector<unsigned char>& bytes);

// Writes little-endian (scale -1.0), rows bottom-to-top as the format requires.
void write_pfm(const std::filesystem::path& path, const FloatMap& map);

template <std::size_t C, class T>
FloatMap to_float_map(const Field<C, T>& f) {
    return {f.width(), f.height(), C, std::vector<double>(f.values().begin(), f.values().end())};
}

// Converts to a typed field, throwing DimensionError on a channel-count mismatch.
template <class FieldT>
FieldT from_float_map(const FloatMap& m, const std::string& what) {
    if (m.channels != FieldT::channels) {
        throw DimensionError(what + ": expected " + std::to_string(FieldT::channels) +
                             "-channel map, got " + std::to_string(m.channels));
    }
    return FieldT(m.width, m.height, m.data);
}

struct LoadedImage {
    RgbImage image;
    int bit_depth = 8;
};

// PNG (8/16-bit, gray/RGB, alpha dropped) and binary or ASCII PNM (P2/P3/P5/P6).
// Values are normalized by 255 or 65535; gray inputs are replicated to RGB.
LoadedImage read_image(const std::filesystem::path& path);

// 8-bit RGB PNG, quantized with round(v * 255) after clamping to [0, 1].
void write_png(const std::filesystem::path& path, const RgbImage& img);

unsigned char quantize8(double v) noexcept;

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::vector<unsigned char> read_file(const std::filesystem::path& path);

bool is_image_path(const std::filesystem::path& path);

} // namespace icd::io
