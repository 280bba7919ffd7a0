#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segsynth/raster.hpp"

namespace segsynth {

using Bytes = std::vector<std::uint8_t>;

/// An indexed-palette raster: pixel values are palette indices.
struct IndexedImage {
    GrayImage indices;
    std::vector<std::array<std::uint8_t, 3>> palette;  // empty for plain grayscale sources
};

/// Decodes PNG or JPEG into 8-bit RGB. Palette, grayscale, alpha and 16-bit sources are converted.
RgbImage decode_rgb(std::span<const std::uint8_t> encoded);
RgbImage read_rgb(const std::filesystem::path& path);

/// Reads a PNG without colour conversion. Palette images yield raw indices plus the palette;
/// 8-bit grayscale images yield their intensities with an empty palette.
IndexedImage read_indexed(const std::filesystem::path& path);
IndexedImage decode_indexed(std::span<const std::uint8_t> encoded);

/// Lossless encodes. Output bytes are a deterministic function of the pixels.
Bytes encode_png(const RgbImage& image);
Bytes encode_png(const GrayImage& image);

/// Palette PNG; an empty palette writes plain 8-bit grayscale.
Bytes encode_png(const IndexedImage& image);

void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_png(const std::filesystem::path& path, const IndexedImage& image);
void write_png(const std::filesystem::path& path, const GrayImage& image);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace segsynth
