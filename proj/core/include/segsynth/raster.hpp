#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "segsynth/errors.hpp"

namespace segsynth {

struct Size {
    int width = 0;
    int height = 0;

    [[nodiscard]] std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
    [[nodiscard]] bool empty() const { return width <= 0 || height <= 0; }
    friend bool operator==(const Size&, const Size&) = default;
};

std::string to_string(Size size);

/// Dense row-major raster with interleaved channels.
template <typename T, int Channels>
class Raster {
  public:
    static constexpr int channels = Channels;
    using value_type = T;

    Raster() = default;
    explicit Raster(Size size, T fill = T{})
        : size_(size), data_(checked_count(size), fill) {}
    Raster(Size size, std::vector<T> data) : size_(size), data_(std::move(data)) {
        if (data_.size() != checked_count(size)) {
            throw RasterError("raster buffer has " + std::to_string(data_.size()) + " values, expected " +
                              std::to_string(checked_count(size)) + " for " + to_string(size));
        }
    }

    [[nodiscard]] Size size() const { return size_; }
    [[nodiscard]] int width() const { return size_.width; }
    [[nodiscard]] int height() const { return size_.height; }
    [[nodiscard]] bool empty() const { return data_.empty(); }
    [[nodiscard]] std::size_t pixel_count() const { return size_.area(); }

    T& at(int x, int y, int c = 0) {
        assert(x >= 0 && x < size_.width && y >= 0 && y < size_.height && c >= 0 && c < Channels);
        return data_[index(x, y, c)];
    }
    const T& at(int x, int y, int c = 0) const {
        assert(x >= 0 && x < size_.width && y >= 0 && y < size_.height && c >= 0 && c < Channels);
        return data_[index(x, y, c)];
    }

    [[nodiscard]] std::span<T> values() { return data_; }
    [[nodiscard]] std::span<const T> values() const { return data_; }
    [[nodiscard]] const std::vector<T>& buffer() const { return data_; }

    friend bool operator==(const Raster&, const Raster&) = default;

  private:
    static std::size_t checked_count(Size size) {
        if (size.width < 0 || size.height < 0) {
            throw RasterError("negative raster dimensions " + to_string(size));
        }
        return size.area() * Channels;
    }
    [[nodiscard]] std::size_t index(int x, int y, int c) const {
        return (static_cast<std::size_t>(y) * size_.width + x) * Channels + c;
    }

    Size size_{};
    std::vector<T> data_;
};

/// 8-bit RGB image.
using RgbImage = Raster<std::uint8_t, 3>;
/// 8-bit single-channel raster (grayscale image or class-indexed label).
using GrayImage = Raster<std::uint8_t, 1>;

/// Class-indexed label raster. Pixel values are class ids, the background id or the void id.
struct LabelMask {
    GrayImage data;

    [[nodiscard]] Size size() const { return data.size(); }
    friend bool operator==(const LabelMask&, const LabelMask&) = default;
};

/// Per-class binary mask with values in {0,1}.
struct BinaryMask {
    GrayImage data;
    int class_id = -1;

    [[nodiscard]] Size size() const { return data.size(); }
    [[nodiscard]] bool test(int x, int y) const { return data.at(x, y) != 0; }
    [[nodiscard]] bool any() const;
    [[nodiscard]] std::size_t count() const;
    friend bool operator==(const BinaryMask&, const BinaryMask&) = default;
};

inline void require_same_size(Size a, Size b, const char* what) {
    if (a != b) {
        throw RasterError(std::string(what) + ": dimension mismatch " + to_string(a) + " vs " + to_string(b));
    }
}

/// Bilinear resample of an RGB image, half-pixel centers, rounding to nearest.
/// Resizing to the same size returns an identical copy.
RgbImage resize_bilinear(const RgbImage& image, Size target);

/// Nearest-neighbour resample of a binary mask, values stay in {0,1}. Every set source pixel also
/// sets the target pixel containing its center, so a non-empty mask never vanishes when shrunk.
BinaryMask resize_mask(const BinaryMask& mask, Size target);

}  // namespace segsynth
