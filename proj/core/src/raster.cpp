#include "segsynth/raster.hpp"

#include <algorithm>
#include <cmath>

#include "resample.hpp"

namespace segsynth {

std::string to_string(Size size) { return std::to_string(size.width) + "x" + std::to_string(size.height); }

bool BinaryMask::any() const {
    const auto v = data.values();
    return std::any_of(v.begin(), v.end(), [](std::uint8_t p) { return p != 0; });
}

std::size_t BinaryMask::count() const {
    const auto v = data.values();
    return static_cast<std::size_t>(std::count_if(v.begin(), v.end(), [](std::uint8_t p) { return p != 0; }));
}

RgbImage resize_bilinear(const RgbImage& image, Size target) {
    if (target.empty()) {
        throw RasterError("resize target must be positive, got " + to_string(target));
    }
    if (image.size() == target) {
        return image;
    }
    if (image.empty()) {
        throw RasterError("cannot resize an empty image");
    }
    const auto xs = detail::bilinear_taps(image.width(), target.width);
    const auto ys = detail::bilinear_taps(image.height(), target.height);
    RgbImage out(target);
    for (int y = 0; y < target.height; ++y) {
        const auto& ty = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < target.width; ++x) {
            const auto& tx = xs[static_cast<std::size_t>(x)];
            for (int c = 0; c < 3; ++c) {
                const double top = image.at(tx.lo, ty.lo, c) * (1.0 - tx.frac) + image.at(tx.hi, ty.lo, c) * tx.frac;
                const double bottom = image.at(tx.lo, ty.hi, c) * (1.0 - tx.frac) + image.at(tx.hi, ty.hi, c) * tx.frac;
                const double v = top * (1.0 - ty.frac) + bottom * ty.frac;
                out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
            }
        }
    }
    return out;
}

BinaryMask resize_mask(const BinaryMask& mask, Size target) {
    if (target.empty()) {
        throw RasterError("resize target must be positive, got " + to_string(target));
    }
    if (mask.size() == target) {
        return mask;
    }
    BinaryMask out{GrayImage(target), mask.class_id};
    const double sx = static_cast<double>(mask.size().width) / target.width;
    const double sy = static_cast<double>(mask.size().height) / target.height;
    for (int y = 0; y < target.height; ++y) {
        const int src_y = std::min(static_cast<int>((y + 0.5) * sy), mask.size().height - 1);
        for (int x = 0; x < target.width; ++x) {
            const int src_x = std::min(static_cast<int>((x + 0.5) * sx), mask.size().width - 1);
            out.data.at(x, y) = mask.data.at(src_x, src_y) != 0 ? 1 : 0;
        }
    }
    const double tx = static_cast<double>(target.width) / mask.size().width;
    const double ty = static_cast<double>(target.height) / mask.size().height;
    for (int y = 0; y < mask.size().height; ++y) {
        for (int x = 0; x < mask.size().width; ++x) {
            if (mask.data.at(x, y) != 0) {
                const int dx = std::min(static_cast<int>((x + 0.5) * tx), target.width - 1);
                const int dy = std::min(static_cast<int>((y + 0.5) * ty), target.height - 1);
                out.data.at(dx, dy) = 1;
            }
        }
    }
    return out;
}

}  // namespace segsynth
