#pragma once

#include <span>
#include <utility>
#include <vector>

#include "segsynth/class_map.hpp"
#include "segsynth/raster.hpp"

namespace segsynth {

/// One mask per class present in the label, ascending by class id. Background and void pixels
/// belong to no mask. Throws RasterError naming the value and its first (x, y) when a pixel
/// is not in the class map.
std::vector<BinaryMask> extract_class_masks(const LabelMask& label, const ClassMap& class_map);

/// Square-element dilation (side 2*radius+1). Radius 0 returns the mask unchanged.
BinaryMask dilate(const BinaryMask& mask, int radius);

/// Pointwise OR. An empty list yields an all-zero mask of `size`.
BinaryMask mask_union(std::span<const BinaryMask> masks, Size size);

/// Fraction of set pixels; 0 for an empty raster.
double coverage(const BinaryMask& mask);

struct Patch {
    const RgbImage* image = nullptr;
    const BinaryMask* mask = nullptr;
};

/// Pixel merge: each pixel takes the value of the patch whose mask covers it and keeps the
/// base value elsewhere. No blending. Masks must be pairwise disjoint; an overlap throws
/// RasterError naming both class ids and the first shared pixel.
RgbImage composite(const RgbImage& base, std::span<const Patch> patches);
RgbImage composite(const RgbImage& base, const std::vector<std::pair<RgbImage, BinaryMask>>& patches);

}  // namespace segsynth
