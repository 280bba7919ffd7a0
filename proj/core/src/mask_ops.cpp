#include "segsynth/mask_ops.hpp"

#include <algorithm>
#include <array>

namespace segsynth {
namespace {

std::string coord(int x, int y) { return "(" + std::to_string(x) + ", " + std::to_string(y) + ")"; }

// Running max over a window of 2*radius+1 along one axis, clipped at the borders.
void dilate_rows(const GrayImage& in, GrayImage& out, int radius) {
    const int w = in.width();
    for (int y = 0; y < in.height(); ++y) {
        // distance to the nearest set pixel at or left of x, tracked left-to-right and right-to-left
        int last = -radius - 1;
        for (int x = 0; x < w; ++x) {
            if (in.at(x, y)) last = x;
            out.at(x, y) = x - last <= radius ? 1 : 0;
        }
        int next = w + radius;
        for (int x = w - 1; x >= 0; --x) {
            if (in.at(x, y)) next = x;
            if (next - x <= radius) out.at(x, y) = 1;
        }
    }
}

void dilate_cols(const GrayImage& in, GrayImage& out, int radius) {
    const int h = in.height();
    for (int x = 0; x < in.width(); ++x) {
        int last = -radius - 1;
        for (int y = 0; y < h; ++y) {
            if (in.at(x, y)) last = y;
            out.at(x, y) = y - last <= radius ? 1 : 0;
        }
        int next = h + radius;
        for (int y = h - 1; y >= 0; --y) {
            if (in.at(x, y)) next = y;
            if (next - y <= radius) out.at(x, y) = 1;
        }
    }
}

}  // namespace

std::vector<BinaryMask> extract_class_masks(const LabelMask& label, const ClassMap& class_map) {
    const auto& data = label.data;
    // slot per possible label value; -1 = not yet seen
    std::array<int, 256> slot;
    slot.fill(-1);
    std::vector<int> ids;
    for (int y = 0; y < data.height(); ++y) {
        for (int x = 0; x < data.width(); ++x) {
            const int v = data.at(x, y);
            if (slot[static_cast<std::size_t>(v)] != -1) {
                continue;
            }
            if (!class_map.is_known(v)) {
                throw RasterError("label value " + std::to_string(v) + " at " + coord(x, y) +
                                  " is not in the class map");
            }
            slot[static_cast<std::size_t>(v)] = -2;
            if (class_map.is_class(v)) {
                ids.push_back(v);
            }
        }
    }
    std::sort(ids.begin(), ids.end());

    std::vector<BinaryMask> masks;
    masks.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        slot[static_cast<std::size_t>(ids[i])] = static_cast<int>(i);
        masks.push_back(BinaryMask{GrayImage(data.size()), ids[i]});
    }
    for (int y = 0; y < data.height(); ++y) {
        for (int x = 0; x < data.width(); ++x) {
            const int s = slot[data.at(x, y)];
            if (s >= 0) {
                masks[static_cast<std::size_t>(s)].data.at(x, y) = 1;
            }
        }
    }
    return masks;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    if (radius < 0) {
        throw RasterError("dilation radius must be non-negative, got " + std::to_string(radius));
    }
    if (radius == 0 || mask.data.empty()) {
        return mask;
    }
    // the square element is separable: rows then columns
    GrayImage horizontal(mask.size());
    dilate_rows(mask.data, horizontal, radius);
    BinaryMask out{GrayImage(mask.size()), mask.class_id};
    dilate_cols(horizontal, out.data, radius);
    return out;
}

BinaryMask mask_union(std::span<const BinaryMask> masks, Size size) {
    BinaryMask out{GrayImage(size), -1};
    auto dst = out.data.values();
    for (const auto& m : masks) {
        require_same_size(m.size(), size, "mask union");
        const auto src = m.data.values();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            dst[i] = (dst[i] | src[i]) != 0 ? 1 : 0;
        }
    }
    return out;
}

double coverage(const BinaryMask& mask) {
    const std::size_t total = mask.data.pixel_count();
    return total == 0 ? 0.0 : static_cast<double>(mask.count()) / static_cast<double>(total);
}

RgbImage composite(const RgbImage& base, std::span<const Patch> patches) {
    const Size size = base.size();
    if (patches.size() >= 0xFFFF) {
        throw RasterError("composite: too many patches");
    }
    for (const auto& p : patches) {
        if (p.image == nullptr || p.mask == nullptr) {
            throw RasterError("composite: null patch");
        }
        require_same_size(p.image->size(), size, "composite patch image vs base");
        require_same_size(p.mask->size(), size, "composite patch mask vs base");
    }
    // owner[i] = index+1 of the patch covering pixel i
    std::vector<std::uint16_t> owner(size.area(), 0);
    for (std::size_t k = 0; k < patches.size(); ++k) {
        const auto m = patches[k].mask->data.values();
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) {
                continue;
            }
            if (owner[i] != 0) {
                const auto& other = patches[owner[i] - 1u];
                const int x = static_cast<int>(i % static_cast<std::size_t>(size.width));
                const int y = static_cast<int>(i / static_cast<std::size_t>(size.width));
                throw RasterError("composite: masks of classes " + std::to_string(other.mask->class_id) + " and " +
                                  std::to_string(patches[k].mask->class_id) + " overlap at " + coord(x, y));
            }
            owner[i] = static_cast<std::uint16_t>(k + 1);
        }
    }
    RgbImage out = base;
    auto dst = out.values();
    for (std::size_t i = 0; i < owner.size(); ++i) {
        if (owner[i] == 0) {
            continue;
        }
        const auto src = patches[owner[i] - 1u].image->values();
        dst[3 * i] = src[3 * i];
        dst[3 * i + 1] = src[3 * i + 1];
        dst[3 * i + 2] = src[3 * i + 2];
    }
    return out;
}

RgbImage composite(const RgbImage& base, const std::vector<std::pair<RgbImage, BinaryMask>>& patches) {
    std::vector<Patch> views;
    views.reserve(patches.size());
    for (const auto& [image, mask] : patches) {
        views.push_back({&image, &mask});
    }
    return composite(base, views);
}

}  // namespace segsynth
