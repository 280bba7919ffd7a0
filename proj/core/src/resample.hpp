#pragma once

#include <algorithm>
#include <vector>

namespace segsynth::detail {

/// Source taps for one destination coordinate of a bilinear resample.
struct Tap {
    int lo = 0;
    int hi = 0;
    double frac = 0.0;  // weight of hi
};

/// Half-pixel-center mapping: src = (dst + 0.5) * src_len / dst_len - 0.5, clamped to the edge.
inline std::vector<Tap> bilinear_taps(int src_len, int dst_len) {
    std::vector<Tap> taps(static_cast<std::size_t>(dst_len));
    const double scale = static_cast<double>(src_len) / dst_len;
    for (int d = 0; d < dst_len; ++d) {
        double s = (d + 0.5) * scale - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(src_len - 1));
        const int lo = static_cast<int>(s);
        const int hi = std::min(lo + 1, src_len - 1);
        taps[static_cast<std::size_t>(d)] = Tap{lo, hi, s - lo};
    }
    return taps;
}

}  // namespace segsynth::detail
