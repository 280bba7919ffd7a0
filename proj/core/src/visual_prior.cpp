#include "segsynth/visual_prior.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "resample.hpp"

namespace segsynth {
namespace {

using Plane = Raster<double, 1>;

Plane luma(const RgbImage& image) {
    Plane out(image.size());
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            out.at(x, y) = 0.299 * image.at(x, y, 0) + 0.587 * image.at(x, y, 1) + 0.114 * image.at(x, y, 2);
        }
    }
    return out;
}

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = v;
        sum += v;
    }
    for (auto& v : k) v /= sum;
    return k;
}

// Separable convolution with replicated borders.
Plane gaussian_blur(const Plane& in, double sigma) {
    if (sigma <= 0.0) {
        return in;
    }
    const auto k = gaussian_kernel(sigma);
    const int r = static_cast<int>(k.size() / 2);
    const int w = in.width();
    const int h = in.height();
    Plane tmp(in.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                acc += k[static_cast<std::size_t>(i + r)] * in.at(std::clamp(x + i, 0, w - 1), y);
            }
            tmp.at(x, y) = acc;
        }
    }
    Plane out(in.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) {
                acc += k[static_cast<std::size_t>(i + r)] * tmp.at(x, std::clamp(y + i, 0, h - 1));
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

// Sliding min/max along one axis, window [i - radius, i + radius] clipped to the raster.
template <bool Horizontal>
void min_max_pass(const GrayImage& lo_in, const GrayImage& hi_in, GrayImage& lo_out, GrayImage& hi_out, int radius) {
    const int w = lo_in.width();
    const int h = lo_in.height();
    const int outer = Horizontal ? h : w;
    const int inner = Horizontal ? w : h;
    for (int o = 0; o < outer; ++o) {
        for (int i = 0; i < inner; ++i) {
            std::uint8_t lo = 255;
            std::uint8_t hi = 0;
            const int from = std::max(0, i - radius);
            const int to = std::min(inner - 1, i + radius);
            for (int j = from; j <= to; ++j) {
                const int x = Horizontal ? j : o;
                const int y = Horizontal ? o : j;
                lo = std::min(lo, lo_in.at(x, y));
                hi = std::max(hi, hi_in.at(x, y));
            }
            const int x = Horizontal ? i : o;
            const int y = Horizontal ? o : i;
            lo_out.at(x, y) = lo;
            hi_out.at(x, y) = hi;
        }
    }
}

}  // namespace

std::string to_string(PriorSource source) {
    switch (source) {
        case PriorSource::Image: return "image";
        case PriorSource::Label: return "label";
        case PriorSource::Blended: return "blended";
    }
    return "unknown";
}

void EdgeParams::validate() const {
    if (!(low_threshold >= 0.0 && low_threshold < high_threshold && high_threshold <= 1.0)) {
        throw ConfigError("edge_params: thresholds must satisfy 0 <= low < high <= 1 (got low=" +
                          std::to_string(low_threshold) + ", high=" + std::to_string(high_threshold) + ")");
    }
    if (!(blur_sigma >= 0.0) || !std::isfinite(blur_sigma)) {
        throw ConfigError("edge_params.blur_sigma must be a finite value >= 0");
    }
}

VisualPrior edges_from_image(const RgbImage& image, const EdgeParams& params) {
    params.validate();
    const int w = image.width();
    const int h = image.height();
    VisualPrior out{Raster<float, 1>(image.size(), 0.0f), PriorSource::Image};
    if (w == 0 || h == 0) {
        return out;
    }
    const Plane smooth = gaussian_blur(luma(image), params.blur_sigma);
    auto px = [&](int x, int y) { return smooth.at(std::clamp(x, 0, w - 1), std::clamp(y, 0, h - 1)); };

    Plane magnitude(image.size());
    Raster<std::uint8_t, 1> direction(image.size());  // 0: horizontal gradient, 1: 45deg, 2: vertical, 3: 135deg
    double peak = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
            const double gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
                              (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
            const double m = std::hypot(gx, gy);
            magnitude.at(x, y) = m;
            peak = std::max(peak, m);
            double angle = std::atan2(gy, gx) * 180.0 / M_PI;
            if (angle < 0) angle += 180.0;
            std::uint8_t d = 0;
            if (angle >= 22.5 && angle < 67.5) d = 1;
            else if (angle >= 67.5 && angle < 112.5) d = 2;
            else if (angle >= 112.5 && angle < 157.5) d = 3;
            direction.at(x, y) = d;
        }
    }
    if (peak < 1e-6) {
        return out;
    }

    // non-maximum suppression; ties along the gradient keep the first pixel only
    static constexpr int kDx[4] = {1, 1, 0, -1};
    static constexpr int kDy[4] = {0, 1, 1, 1};
    Plane thin(image.size(), 0.0);
    auto mag_or_zero = [&](int x, int y) { return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : magnitude.at(x, y); };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = magnitude.at(x, y);
            if (m <= 0.0) continue;
            const int d = direction.at(x, y);
            const double before = mag_or_zero(x - kDx[d], y - kDy[d]);
            const double after = mag_or_zero(x + kDx[d], y + kDy[d]);
            if (m > before && m >= after) {
                thin.at(x, y) = m / peak;
            }
        }
    }

    // hysteresis: weak pixels survive when 8-connected to a strong one
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (thin.at(x, y) >= params.high_threshold) {
                out.data.at(x, y) = static_cast<float>(thin.at(x, y));
                queue.emplace_back(x, y);
            }
        }
    }
    while (!queue.empty()) {
        const auto [cx, cy] = queue.front();
        queue.pop_front();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = cx + dx;
                const int ny = cy + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h || out.data.at(nx, ny) > 0.0f) continue;
                const double v = thin.at(nx, ny);
                if (v > 0.0 && v >= params.low_threshold) {
                    out.data.at(nx, ny) = static_cast<float>(v);
                    queue.emplace_back(nx, ny);
                }
            }
        }
    }
    return out;
}

VisualPrior prior_from_label(const LabelMask& label, const ClassMap& class_map, int boundary_width) {
    if (boundary_width < 1) {
        throw ConfigError("boundary_width must be >= 1, got " + std::to_string(boundary_width));
    }
    const Size size = label.size();
    VisualPrior out{Raster<float, 1>(size, 0.0f), PriorSource::Label};
    if (size.empty()) {
        return out;
    }
    // a window holds two different values exactly when its min and max differ
    GrayImage lo_h(size), hi_h(size), lo(size), hi(size);
    min_max_pass<true>(label.data, label.data, lo_h, hi_h, boundary_width);
    min_max_pass<false>(lo_h, hi_h, lo, hi, boundary_width);
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            if (class_map.is_class(label.data.at(x, y)) && lo.at(x, y) != hi.at(x, y)) {
                out.data.at(x, y) = 1.0f;
            }
        }
    }
    return out;
}

VisualPrior blend(const VisualPrior& vi, const VisualPrior& vs, double alpha) {
    require_same_size(vi.size(), vs.size(), "blend");
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw ConfigError("alpha must lie in [0,1], got " + std::to_string(alpha));
    }
    VisualPrior out{Raster<float, 1>(vi.size()), PriorSource::Blended};
    const auto a = vi.data.values();
    const auto s = vs.data.values();
    auto dst = out.data.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const double v = alpha * static_cast<double>(a[i]) + static_cast<double>(s[i]);
        dst[i] = static_cast<float>(std::min(1.0, v));
    }
    return out;
}

VisualPrior resize_prior(const VisualPrior& prior, Size target) {
    if (target.empty()) {
        throw RasterError("resize target must be positive, got " + to_string(target));
    }
    if (prior.size() == target) {
        return prior;
    }
    if (prior.data.empty()) {
        throw RasterError("cannot resize an empty prior");
    }
    const auto xs = detail::bilinear_taps(prior.size().width, target.width);
    const auto ys = detail::bilinear_taps(prior.size().height, target.height);
    VisualPrior out{Raster<float, 1>(target), prior.source};
    const auto& src = prior.data;
    for (int y = 0; y < target.height; ++y) {
        const auto& ty = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < target.width; ++x) {
            const auto& tx = xs[static_cast<std::size_t>(x)];
            const double top = src.at(tx.lo, ty.lo) * (1.0 - tx.frac) + src.at(tx.hi, ty.lo) * tx.frac;
            const double bottom = src.at(tx.lo, ty.hi) * (1.0 - tx.frac) + src.at(tx.hi, ty.hi) * tx.frac;
            out.data.at(x, y) = static_cast<float>(std::clamp(top * (1.0 - ty.frac) + bottom * ty.frac, 0.0, 1.0));
        }
    }
    return out;
}

GrayImage prior_to_gray(const VisualPrior& prior) {
    GrayImage out(prior.size());
    const auto src = prior.data.values();
    auto dst = out.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const double v = std::clamp(static_cast<double>(src[i]), 0.0, 1.0);
        dst[i] = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
    }
    return out;
}

VisualPrior prior_from_gray(const GrayImage& gray, PriorSource source) {
    VisualPrior out{Raster<float, 1>(gray.size()), source};
    const auto src = gray.values();
    auto dst = out.data.values();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        dst[i] = static_cast<float>(src[i] / 255.0);
    }
    return out;
}

}  // namespace segsynth
