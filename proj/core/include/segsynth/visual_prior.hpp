#pragma once

#include <string>

#include "segsynth/class_map.hpp"
#include "segsynth/raster.hpp"

namespace segsynth {

enum class PriorSource { Image, Label, Blended };

std::string to_string(PriorSource source);

/// Single-channel structural guide with values in [0,1].
struct VisualPrior {
    Raster<float, 1> data;
    PriorSource source = PriorSource::Image;

    [[nodiscard]] Size size() const { return data.size(); }
    friend bool operator==(const VisualPrior&, const VisualPrior&) = default;
};

struct EdgeParams {
    double low_threshold = 0.1;
    double high_threshold = 0.3;
    double blur_sigma = 1.4;

    /// Throws ConfigError unless 0 <= low < high <= 1 and sigma >= 0.
    void validate() const;
    friend bool operator==(const EdgeParams&, const EdgeParams&) = default;
};

/// Canny-style edge map of the image: luma, Gaussian blur, Sobel gradient, non-maximum
/// suppression and hysteresis. Thresholds are fractions of the strongest gradient in the
/// image; surviving pixels carry their normalized gradient magnitude, all others are zero.
VisualPrior edges_from_image(const RgbImage& image, const EdgeParams& params);

/// Outline rendering of the label. A pixel is 1 when it holds a class id and some pixel within
/// Chebyshev distance `boundary_width` holds a different value; 0 otherwise. Background and
/// void pixels are never marked, so background/void seams produce no outline.
VisualPrior prior_from_label(const LabelMask& label, const ClassMap& class_map, int boundary_width);

/// min(1, alpha * vi + vs) per pixel. Throws RasterError on size mismatch and ConfigError when
/// alpha is outside [0,1].
VisualPrior blend(const VisualPrior& vi, const VisualPrior& vs, double alpha);

/// Bilinear resample with half-pixel centers, clamped to [0,1]. Same-size input is copied.
VisualPrior resize_prior(const VisualPrior& prior, Size target);

/// round-half-up(value * 255).
GrayImage prior_to_gray(const VisualPrior& prior);
VisualPrior prior_from_gray(const GrayImage& gray, PriorSource source);

}  // namespace segsynth
