#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "segsynth/prompting.hpp"
#include "segsynth/raster.hpp"
#include "segsynth/visual_prior.hpp"

namespace segsynth {

enum class Capability { Img2Img, Inpaint, Caption, Prior };

std::string to_string(Capability capability);
Capability parse_capability(const std::string& text);

struct GenParams {
    double strength = 0.75;
    int steps = 30;
    double guidance_scale = 7.5;

    void validate() const;
    friend bool operator==(const GenParams&, const GenParams&) = default;
};

/// Whole-image guided regeneration: reference image, blended prior and prompt.
struct Img2ImgRequest {
    RgbImage image;
    VisualPrior prior;
    PromptSpec prompt;
    GenParams params;
    std::uint64_t seed = 0;
    Size output;

    /// Throws ProtocolError when the prior does not match the output size, the output size is not
    /// a positive multiple of 8, or a parameter is out of range.
    void validate() const;
    friend bool operator==(const Img2ImgRequest&, const Img2ImgRequest&) = default;
};

/// Masked regeneration of one class region.
struct InpaintRequest {
    Img2ImgRequest base;
    BinaryMask mask;

    /// Adds mask checks: output size and at least one set pixel.
    void validate() const;
    friend bool operator==(const InpaintRequest&, const InpaintRequest&) = default;
};

struct GenResponse {
    RgbImage image;
    std::uint64_t seed_used = 0;
    std::string backend_info;

    friend bool operator==(const GenResponse&, const GenResponse&) = default;
};

struct CaptionRequest {
    RgbImage image;
    std::vector<std::string> class_names;

    friend bool operator==(const CaptionRequest&, const CaptionRequest&) = default;
};

struct PriorRequest {
    RgbImage image;
    std::string kind = "lineart";

    friend bool operator==(const PriorRequest&, const PriorRequest&) = default;
};

struct Health {
    std::string status;
    std::set<Capability> capabilities;

    [[nodiscard]] bool has(Capability c) const { return capabilities.contains(c); }
    friend bool operator==(const Health&, const Health&) = default;
};

/// Generation service contract. Implementations must be callable from several threads.
class GenerationBackend {
  public:
    virtual ~GenerationBackend() = default;

    virtual Health health() = 0;
    virtual GenResponse img2img(const Img2ImgRequest& request) = 0;
    virtual GenResponse inpaint(const InpaintRequest& request) = 0;
    virtual std::string caption(const CaptionRequest& request) = 0;
    virtual VisualPrior prior(const PriorRequest& request) = 0;

    [[nodiscard]] virtual std::string name() const = 0;
};

}  // namespace segsynth
