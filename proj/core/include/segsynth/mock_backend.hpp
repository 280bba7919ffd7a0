#pragma once

#include <string>

#include "segsynth/backend.hpp"

namespace segsynth {

/// Deterministic stand-in for the diffusion worker. Every response is a pure function of the
/// request, so runs against it are byte-reproducible. Priors are quantized to 8 bits before use,
/// which makes in-process calls agree with calls that went over the wire.
///
/// img2img: the reference image (resized to the output size) is blended toward a seeded colour
/// field at ratio `strength`; the field carries the prior's edges as dark strokes.
/// inpaint: masked pixels get a texture hashed from the seed and prompt; pixels outside the
/// mask receive +-1 seeded jitter, so the caller must composite to keep them exact.
class MockBackend final : public GenerationBackend {
  public:
    Health health() override;
    GenResponse img2img(const Img2ImgRequest& request) override;
    GenResponse inpaint(const InpaintRequest& request) override;
    /// "a photo of n1 and n2 ..."; "a photo" with no names.
    std::string caption(const CaptionRequest& request) override;
    /// Classical edge map with default parameters, resized nowhere.
    VisualPrior prior(const PriorRequest& request) override;

    [[nodiscard]] std::string name() const override { return "mock"; }
};

}  // namespace segsynth
