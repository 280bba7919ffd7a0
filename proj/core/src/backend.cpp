#include "segsynth/backend.hpp"

#include <cmath>

namespace segsynth {
namespace {

void validate_output(Size output) {
    if (output.width <= 0 || output.height <= 0 || output.width % 8 != 0 || output.height % 8 != 0) {
        throw ProtocolError("output size " + to_string(output) + " must be positive multiples of 8");
    }
}

}  // namespace

std::string to_string(Capability capability) {
    switch (capability) {
        case Capability::Img2Img: return "img2img";
        case Capability::Inpaint: return "inpaint";
        case Capability::Caption: return "caption";
        case Capability::Prior: return "prior";
    }
    return "unknown";
}

Capability parse_capability(const std::string& text) {
    if (text == "img2img") return Capability::Img2Img;
    if (text == "inpaint") return Capability::Inpaint;
    if (text == "caption") return Capability::Caption;
    if (text == "prior") return Capability::Prior;
    throw ProtocolError("unknown capability '" + text + "'");
}

void GenParams::validate() const {
    if (!(strength > 0.0 && strength <= 1.0)) {
        throw ProtocolError("strength must lie in (0,1], got " + std::to_string(strength));
    }
    if (steps <= 0) {
        throw ProtocolError("steps must be positive, got " + std::to_string(steps));
    }
    if (!(guidance_scale > 0.0) || !std::isfinite(guidance_scale)) {
        throw ProtocolError("guidance_scale must be positive, got " + std::to_string(guidance_scale));
    }
}

void Img2ImgRequest::validate() const {
    validate_output(output);
    if (image.empty()) {
        throw ProtocolError("request image is empty");
    }
    if (prior.size() != output) {
        throw ProtocolError("prior is " + to_string(prior.size()) + " but output is " + to_string(output));
    }
    params.validate();
}

void InpaintRequest::validate() const {
    base.validate();
    if (mask.size() != base.output) {
        throw ProtocolError("mask is " + to_string(mask.size()) + " but output is " + to_string(base.output));
    }
    if (!mask.any()) {
        throw ProtocolError("inpaint mask is empty");
    }
}

}  // namespace segsynth
