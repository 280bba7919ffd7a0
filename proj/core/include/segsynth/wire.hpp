#pragma once

#include <string>

#include "segsynth/backend.hpp"

namespace segsynth::wire {

// JSON bodies of the HTTP protocol. Rasters travel as base64 PNG: RGB for images, 8-bit gray
// for priors, 0/255 gray for masks. Decoders throw ProtocolError on malformed input.

std::string encode(const Img2ImgRequest& request);
std::string encode(const InpaintRequest& request);
std::string encode(const GenResponse& response);
std::string encode(const CaptionRequest& request);
std::string encode_caption_response(const std::string& caption);
std::string encode(const PriorRequest& request);
std::string encode_prior_response(const VisualPrior& prior);
std::string encode(const Health& health);
std::string encode_error(const std::string& message);

Img2ImgRequest decode_img2img(const std::string& body);
InpaintRequest decode_inpaint(const std::string& body);
GenResponse decode_gen_response(const std::string& body);
CaptionRequest decode_caption(const std::string& body);
std::string decode_caption_response(const std::string& body);
PriorRequest decode_prior(const std::string& body);
VisualPrior decode_prior_response(const std::string& body);
Health decode_health(const std::string& body);
/// Best effort: the "error" field when present, else the body itself.
std::string decode_error(const std::string& body);

/// Images on the wire are quantized to 8 bits; this is what a prior looks like after a round trip.
VisualPrior quantize(const VisualPrior& prior);

inline constexpr const char* kImg2ImgPath = "/v1/img2img";
inline constexpr const char* kInpaintPath = "/v1/inpaint";
inline constexpr const char* kCaptionPath = "/v1/caption";
inline constexpr const char* kPriorPath = "/v1/prior";
inline constexpr const char* kHealthPath = "/healthz";
inline constexpr const char* kRequestIdHeader = "X-Request-Id";

}  // namespace segsynth::wire
