#include "segsynth/mock_backend.hpp"

#include <algorithm>
#include <cmath>

#include "hashing.hpp"
#include "segsynth/wire.hpp"

namespace segsynth {
namespace {

using detail::stream;

constexpr const char* kInfo = "mock/1";

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0)); }

std::uint64_t request_key(std::uint64_t seed, const PromptSpec& prompt) {
    return detail::combine(seed, detail::fnv1a(prompt.plain_text()));
}

// seeded colour: three bytes of one hash
std::array<double, 3> colour(std::uint64_t h) {
    return {static_cast<double>(h & 0xFF), static_cast<double>((h >> 8) & 0xFF), static_cast<double>((h >> 16) & 0xFF)};
}

std::string info(const char* op, Size size) { return std::string(kInfo) + " " + op + " " + to_string(size); }

}  // namespace

Health MockBackend::health() {
    return Health{"ok", {Capability::Img2Img, Capability::Inpaint, Capability::Caption, Capability::Prior}};
}

GenResponse MockBackend::img2img(const Img2ImgRequest& request) {
    request.validate();
    const Size size = request.output;
    const RgbImage image = resize_bilinear(request.image, size);
    const GrayImage prior = prior_to_gray(request.prior);
    const std::uint64_t key = request_key(request.seed, request.prompt);
    const auto from = colour(stream(key, 0));
    const auto to = colour(stream(key, 1));
    const double s = request.params.strength;

    GenResponse response{RgbImage(size), request.seed, info("img2img", size)};
    const double span = std::max(1, size.width + size.height - 2);
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            const std::uint64_t n = stream(key, 2 + static_cast<std::uint64_t>(y) * size.width + x);
            const double t = (x + y) / span;
            const double ink = 1.0 - prior.at(x, y) / 255.0;
            for (int c = 0; c < 3; ++c) {
                const double noise = static_cast<double>((n >> (8 * c)) & 0x3F) - 31.5;
                const double field = std::clamp(from[c] + (to[c] - from[c]) * t + noise, 0.0, 255.0) * ink;
                response.image.at(x, y, c) = to_byte((1.0 - s) * image.at(x, y, c) + s * field);
            }
        }
    }
    return response;
}

GenResponse MockBackend::inpaint(const InpaintRequest& request) {
    request.validate();
    const auto& base = request.base;
    const Size size = base.output;
    const RgbImage image = resize_bilinear(base.image, size);
    const GrayImage prior = prior_to_gray(base.prior);
    const std::uint64_t key = request_key(base.seed, base.prompt);
    const auto tint = colour(stream(key, 0));
    const std::uint64_t shape = stream(key, 1);
    const int period = 4 + static_cast<int>(shape % 8);
    const bool diagonal = ((shape >> 8) & 1) != 0;
    const double s = base.params.strength;

    GenResponse response{RgbImage(size), base.seed, info("inpaint", size)};
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            const std::uint64_t n = stream(key, 2 + static_cast<std::uint64_t>(y) * size.width + x);
            if (!request.mask.test(x, y)) {
                // +-1 jitter; compositing has to restore these pixels
                for (int c = 0; c < 3; ++c) {
                    const int jitter = static_cast<int>((n >> (2 * c)) % 3) - 1;
                    response.image.at(x, y, c) = to_byte(image.at(x, y, c) + jitter);
                }
                continue;
            }
            const int phase = diagonal ? (x + y) : x;
            const double stripe = (phase / period) % 2 == 0 ? 40.0 : -40.0;
            const double ink = 1.0 - prior.at(x, y) / 255.0;
            for (int c = 0; c < 3; ++c) {
                const double noise = static_cast<double>((n >> (8 * c)) & 0x0F) - 7.5;
                const double tex = std::clamp(tint[c] + stripe + noise, 0.0, 255.0) * ink;
                response.image.at(x, y, c) = to_byte((1.0 - s) * image.at(x, y, c) + s * tex);
            }
        }
    }
    return response;
}

std::string MockBackend::caption(const CaptionRequest& request) {
    std::string text = "a photo";
    for (std::size_t i = 0; i < request.class_names.size(); ++i) {
        text += i == 0 ? " of " : " and ";
        text += request.class_names[i];
    }
    return text;
}

VisualPrior MockBackend::prior(const PriorRequest& request) {
    if (request.kind != "lineart") {
        throw ProtocolError("unsupported prior kind '" + request.kind + "'");
    }
    return wire::quantize(edges_from_image(request.image, EdgeParams{}));
}

}  // namespace segsynth
