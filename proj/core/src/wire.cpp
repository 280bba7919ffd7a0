#include "segsynth/wire.hpp"

#include <json.hpp>

#include "segsynth/digest.hpp"
#include "segsynth/image_codec.hpp"

namespace segsynth::wire {
namespace {

using json = nlohmann::ordered_json;

std::string b64_png(const RgbImage& image) { return base64_encode(encode_png(image)); }
std::string b64_png(const GrayImage& image) { return base64_encode(encode_png(image)); }

template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ProtocolError&) {
        throw;
    } catch (const std::exception& e) {
        throw ProtocolError(std::string("malformed ") + what + ": " + e.what());
    }
}

json parse(const std::string& body) {
    json j = json::parse(body);
    if (!j.is_object()) {
        throw ProtocolError("request body must be a JSON object");
    }
    return j;
}

RgbImage rgb_field(const json& j, const char* key) {
    return decode_rgb(base64_decode(j.at(key).get<std::string>()));
}

GrayImage gray_field(const json& j, const char* key) {
    IndexedImage img = decode_indexed(base64_decode(j.at(key).get<std::string>()));
    if (!img.palette.empty()) {
        throw ProtocolError(std::string("'") + key + "' must be an 8-bit grayscale PNG");
    }
    return std::move(img.indices);
}

std::uint64_t u64_field(const json& j, const char* key) {
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
        throw ProtocolError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

json prompt_json(const PromptSpec& prompt) {
    json segments = json::array();
    for (const auto& s : prompt.segments) {
        segments.push_back(json{{"text", s.text}, {"weight", s.weight}});
    }
    return json{{"segments", segments}, {"negative", prompt.negative_text}};
}

PromptSpec prompt_from(const json& j) {
    PromptSpec p;
    for (const auto& s : j.at("segments")) {
        PromptSegment seg{s.at("text").get<std::string>(), s.at("weight").get<double>()};
        if (seg.text.empty() || !(seg.weight > 0.0)) {
            throw ProtocolError("prompt segments need non-empty text and a positive weight");
        }
        p.segments.push_back(std::move(seg));
    }
    p.negative_text = j.value("negative", std::string());
    return p;
}

json img2img_json(const Img2ImgRequest& r) {
    return json{{"image", b64_png(r.image)},
                {"prior", b64_png(prior_to_gray(r.prior))},
                {"prompt", prompt_json(r.prompt)},
                {"strength", r.params.strength},
                {"steps", r.params.steps},
                {"guidance_scale", r.params.guidance_scale},
                {"seed", r.seed},
                {"width", r.output.width},
                {"height", r.output.height}};
}

Img2ImgRequest img2img_from(const json& j) {
    Img2ImgRequest r;
    r.image = rgb_field(j, "image");
    r.prior = prior_from_gray(gray_field(j, "prior"), PriorSource::Blended);
    r.prompt = prompt_from(j.at("prompt"));
    r.params.strength = j.at("strength").get<double>();
    r.params.steps = j.at("steps").get<int>();
    r.params.guidance_scale = j.at("guidance_scale").get<double>();
    r.seed = u64_field(j, "seed");
    r.output = Size{j.at("width").get<int>(), j.at("height").get<int>()};
    r.validate();
    return r;
}

}  // namespace

VisualPrior quantize(const VisualPrior& prior) { return prior_from_gray(prior_to_gray(prior), prior.source); }

std::string encode(const Img2ImgRequest& request) { return img2img_json(request).dump(); }

std::string encode(const InpaintRequest& request) {
    json j = img2img_json(request.base);
    GrayImage mask(request.mask.size());
    const auto src = request.mask.data.values();
    auto dst = mask.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] ? 255 : 0;
    j["mask"] = b64_png(mask);
    return j.dump();
}

std::string encode(const GenResponse& response) {
    return json{{"image", b64_png(response.image)}, {"seed_used", response.seed_used},
                {"backend_info", response.backend_info}}
        .dump();
}

std::string encode(const CaptionRequest& request) {
    return json{{"image", b64_png(request.image)}, {"class_names", request.class_names}}.dump();
}

std::string encode_caption_response(const std::string& caption) { return json{{"caption", caption}}.dump(); }

std::string encode(const PriorRequest& request) {
    return json{{"image", b64_png(request.image)}, {"kind", request.kind}}.dump();
}

std::string encode_prior_response(const VisualPrior& prior) {
    return json{{"prior", b64_png(prior_to_gray(prior))}}.dump();
}

std::string encode(const Health& health) {
    json caps = json::array();
    for (const auto c : health.capabilities) caps.push_back(to_string(c));
    return json{{"status", health.status}, {"capabilities", caps}}.dump();
}

std::string encode_error(const std::string& message) { return json{{"error", message}}.dump(); }

Img2ImgRequest decode_img2img(const std::string& body) {
    return guarded("img2img request", [&] { return img2img_from(parse(body)); });
}

InpaintRequest decode_inpaint(const std::string& body) {
    return guarded("inpaint request", [&] {
        const json j = parse(body);
        InpaintRequest r;
        r.base = img2img_from(j);
        const GrayImage mask = gray_field(j, "mask");
        r.mask = BinaryMask{GrayImage(mask.size()), -1};
        const auto src = mask.values();
        auto dst = r.mask.data.values();
        for (std::size_t i = 0; i < dst.size(); ++i) {
            if (src[i] != 0 && src[i] != 255) {
                throw ProtocolError("mask values must be 0 or 255");
            }
            dst[i] = src[i] ? 1 : 0;
        }
        r.validate();
        return r;
    });
}

GenResponse decode_gen_response(const std::string& body) {
    return guarded("generation response", [&] {
        const json j = parse(body);
        return GenResponse{rgb_field(j, "image"), u64_field(j, "seed_used"), j.at("backend_info").get<std::string>()};
    });
}

CaptionRequest decode_caption(const std::string& body) {
    return guarded("caption request", [&] {
        const json j = parse(body);
        return CaptionRequest{rgb_field(j, "image"), j.at("class_names").get<std::vector<std::string>>()};
    });
}

std::string decode_caption_response(const std::string& body) {
    return guarded("caption response", [&] {
        auto caption = parse(body).at("caption").get<std::string>();
        if (caption.empty()) {
            throw ProtocolError("caption response is empty");
        }
        return caption;
    });
}

PriorRequest decode_prior(const std::string& body) {
    return guarded("prior request", [&] {
        const json j = parse(body);
        return PriorRequest{rgb_field(j, "image"), j.value("kind", std::string("lineart"))};
    });
}

VisualPrior decode_prior_response(const std::string& body) {
    return guarded("prior response",
                   [&] { return prior_from_gray(gray_field(parse(body), "prior"), PriorSource::Image); });
}

Health decode_health(const std::string& body) {
    return guarded("health response", [&] {
        const json j = parse(body);
        Health h;
        h.status = j.at("status").get<std::string>();
        for (const auto& c : j.at("capabilities")) {
            h.capabilities.insert(parse_capability(c.get<std::string>()));
        }
        return h;
    });
}

std::string decode_error(const std::string& body) {
    try {
        const auto j = json::parse(body);
        if (j.is_object() && j.contains("error") && j["error"].is_string()) {
            return j["error"].get<std::string>();
        }
    } catch (const std::exception&) {
    }
    return body;
}

}  // namespace segsynth::wire
