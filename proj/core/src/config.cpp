#include "segsynth/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "segsynth/digest.hpp"

namespace segsynth {
namespace {

using json = nlohmann::json;

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
    throw ConfigError("config field '" + field + "': " + message);
}

double get_number(const json& v, const std::string& field) {
    if (!v.is_number()) field_error(field, "expected a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& field) {
    if (!v.is_number_integer()) field_error(field, "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& v, const std::string& field) {
    if (!v.is_boolean()) field_error(field, "expected true or false");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& field) {
    if (!v.is_string()) field_error(field, "expected a string");
    return v.get<std::string>();
}

std::uint64_t get_u64(const json& v, const std::string& field) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return v.get<std::uint64_t>();
    field_error(field, "expected a non-negative integer");
}

const json& object(const json& v, const std::string& field) {
    if (!v.is_object()) field_error(field, "expected an object");
    return v;
}

template <typename Setter>
void each_key(const json& obj, const std::string& prefix, Setter&& set) {
    for (const auto& [key, value] : obj.items()) {
        const std::string field = prefix.empty() ? key : prefix + "." + key;
        if (!set(key, value, field)) {
            field_error(field, "unknown key");
        }
    }
}

template <typename F>
void rethrow_as_field(const std::string& field, F&& f) {
    try {
        f();
    } catch (const ConfigError& e) {
        field_error(field, e.what());
    }
}

}  // namespace

std::string to_string(CaptionSource source) {
    switch (source) {
        case CaptionSource::Auto: return "auto";
        case CaptionSource::Sidecar: return "sidecar";
        case CaptionSource::Backend: return "backend";
        case CaptionSource::None: return "none";
    }
    return "auto";
}

CaptionSource parse_caption_source(const std::string& text) {
    if (text == "auto") return CaptionSource::Auto;
    if (text == "sidecar") return CaptionSource::Sidecar;
    if (text == "backend") return CaptionSource::Backend;
    if (text == "none") return CaptionSource::None;
    throw ConfigError("unknown caption source '" + text + "' (expected auto, sidecar, backend or none)");
}

PathSelection parse_paths(const std::string& text) {
    if (text == "d1") return {true, false};
    if (text == "d2") return {false, true};
    if (text == "both") return {true, true};
    throw ConfigError("unknown paths value '" + text + "' (expected d1, d2 or both)");
}

void PipelineConfig::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) field_error("alpha", "must lie in [0,1]");
    if (!(class_weight >= 1.0)) field_error("class_weight", "must be >= 1");
    if (boundary_width < 1) field_error("boundary_width", "must be >= 1");
    rethrow_as_field("edge_params", [&] { edge_params.validate(); });
    if (inpaint_dilation_radius < 0) field_error("inpaint_dilation_radius", "must be >= 0");
    try {
        gen_params.validate();
    } catch (const ProtocolError& e) {
        field_error("gen_params", e.what());
    }
    if (gen_resolution.width <= 0 || gen_resolution.width % 8 != 0) {
        field_error("gen_resolution.W", "must be a positive multiple of 8");
    }
    if (gen_resolution.height <= 0 || gen_resolution.height % 8 != 0) {
        field_error("gen_resolution.H", "must be a positive multiple of 8");
    }
    if (!paths.d1 && !paths.d2) field_error("paths", "at least one of d1, d2 must be enabled");
    if (parallelism < 1) field_error("parallelism", "must be >= 1");
    if (variants_per_image < 1) field_error("variants_per_image", "must be >= 1");
    if (backend != "mock" && backend.rfind("http://", 0) != 0 && backend.rfind("https://", 0) != 0) {
        field_error("backend", "expected 'mock' or an http(s) URL");
    }
}

std::string config_to_json(const PipelineConfig& c) {
    json j;
    j["alpha"] = c.alpha;
    j["class_weight"] = c.class_weight;
    j["boundary_width"] = c.boundary_width;
    j["edge_params"] = {{"low_threshold", c.edge_params.low_threshold},
                        {"high_threshold", c.edge_params.high_threshold},
                        {"blur_sigma", c.edge_params.blur_sigma}};
    j["prior_extractor"] = c.prior_extractor == PriorExtractor::Local ? "local" : "backend";
    j["inpaint_dilation_radius"] = c.inpaint_dilation_radius;
    j["gen_params"] = {{"strength", c.gen_params.strength},
                       {"steps", c.gen_params.steps},
                       {"guidance_scale", c.gen_params.guidance_scale}};
    j["gen_resolution"] = {{"W", c.gen_resolution.width}, {"H", c.gen_resolution.height}};
    j["run_seed"] = c.run_seed;
    j["paths"] = {{"d1", c.paths.d1}, {"d2", c.paths.d2}};
    j["parallelism"] = c.parallelism;
    j["variants_per_image"] = c.variants_per_image;
    j["negative_text"] = c.negative_text;
    j["caption_source"] = to_string(c.caption_source);
    j["layout"] = to_string(c.layout);
    j["class_map"] = c.class_map;
    j["backend"] = c.backend;
    j["data_root"] = c.data_root;
    j["out_root"] = c.out_root;
    return j.dump(2);
}

PipelineConfig apply_config_json(const PipelineConfig& base, const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    PipelineConfig c = base;
    each_key(doc, "", [&](const std::string& key, const json& v, const std::string& field) {
        if (key == "alpha") c.alpha = get_number(v, field);
        else if (key == "class_weight") c.class_weight = get_number(v, field);
        else if (key == "boundary_width") c.boundary_width = get_int(v, field);
        else if (key == "edge_params") {
            each_key(object(v, field), field, [&](const std::string& k, const json& x, const std::string& f) {
                if (k == "low_threshold") c.edge_params.low_threshold = get_number(x, f);
                else if (k == "high_threshold") c.edge_params.high_threshold = get_number(x, f);
                else if (k == "blur_sigma") c.edge_params.blur_sigma = get_number(x, f);
                else return false;
                return true;
            });
        } else if (key == "prior_extractor") {
            const auto s = get_string(v, field);
            if (s == "local") c.prior_extractor = PriorExtractor::Local;
            else if (s == "backend") c.prior_extractor = PriorExtractor::Backend;
            else field_error(field, "expected 'local' or 'backend'");
        } else if (key == "inpaint_dilation_radius") c.inpaint_dilation_radius = get_int(v, field);
        else if (key == "gen_params") {
            each_key(object(v, field), field, [&](const std::string& k, const json& x, const std::string& f) {
                if (k == "strength") c.gen_params.strength = get_number(x, f);
                else if (k == "steps") c.gen_params.steps = get_int(x, f);
                else if (k == "guidance_scale") c.gen_params.guidance_scale = get_number(x, f);
                else return false;
                return true;
            });
        } else if (key == "gen_resolution") {
            each_key(object(v, field), field, [&](const std::string& k, const json& x, const std::string& f) {
                if (k == "W") c.gen_resolution.width = get_int(x, f);
                else if (k == "H") c.gen_resolution.height = get_int(x, f);
                else return false;
                return true;
            });
        } else if (key == "run_seed") c.run_seed = get_u64(v, field);
        else if (key == "paths") {
            if (v.is_string()) {
                rethrow_as_field(field, [&] { c.paths = parse_paths(v.get<std::string>()); });
            } else {
                each_key(object(v, field), field, [&](const std::string& k, const json& x, const std::string& f) {
                    if (k == "d1") c.paths.d1 = get_bool(x, f);
                    else if (k == "d2") c.paths.d2 = get_bool(x, f);
                    else return false;
                    return true;
                });
            }
        } else if (key == "parallelism") c.parallelism = get_int(v, field);
        else if (key == "variants_per_image") c.variants_per_image = get_int(v, field);
        else if (key == "negative_text") c.negative_text = get_string(v, field);
        else if (key == "caption_source") {
            rethrow_as_field(field, [&] { c.caption_source = parse_caption_source(get_string(v, field)); });
        } else if (key == "layout") {
            rethrow_as_field(field, [&] { c.layout = parse_layout(get_string(v, field)); });
        } else if (key == "class_map") c.class_map = get_string(v, field);
        else if (key == "backend") c.backend = get_string(v, field);
        else if (key == "data_root") c.data_root = get_string(v, field);
        else if (key == "out_root") c.out_root = get_string(v, field);
        else return false;
        return true;
    });
    return c;
}

PipelineConfig load_config_file(const std::filesystem::path& path, const PipelineConfig& base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return apply_config_json(base, buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

std::string config_digest(const PipelineConfig& config) { return sha256_hex(config_to_json(config)); }

}  // namespace segsynth
