#include "segsynth/pipeline.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "hashing.hpp"
#include "segsynth/digest.hpp"
#include "segsynth/mask_ops.hpp"
#include "segsynth/visual_prior.hpp"

namespace fs = std::filesystem;

namespace segsynth {
namespace {

VisualPrior image_prior(const Sample& sample, GenerationBackend& backend, const PipelineConfig& config) {
    if (config.prior_extractor == PriorExtractor::Backend) {
        VisualPrior p = backend.prior(PriorRequest{sample.image, "lineart"});
        p.source = PriorSource::Image;
        return p;
    }
    return edges_from_image(sample.image, config.edge_params);
}

VisualPrior blended_prior(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                          const PipelineConfig& config) {
    const VisualPrior vi = image_prior(sample, backend, config);
    const VisualPrior vs = prior_from_label(sample.label, class_map, config.boundary_width);
    return blend(vi, vs, config.alpha);
}

Img2ImgRequest base_request(const Sample& sample, const VisualPrior& prior, const PipelineConfig& config) {
    Img2ImgRequest req;
    req.image = resize_bilinear(sample.image, config.gen_resolution);
    req.prior = resize_prior(prior, config.gen_resolution);
    req.params = config.gen_params;
    req.output = config.gen_resolution;
    return req;
}

struct SampleOutcome {
    std::vector<ManifestEntry> entries;
    std::vector<RunError> errors;
    std::size_t d1_ok = 0;
    std::size_t d2_ok = 0;
    std::size_t d2_skipped = 0;
    std::size_t failed = 0;
    std::size_t class_failures = 0;
};

SampleOutcome process_sample(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                             const Health& health, const PipelineConfig& config, const fs::path& out_root) {
    SampleOutcome outcome;
    const int enabled = (config.paths.d1 ? 1 : 0) + (config.paths.d2 ? 1 : 0);
    std::optional<std::string> caption;
    try {
        caption = resolve_caption(sample, class_map, backend, health, config);
    } catch (const Error& e) {
        outcome.errors.push_back({sample.id, "caption", e.what()});
        outcome.failed += static_cast<std::size_t>(enabled * config.variants_per_image);
        return outcome;
    }

    for (int v = 0; v < config.variants_per_image; ++v) {
        if (config.paths.d1) {
            try {
                auto g = generate_d1(sample, class_map, backend, config, caption, v);
                outcome.entries.push_back(write_synthetic_sample(
                    out_root, sample, g.image,
                    {PathTag::D1, v, g.seed, g.prompt_rendered, config.alpha, g.backend_info}));
                ++outcome.d1_ok;
            } catch (const Error& e) {
                outcome.errors.push_back({sample.id, "d1", e.what()});
                ++outcome.failed;
            }
        }
        if (config.paths.d2) {
            if (sample.classes.empty()) {
                ++outcome.d2_skipped;
                if (v == 0) {
                    outcome.errors.push_back({sample.id, "d2", "skipped: no labeled classes"});
                }
                continue;
            }
            try {
                auto g = generate_d2(sample, class_map, backend, config, caption, v);
                for (const auto& f : g->class_failures) {
                    outcome.errors.push_back(
                        {sample.id, "d2", "class " + std::to_string(f.class_id) + " kept original pixels: " + f.message});
                }
                outcome.class_failures += g->class_failures.size();
                if (g->classes_applied.empty()) {
                    ++outcome.failed;
                    outcome.errors.push_back({sample.id, "d2", "every class failed; entry not written"});
                    continue;
                }
                outcome.entries.push_back(write_synthetic_sample(
                    out_root, sample, g->output.image,
                    {PathTag::D2, v, g->output.seed, g->output.prompt_rendered, config.alpha, g->output.backend_info}));
                ++outcome.d2_ok;
            } catch (const Error& e) {
                outcome.errors.push_back({sample.id, "d2", e.what()});
                ++outcome.failed;
            }
        }
    }
    return outcome;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t run_seed, const std::string& sample_id, PathTag tag, int variant_index,
                          std::optional<int> class_id) {
    std::uint64_t h = detail::fnv1a("segsynth-seed/1");
    auto mix_u64 = [&h](std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            const char byte = static_cast<char>((v >> (8 * i)) & 0xFF);
            h = detail::fnv1a(std::string_view(&byte, 1), h);
        }
    };
    mix_u64(run_seed);
    mix_u64(sample_id.size());
    h = detail::fnv1a(sample_id, h);
    mix_u64(tag == PathTag::D1 ? 1 : 2);
    mix_u64(static_cast<std::uint64_t>(static_cast<std::int64_t>(variant_index)));
    mix_u64(class_id ? 1 : 0);
    mix_u64(class_id ? static_cast<std::uint64_t>(static_cast<std::int64_t>(*class_id)) : 0);
    return detail::splitmix64(h);
}

std::vector<std::string> class_names(const Sample& sample, const ClassMap& class_map) {
    std::vector<std::string> names;
    names.reserve(sample.classes.size());
    for (const int id : sample.classes) names.push_back(class_map.name_of(id));
    return names;
}

std::optional<std::string> resolve_caption(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                                           const Health& health, const PipelineConfig& config) {
    switch (config.caption_source) {
        case CaptionSource::None: return std::nullopt;
        case CaptionSource::Sidecar: return sample.caption;
        case CaptionSource::Backend: return backend.caption({sample.image, class_names(sample, class_map)});
        case CaptionSource::Auto:
            if (sample.caption) return sample.caption;
            if (!health.has(Capability::Caption)) return std::nullopt;
            try {
                return backend.caption({sample.image, class_names(sample, class_map)});
            } catch (const Error&) {
                return std::nullopt;
            }
    }
    return std::nullopt;
}

GeneratedImage generate_d1(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                           const PipelineConfig& config, const std::optional<std::string>& caption, int variant) {
    const auto names = class_names(sample, class_map);
    PromptSpec prompt = caption ? build_class_aware_prompt(*caption, names, config.class_weight)
                                : build_simple_prompt(names, config.class_weight);
    prompt.negative_text = config.negative_text;

    Img2ImgRequest req = base_request(sample, blended_prior(sample, class_map, backend, config), config);
    req.prompt = prompt;
    req.seed = derive_seed(config.run_seed, sample.id, PathTag::D1, variant);

    GenResponse response = backend.img2img(req);
    require_same_size(response.image.size(), config.gen_resolution, "img2img response");
    return GeneratedImage{resize_bilinear(response.image, sample.image.size()), prompt, render_weighted_syntax(prompt),
                          req.seed, response.backend_info};
}

std::optional<GeneratedD2> generate_d2(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                                       const PipelineConfig& config, const std::optional<std::string>& caption,
                                       int variant) {
    const auto masks = extract_class_masks(sample.label, class_map);
    if (masks.empty()) {
        return std::nullopt;
    }
    const Img2ImgRequest shared = base_request(sample, blended_prior(sample, class_map, backend, config), config);

    GeneratedD2 result;
    result.output.seed = derive_seed(config.run_seed, sample.id, PathTag::D2, variant);
    std::vector<std::pair<RgbImage, BinaryMask>> patches;
    std::string rendered;
    for (const auto& mask : masks) {
        PromptSpec prompt = build_inpaint_prompt(class_map.name_of(mask.class_id), caption, config.class_weight);
        prompt.negative_text = config.negative_text;
        if (!rendered.empty()) rendered += " | ";
        rendered += render_weighted_syntax(prompt);

        InpaintRequest req{shared, resize_mask(dilate(mask, config.inpaint_dilation_radius), config.gen_resolution)};
        req.mask.class_id = mask.class_id;
        req.base.prompt = std::move(prompt);
        req.base.seed = derive_seed(config.run_seed, sample.id, PathTag::D2, variant, mask.class_id);
        try {
            GenResponse response = backend.inpaint(req);
            require_same_size(response.image.size(), config.gen_resolution, "inpaint response");
            // merge with the undilated mask so the copied label stays exact
            patches.emplace_back(resize_bilinear(response.image, sample.image.size()), mask);
            result.classes_applied.push_back(mask.class_id);
            if (result.output.backend_info.empty()) result.output.backend_info = response.backend_info;
        } catch (const Error& e) {
            result.class_failures.push_back({mask.class_id, e.what()});
        }
    }
    result.output.image = composite(sample.image, patches);
    result.output.prompt_rendered = rendered;
    if (!masks.empty()) {
        result.output.prompt = build_inpaint_prompt(class_map.name_of(masks.front().class_id), caption,
                                                    config.class_weight);
    }
    return result;
}

void check_capabilities(const Health& health, const PipelineConfig& config) {
    if (health.status != "ok") {
        throw ConfigError("backend reports status '" + health.status + "'");
    }
    auto need = [&](bool wanted, Capability c, const char* why) {
        if (wanted && !health.has(c)) {
            throw ConfigError(std::string("backend does not advertise '") + to_string(c) + "', required by " + why);
        }
    };
    need(config.paths.d1, Capability::Img2Img, "the d1 path");
    need(config.paths.d2, Capability::Inpaint, "the d2 path");
    need(config.caption_source == CaptionSource::Backend, Capability::Caption, "caption_source=backend");
    need(config.prior_extractor == PriorExtractor::Backend, Capability::Prior, "prior_extractor=backend");
}

std::string report_to_json(const RunReport& r) {
    nlohmann::ordered_json j;
    j["counts"] = {{"samples", r.samples},       {"d1_ok", r.d1_ok},
                   {"d2_ok", r.d2_ok},           {"d2_skipped", r.d2_skipped},
                   {"failed", r.failed},         {"class_failures", r.class_failures},
                   {"label_mismatches", r.label_mismatches}};
    auto errors = nlohmann::ordered_json::array();
    for (const auto& e : r.errors) {
        errors.push_back({{"sample_id", e.sample_id}, {"path", e.path}, {"message", e.message}});
    }
    j["errors"] = errors;
    j["wall_seconds"] = r.wall_seconds;
    j["config_digest"] = r.config_digest;
    j["manifest"] = r.manifest_path.generic_string();
    return j.dump(2);
}

RunReport run(const PipelineConfig& config, const std::vector<Sample>& dataset, const ClassMap& class_map,
              GenerationBackend& backend, const fs::path& out_root) {
    const auto started = std::chrono::steady_clock::now();
    config.validate();
    const Health health = backend.health();
    check_capabilities(health, config);

    std::error_code ec;
    fs::create_directories(out_root, ec);
    if (ec) {
        throw IoError("cannot create output root " + out_root.string() + ": " + ec.message());
    }
    const std::string config_text = config_to_json(config);
    write_file(out_root / kRunConfigFile,
               std::span(reinterpret_cast<const std::uint8_t*>(config_text.data()), config_text.size()));

    std::vector<SampleOutcome> outcomes(dataset.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < dataset.size(); i = next.fetch_add(1)) {
            outcomes[i] = process_sample(dataset[i], class_map, backend, health, config, out_root);
        }
    };
    const auto threads = std::min<std::size_t>(static_cast<std::size_t>(config.parallelism), dataset.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    RunReport report;
    report.samples = dataset.size();
    report.config_digest = sha256_hex(config_text);
    std::vector<ManifestEntry> entries;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto& o = outcomes[i];
        report.d1_ok += o.d1_ok;
        report.d2_ok += o.d2_ok;
        report.d2_skipped += o.d2_skipped;
        report.failed += o.failed;
        report.class_failures += o.class_failures;
        report.errors.insert(report.errors.end(), o.errors.begin(), o.errors.end());
        for (auto& e : o.entries) {
            const std::string written = sha256_file(out_root / e.label_path);
            if (written != sha256_file(dataset[i].label_path)) {
                ++report.label_mismatches;
                report.errors.push_back({e.source_id, "verify", "copied label differs from " +
                                                                    dataset[i].label_path.generic_string()});
            }
            entries.push_back(std::move(e));
        }
    }
    report.manifest_path = write_manifest(out_root, entries);
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const std::string report_text = report_to_json(report);
    write_file(out_root / kRunReportFile,
               std::span(reinterpret_cast<const std::uint8_t*>(report_text.data()), report_text.size()));
    return report;
}

}  // namespace segsynth
