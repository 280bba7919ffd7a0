#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "segsynth/backend.hpp"
#include "segsynth/dataset_io.hpp"
#include "segsynth/visual_prior.hpp"

namespace segsynth {

enum class CaptionSource {
    Auto,     // sidecar, else backend caption endpoint when advertised, else none
    Sidecar,  // sidecar only
    Backend,  // backend only (sidecars ignored)
    None,     // simple class-list prompt
};

std::string to_string(CaptionSource source);
CaptionSource parse_caption_source(const std::string& text);

enum class PriorExtractor { Local, Backend };

struct PathSelection {
    bool d1 = true;
    bool d2 = true;
    friend bool operator==(const PathSelection&, const PathSelection&) = default;
};

/// Parses "d1", "d2" or "both".
PathSelection parse_paths(const std::string& text);

/// Run configuration. Field names match the keys of the JSON configuration file.
struct PipelineConfig {
    double alpha = 0.8;
    double class_weight = kDefaultClassWeight;
    int boundary_width = 2;
    EdgeParams edge_params;
    PriorExtractor prior_extractor = PriorExtractor::Local;
    int inpaint_dilation_radius = 8;
    GenParams gen_params;
    Size gen_resolution{1024, 1024};
    std::uint64_t run_seed = 0;
    PathSelection paths;
    int parallelism = 2;
    int variants_per_image = 1;
    std::string negative_text;
    CaptionSource caption_source = CaptionSource::Auto;

    // run-level settings
    DatasetLayout layout = DatasetLayout::VocIndexed;
    std::string class_map = "voc";  // "voc", "binary" or a JSON file path
    std::string backend = "mock";   // "mock" or an http(s) URL
    std::string data_root;
    std::string out_root;

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
    friend bool operator==(const PipelineConfig&, const PipelineConfig&) = default;
};

/// JSON text with every field, keys sorted; the config digest hashes this.
std::string config_to_json(const PipelineConfig& config);

/// Applies the keys of a JSON object on top of `base`. Unknown keys and wrongly typed values
/// throw ConfigError naming the field path (e.g. "gen_params.steps").
PipelineConfig apply_config_json(const PipelineConfig& base, const std::string& json_text);
PipelineConfig load_config_file(const std::filesystem::path& path, const PipelineConfig& base = {});

std::string config_digest(const PipelineConfig& config);

}  // namespace segsynth
