#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segsynth/backend.hpp"
#include "segsynth/config.hpp"
#include "segsynth/dataset_io.hpp"
#include "segsynth/prompting.hpp"

namespace segsynth {

/// Stable 64-bit hash of the seed tuple. The same arguments always give the same seed on every
/// platform; class_id distinguishes the per-class inpainting requests of one d2 entry.
std::uint64_t derive_seed(std::uint64_t run_seed, const std::string& sample_id, PathTag tag, int variant_index,
                          std::optional<int> class_id = std::nullopt);

/// Caption shared by both paths of one sample, per the configured caption source.
std::optional<std::string> resolve_caption(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                                           const Health& health, const PipelineConfig& config);

std::vector<std::string> class_names(const Sample& sample, const ClassMap& class_map);

struct GeneratedImage {
    RgbImage image;  // at sample resolution
    PromptSpec prompt;
    std::string prompt_rendered;
    std::uint64_t seed = 0;
    std::string backend_info;
};

struct ClassFailure {
    int class_id = 0;
    std::string message;
};

struct GeneratedD2 {
    GeneratedImage output;
    std::vector<int> classes_applied;
    std::vector<ClassFailure> class_failures;
};

/// Whole-image path: class-aware prompt, blended prior, img2img at the generation resolution,
/// then resize back to the sample size.
GeneratedImage generate_d1(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                           const PipelineConfig& config, const std::optional<std::string>& caption, int variant = 0);

/// Per-class path: one inpainting request per class in ascending id order (dilated mask sent,
/// original mask used for the merge), then a pixel composite over the source image. A failed
/// class keeps its original pixels. Returns nullopt for samples without classes.
std::optional<GeneratedD2> generate_d2(const Sample& sample, const ClassMap& class_map, GenerationBackend& backend,
                                       const PipelineConfig& config, const std::optional<std::string>& caption,
                                       int variant = 0);

struct RunError {
    std::string sample_id;
    std::string path;  // "d1", "d2", "load" or "verify"
    std::string message;

    friend bool operator==(const RunError&, const RunError&) = default;
};

struct RunReport {
    std::size_t samples = 0;
    std::size_t d1_ok = 0;
    std::size_t d2_ok = 0;
    std::size_t d2_skipped = 0;
    std::size_t failed = 0;          // entries that were attempted but not written
    std::size_t class_failures = 0;  // d2 classes that kept their original pixels
    std::size_t label_mismatches = 0;
    std::vector<RunError> errors;
    double wall_seconds = 0.0;
    std::string config_digest;
    std::filesystem::path manifest_path;

    [[nodiscard]] bool ok() const { return failed == 0 && class_failures == 0 && label_mismatches == 0; }
    [[nodiscard]] std::size_t entries() const { return d1_ok + d2_ok; }
};

std::string report_to_json(const RunReport& report);

inline constexpr const char* kRunReportFile = "run_report.json";
inline constexpr const char* kRunConfigFile = "run_config.json";

/// Checks the backend advertises every capability the enabled paths need. Throws ConfigError.
void check_capabilities(const Health& health, const PipelineConfig& config);

/// Generates and persists every enabled path and variant for each sample, writes the manifest,
/// the effective configuration and the run report under out_root, then re-checks every copied
/// label against its source.
RunReport run(const PipelineConfig& config, const std::vector<Sample>& dataset, const ClassMap& class_map,
              GenerationBackend& backend, const std::filesystem::path& out_root);

}  // namespace segsynth
