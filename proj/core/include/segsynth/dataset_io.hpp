#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segsynth/class_map.hpp"
#include "segsynth/image_codec.hpp"
#include "segsynth/raster.hpp"

namespace segsynth {

enum class DatasetLayout { VocIndexed, BinaryMasks };

std::string to_string(DatasetLayout layout);
/// Accepts "voc-indexed" and "binary-masks".
DatasetLayout parse_layout(const std::string& text);

/// One real image with its label. The unit of the source dataset.
struct Sample {
    std::string id;
    RgbImage image;
    LabelMask label;
    std::vector<int> classes;  // ascending, background and void excluded
    std::optional<std::string> caption;
    std::filesystem::path image_path;
    std::filesystem::path label_path;
};

struct LoadIssue {
    std::string id;
    std::string message;
};

struct LoadResult {
    std::vector<Sample> samples;
    std::vector<LoadIssue> issues;
};

/// Directory names under a dataset root.
inline constexpr const char* kImagesDir = "images";
inline constexpr const char* kLabelsDir = "labels";
/// Caption sidecar suffix, placed next to the image: "<stem>.caption.txt".
inline constexpr const char* kCaptionSuffix = ".caption.txt";

/// Reads a label file under the given layout. VOC labels are palette indices; binary masks map
/// 0 to the background and any other value to the class map's first foreground id.
LabelMask read_label(const std::filesystem::path& path, DatasetLayout layout, const ClassMap& class_map);

/// Distinct values of the label that are neither background nor void, ascending.
std::vector<int> classes_present(const LabelMask& label, const ClassMap& class_map);

/// Scans root/images and root/labels, pairs files by stem and decodes them. Samples are sorted
/// by id. Unpaired files, unreadable files, size mismatches and label values missing from the
/// class map are reported as issues instead of failing the whole load. Throws IoError when the
/// root or either directory is missing.
LoadResult load_dataset(const std::filesystem::path& root, DatasetLayout layout, const ClassMap& class_map);

enum class PathTag { D1, D2 };

std::string to_string(PathTag tag);
PathTag parse_path_tag(const std::string& text);

struct ManifestEntry {
    std::string source_id;
    std::string synthetic_id;
    PathTag path_tag = PathTag::D1;
    std::uint64_t seed = 0;
    std::string image_path;  // relative to the output root, '/' separated
    std::string label_path;
    std::string prompt_rendered;
    double alpha = 0.0;
    std::string backend_info;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

struct SyntheticWrite {
    PathTag path_tag = PathTag::D1;
    int variant = 0;
    std::uint64_t seed = 0;
    std::string prompt_rendered;
    double alpha = 0.0;
    std::string backend_info;
};

std::string synthetic_id(const std::string& source_id, PathTag tag, int variant);

/// Writes out_root/{d1,d2}/images/<synthetic_id>.png and copies the source label file verbatim
/// to out_root/{d1,d2}/labels/<synthetic_id><ext>. Throws RasterError if the generated image
/// does not match the sample size, IoError on filesystem failures.
ManifestEntry write_synthetic_sample(const std::filesystem::path& out_root, const Sample& sample,
                                     const RgbImage& generated, const SyntheticWrite& info);

inline constexpr const char* kManifestFile = "manifest.jsonl";

/// One JSON object per line, UTF-8.
std::string serialize_manifest(const std::vector<ManifestEntry>& entries);
/// Unknown keys are ignored. Throws IoError naming the offending line.
std::vector<ManifestEntry> parse_manifest(const std::string& text);

std::filesystem::path write_manifest(const std::filesystem::path& out_root, const std::vector<ManifestEntry>& entries);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

}  // namespace segsynth
