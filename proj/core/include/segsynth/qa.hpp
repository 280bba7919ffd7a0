#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segsynth/class_map.hpp"
#include "segsynth/dataset_io.hpp"

namespace segsynth {

struct EntryCheck {
    std::string synthetic_id;
    PathTag path_tag = PathTag::D1;
    bool dims_match = false;
    bool label_digest_match = false;
    std::optional<bool> outside_mask_unchanged;  // d2 only
    std::vector<std::string> notes;

    [[nodiscard]] bool ok() const {
        return dims_match && label_digest_match && outside_mask_unchanged.value_or(true);
    }
};

struct QAReport {
    std::vector<EntryCheck> entries;
    double mean_abs_pixel_diff_d1 = 0.0;
    double changed_pixel_ratio_d2 = 0.0;

    [[nodiscard]] std::size_t failures() const;
    [[nodiscard]] bool ok() const { return failures() == 0; }
};

inline constexpr const char* kQaReportFile = "qa_report.json";

/// Re-reads the manifest, the synthetic files and the source dataset from disk. Missing or
/// unreadable files flag the entry instead of aborting. Throws IoError if the manifest is absent.
QAReport verify_run(const std::filesystem::path& out_root, const std::filesystem::path& source_root,
                    DatasetLayout layout, const ClassMap& class_map);

std::string qa_report_to_json(const QAReport& report);
void write_qa_report(const std::filesystem::path& out_root, const QAReport& report);

}  // namespace segsynth
