#include "segsynth/qa.hpp"

#include <cmath>
#include <cstdlib>
#include <map>

#include <json.hpp>

#include "segsynth/digest.hpp"
#include "segsynth/mask_ops.hpp"

namespace fs = std::filesystem;

namespace segsynth {
namespace {

std::optional<fs::path> find_by_stem(const fs::path& dir, const std::string& stem, bool labels) {
    static const char* const kImageExt[] = {".png", ".jpg", ".jpeg", ".PNG", ".JPG", ".JPEG"};
    static const char* const kLabelExt[] = {".png", ".PNG"};
    if (labels) {
        for (const char* ext : kLabelExt) {
            if (fs::path p = dir / (stem + ext); fs::is_regular_file(p)) return p;
        }
    } else {
        for (const char* ext : kImageExt) {
            if (fs::path p = dir / (stem + ext); fs::is_regular_file(p)) return p;
        }
    }
    return std::nullopt;
}

struct SourceData {
    RgbImage image;
    fs::path label_path;
    std::string label_digest;
    BinaryMask class_union;
};

}  // namespace

std::size_t QAReport::failures() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.ok() ? 0 : 1;
    return n;
}

QAReport verify_run(const fs::path& out_root, const fs::path& source_root, DatasetLayout layout,
                    const ClassMap& class_map) {
    const fs::path manifest_path = out_root / kManifestFile;
    if (!fs::is_regular_file(manifest_path)) {
        throw IoError("no manifest at " + manifest_path.string());
    }
    const auto manifest = load_manifest(manifest_path);

    std::map<std::string, std::optional<SourceData>> sources;
    std::map<std::string, std::string> source_errors;
    auto source_for = [&](const std::string& id) -> const SourceData* {
        auto it = sources.find(id);
        if (it == sources.end()) {
            std::optional<SourceData> data;
            try {
                const auto image_path = find_by_stem(source_root / kImagesDir, id, false);
                const auto label_path = find_by_stem(source_root / kLabelsDir, id, true);
                if (!image_path || !label_path) {
                    throw IoError("source image or label for '" + id + "' not found under " + source_root.string());
                }
                SourceData d;
                d.image = read_rgb(*image_path);
                d.label_path = *label_path;
                d.label_digest = sha256_file(*label_path);
                const auto label = read_label(*label_path, layout, class_map);
                const auto masks = extract_class_masks(label, class_map);
                d.class_union = mask_union(masks, label.size());
                data = std::move(d);
            } catch (const Error& e) {
                source_errors[id] = e.what();
            }
            it = sources.emplace(id, std::move(data)).first;
        }
        return it->second ? &*it->second : nullptr;
    };

    QAReport report;
    double d1_diff_sum = 0.0;
    std::size_t d1_count = 0;
    std::size_t d2_changed = 0;
    std::size_t d2_total = 0;

    for (const auto& entry : manifest) {
        EntryCheck check;
        check.synthetic_id = entry.synthetic_id;
        check.path_tag = entry.path_tag;
        if (entry.path_tag == PathTag::D2) {
            check.outside_mask_unchanged = false;
        }
        const SourceData* src = source_for(entry.source_id);
        if (src == nullptr) {
            check.notes.push_back(source_errors[entry.source_id]);
            report.entries.push_back(std::move(check));
            continue;
        }

        try {
            check.label_digest_match = sha256_file(out_root / entry.label_path) == src->label_digest;
            if (!check.label_digest_match) {
                check.notes.push_back("label bytes differ from " + src->label_path.generic_string());
            }
        } catch (const Error& e) {
            check.notes.push_back(e.what());
        }

        RgbImage generated;
        try {
            generated = read_rgb(out_root / entry.image_path);
        } catch (const Error& e) {
            check.notes.push_back(e.what());
            report.entries.push_back(std::move(check));
            continue;
        }
        check.dims_match = generated.size() == src->image.size();
        if (!check.dims_match) {
            check.notes.push_back("image is " + to_string(generated.size()) + ", source is " +
                                  to_string(src->image.size()));
            report.entries.push_back(std::move(check));
            continue;
        }

        const auto gen = generated.values();
        const auto ref = src->image.values();
        if (entry.path_tag == PathTag::D1) {
            double sum = 0.0;
            for (std::size_t i = 0; i < gen.size(); ++i) sum += std::abs(int(gen[i]) - int(ref[i]));
            d1_diff_sum += gen.empty() ? 0.0 : sum / static_cast<double>(gen.size());
            ++d1_count;
        } else {
            const auto in_mask = src->class_union.data.values();
            std::size_t outside_changes = 0;
            std::optional<std::pair<int, int>> first;
            for (std::size_t p = 0; p < in_mask.size(); ++p) {
                const bool changed =
                    gen[3 * p] != ref[3 * p] || gen[3 * p + 1] != ref[3 * p + 1] || gen[3 * p + 2] != ref[3 * p + 2];
                if (!changed) continue;
                ++d2_changed;
                if (in_mask[p] == 0) {
                    ++outside_changes;
                    if (!first) {
                        const int w = generated.width();
                        first = {static_cast<int>(p % w), static_cast<int>(p / w)};
                    }
                }
            }
            d2_total += in_mask.size();
            check.outside_mask_unchanged = outside_changes == 0;
            if (outside_changes > 0) {
                check.notes.push_back(std::to_string(outside_changes) + " pixel(s) outside the class masks differ, first at (" +
                                      std::to_string(first->first) + ", " + std::to_string(first->second) + ")");
            }
        }
        report.entries.push_back(std::move(check));
    }
    report.mean_abs_pixel_diff_d1 = d1_count == 0 ? 0.0 : d1_diff_sum / static_cast<double>(d1_count);
    report.changed_pixel_ratio_d2 = d2_total == 0 ? 0.0 : static_cast<double>(d2_changed) / static_cast<double>(d2_total);
    return report;
}

std::string qa_report_to_json(const QAReport& report) {
    nlohmann::ordered_json j;
    auto entries = nlohmann::ordered_json::array();
    for (const auto& e : report.entries) {
        nlohmann::ordered_json item;
        item["synthetic_id"] = e.synthetic_id;
        item["path_tag"] = to_string(e.path_tag);
        item["dims_match"] = e.dims_match;
        item["label_digest_match"] = e.label_digest_match;
        if (e.outside_mask_unchanged) item["outside_mask_unchanged"] = *e.outside_mask_unchanged;
        item["ok"] = e.ok();
        if (!e.notes.empty()) item["notes"] = e.notes;
        entries.push_back(std::move(item));
    }
    j["entries"] = entries;
    j["aggregate"] = {{"mean_abs_pixel_diff_d1", report.mean_abs_pixel_diff_d1},
                      {"changed_pixel_ratio_d2", report.changed_pixel_ratio_d2}};
    j["failures"] = report.failures();
    return j.dump(2);
}

void write_qa_report(const fs::path& out_root, const QAReport& report) {
    const std::string text = qa_report_to_json(report);
    write_file(out_root / kQaReportFile, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace segsynth
