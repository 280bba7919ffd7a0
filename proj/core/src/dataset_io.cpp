#include "segsynth/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "segsynth/errors.hpp"

namespace fs = std::filesystem;

namespace segsynth {
namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}


bool is_image_file(const fs::path& p) {
    const auto ext = lower(p.extension().string());
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

// stem -> files sharing that stem
std::map<std::string, std::vector<fs::path>> scan(const fs::path& dir, bool labels) {
    std::map<std::string, std::vector<fs::path>> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const auto& p = entry.path();
        if (labels ? lower(p.extension().string()) != ".png" : !is_image_file(p)) {
            continue;
        }
        out[p.stem().string()].push_back(p);
    }
    for (auto& [stem, files] : out) {
        std::sort(files.begin(), files.end());
    }
    return out;
}

std::optional<std::string> read_caption(const fs::path& image_path) {
    const fs::path sidecar = image_path.parent_path() / (image_path.stem().string() + kCaptionSuffix);
    std::ifstream in(sidecar);
    if (!in) {
        return std::nullopt;
    }
    std::string line;
    std::getline(in, line);
    const auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return std::nullopt;
    }
    const auto last = line.find_last_not_of(" \t\r\n");
    return line.substr(first, last - first + 1);
}

std::string generic(const fs::path& p) { return p.generic_string(); }

}  // namespace

std::string to_string(DatasetLayout layout) {
    return layout == DatasetLayout::VocIndexed ? "voc-indexed" : "binary-masks";
}

DatasetLayout parse_layout(const std::string& text) {
    if (text == "voc-indexed") return DatasetLayout::VocIndexed;
    if (text == "binary-masks") return DatasetLayout::BinaryMasks;
    throw ConfigError("unknown dataset layout '" + text + "' (expected voc-indexed or binary-masks)");
}

std::string to_string(PathTag tag) { return tag == PathTag::D1 ? "d1" : "d2"; }

PathTag parse_path_tag(const std::string& text) {
    if (text == "d1") return PathTag::D1;
    if (text == "d2") return PathTag::D2;
    throw IoError("unknown path tag '" + text + "'");
}

LabelMask read_label(const fs::path& path, DatasetLayout layout, const ClassMap& class_map) {
    IndexedImage indexed = read_indexed(path);
    if (layout == DatasetLayout::VocIndexed) {
        return LabelMask{std::move(indexed.indices)};
    }
    const auto fg = class_map.foreground_ids();
    if (fg.empty()) {
        throw ConfigError("binary-masks layout needs a class map with one foreground class");
    }
    const auto foreground = static_cast<std::uint8_t>(fg.front());
    const auto background = static_cast<std::uint8_t>(class_map.background_id().value_or(0));
    for (auto& v : indexed.indices.values()) {
        v = v != 0 ? foreground : background;
    }
    return LabelMask{std::move(indexed.indices)};
}

std::vector<int> classes_present(const LabelMask& label, const ClassMap& class_map) {
    std::array<bool, 256> seen{};
    for (const auto v : label.data.values()) {
        seen[v] = true;
    }
    std::vector<int> out;
    const auto background = class_map.background_id();
    for (int v = 0; v < 256; ++v) {
        if (seen[static_cast<std::size_t>(v)] && !class_map.is_void(v) && background != v) {
            out.push_back(v);
        }
    }
    return out;
}

LoadResult load_dataset(const fs::path& root, DatasetLayout layout, const ClassMap& class_map) {
    const fs::path images_dir = root / kImagesDir;
    const fs::path labels_dir = root / kLabelsDir;
    if (!fs::is_directory(root)) {
        throw IoError("dataset root does not exist: " + root.string());
    }
    if (!fs::is_directory(images_dir) || !fs::is_directory(labels_dir)) {
        throw IoError("dataset root " + root.string() + " must contain '" + kImagesDir + "' and '" + kLabelsDir +
                      "' directories");
    }
    const auto images = scan(images_dir, false);
    const auto labels = scan(labels_dir, true);

    std::vector<std::string> stems;
    for (const auto& [stem, files] : images) stems.push_back(stem);
    for (const auto& [stem, files] : labels) {
        if (!images.contains(stem)) stems.push_back(stem);
    }
    std::sort(stems.begin(), stems.end());

    LoadResult result;
    for (const auto& stem : stems) {
        const auto img = images.find(stem);
        const auto lab = labels.find(stem);
        if (img == images.end()) {
            result.issues.push_back({stem, "label has no matching image: " + generic(lab->second.front())});
            continue;
        }
        if (lab == labels.end()) {
            result.issues.push_back({stem, "image has no matching label: " + generic(img->second.front())});
            continue;
        }
        if (img->second.size() > 1) {
            result.issues.push_back({stem, "several images share the stem '" + stem + "'"});
            continue;
        }
        Sample sample;
        sample.id = stem;
        sample.image_path = img->second.front();
        sample.label_path = lab->second.front();
        try {
            sample.image = read_rgb(sample.image_path);
            sample.label = read_label(sample.label_path, layout, class_map);
        } catch (const Error& e) {
            result.issues.push_back({stem, e.what()});
            continue;
        }
        if (sample.image.size() != sample.label.size()) {
            result.issues.push_back({stem, "image is " + to_string(sample.image.size()) + " but label is " +
                                               to_string(sample.label.size())});
            continue;
        }
        bool valid = true;
        const auto& data = sample.label.data;
        for (int y = 0; y < data.height() && valid; ++y) {
            for (int x = 0; x < data.width(); ++x) {
                const int v = data.at(x, y);
                if (!class_map.is_known(v)) {
                    result.issues.push_back({stem, "label value " + std::to_string(v) + " at (" + std::to_string(x) +
                                                       ", " + std::to_string(y) + ") is not in the class map"});
                    valid = false;
                    break;
                }
            }
        }
        if (!valid) {
            continue;
        }
        sample.classes = classes_present(sample.label, class_map);
        sample.caption = read_caption(sample.image_path);
        result.samples.push_back(std::move(sample));
    }
    return result;
}

std::string synthetic_id(const std::string& source_id, PathTag tag, int variant) {
    return source_id + "_" + to_string(tag) + "_v" + std::to_string(variant);
}

ManifestEntry write_synthetic_sample(const fs::path& out_root, const Sample& sample, const RgbImage& generated,
                                     const SyntheticWrite& info) {
    require_same_size(generated.size(), sample.image.size(), "synthetic image vs source sample");
    ManifestEntry entry;
    entry.source_id = sample.id;
    entry.synthetic_id = synthetic_id(sample.id, info.path_tag, info.variant);
    entry.path_tag = info.path_tag;
    entry.seed = info.seed;
    entry.prompt_rendered = info.prompt_rendered;
    entry.alpha = info.alpha;
    entry.backend_info = info.backend_info;

    const fs::path tag_dir = fs::path(to_string(info.path_tag));
    const fs::path image_rel = tag_dir / kImagesDir / (entry.synthetic_id + ".png");
    const fs::path label_rel = tag_dir / kLabelsDir / (entry.synthetic_id + sample.label_path.extension().string());
    entry.image_path = generic(image_rel);
    entry.label_path = generic(label_rel);

    write_png(out_root / image_rel, generated);
    std::error_code ec;
    fs::create_directories((out_root / label_rel).parent_path(), ec);
    if (!ec) {
        fs::copy_file(sample.label_path, out_root / label_rel, fs::copy_options::overwrite_existing, ec);
    }
    if (ec) {
        throw IoError("cannot copy label " + sample.label_path.string() + ": " + ec.message());
    }
    return entry;
}

std::string serialize_manifest(const std::vector<ManifestEntry>& entries) {
    std::string out;
    for (const auto& e : entries) {
        nlohmann::ordered_json j;
        j["source_id"] = e.source_id;
        j["synthetic_id"] = e.synthetic_id;
        j["path_tag"] = to_string(e.path_tag);
        j["seed"] = e.seed;
        j["image_path"] = e.image_path;
        j["label_path"] = e.label_path;
        j["prompt_rendered"] = e.prompt_rendered;
        j["alpha"] = e.alpha;
        j["backend_info"] = e.backend_info;
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
    std::vector<ManifestEntry> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            ManifestEntry e;
            e.source_id = j.at("source_id").get<std::string>();
            e.synthetic_id = j.at("synthetic_id").get<std::string>();
            e.path_tag = parse_path_tag(j.at("path_tag").get<std::string>());
            e.seed = j.at("seed").get<std::uint64_t>();
            e.image_path = j.at("image_path").get<std::string>();
            e.label_path = j.at("label_path").get<std::string>();
            e.prompt_rendered = j.at("prompt_rendered").get<std::string>();
            e.alpha = j.at("alpha").get<double>();
            e.backend_info = j.at("backend_info").get<std::string>();
            entries.push_back(std::move(e));
        } catch (const std::exception& e) {
            std::string excerpt = line.substr(0, 80);
            throw IoError("manifest line " + std::to_string(line_no) + ": " + e.what() + " in: " + excerpt);
        }
    }
    return entries;
}

fs::path write_manifest(const fs::path& out_root, const std::vector<ManifestEntry>& entries) {
    const fs::path path = out_root / kManifestFile;
    const std::string text = serialize_manifest(entries);
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
    return path;
}

std::vector<ManifestEntry> load_manifest(const fs::path& path) {
    const Bytes bytes = read_file(path);
    return parse_manifest(std::string(bytes.begin(), bytes.end()));
}

}  // namespace segsynth
