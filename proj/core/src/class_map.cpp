#include "segsynth/class_map.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "segsynth/errors.hpp"

namespace segsynth {

ClassMap::ClassMap(std::vector<ClassEntry> entries, std::optional<int> void_id)
    : entries_(std::move(entries)), void_id_(void_id) {
    std::set<int> ids;
    int backgrounds = 0;
    for (const auto& e : entries_) {
        if (e.id < 0 || e.id > 255) {
            throw ConfigError("class id " + std::to_string(e.id) + " outside [0,255]");
        }
        if (!ids.insert(e.id).second) {
            throw ConfigError("duplicate class id " + std::to_string(e.id));
        }
        if (e.name.empty()) {
            throw ConfigError("class id " + std::to_string(e.id) + " has an empty name");
        }
        backgrounds += e.is_background ? 1 : 0;
    }
    if (backgrounds > 1) {
        throw ConfigError("class map has " + std::to_string(backgrounds) + " background entries, at most one allowed");
    }
    if (void_id_) {
        if (*void_id_ < 0 || *void_id_ > 255) {
            throw ConfigError("void id " + std::to_string(*void_id_) + " outside [0,255]");
        }
        if (ids.contains(*void_id_)) {
            throw ConfigError("void id " + std::to_string(*void_id_) + " is also a class id");
        }
    }
    std::sort(entries_.begin(), entries_.end(), [](const ClassEntry& a, const ClassEntry& b) { return a.id < b.id; });
}

ClassMap ClassMap::voc() {
    static const char* const kNames[] = {
        "background", "aeroplane", "bicycle", "bird",  "boat",        "bottle", "bus",
        "car",        "cat",       "chair",   "cow",   "diningtable", "dog",    "horse",
        "motorbike",  "person",    "pottedplant", "sheep", "sofa",    "train",  "tvmonitor",
    };
    std::vector<ClassEntry> entries;
    for (int i = 0; i < 21; ++i) {
        entries.push_back({i, kNames[i], i == 0});
    }
    return ClassMap(std::move(entries), 255);
}

ClassMap ClassMap::binary(std::string foreground_name, int foreground_id) {
    return ClassMap({{0, "background", true}, {foreground_id, std::move(foreground_name), false}}, std::nullopt);
}

ClassMap ClassMap::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open class map " + path.string());
    }
    nlohmann::json doc;
    try {
        in >> doc;
        std::vector<ClassEntry> entries;
        for (const auto& item : doc.at("classes")) {
            entries.push_back({item.at("id").get<int>(), item.at("name").get<std::string>(),
                               item.value("background", false)});
        }
        std::optional<int> void_id;
        if (doc.contains("void_id") && !doc["void_id"].is_null()) {
            void_id = doc["void_id"].get<int>();
        }
        return ClassMap(std::move(entries), void_id);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("class map " + path.string() + ": " + e.what());
    }
}

ClassMap ClassMap::resolve(const std::string& spec) {
    if (spec == "voc") {
        return voc();
    }
    if (spec == "binary") {
        return binary();
    }
    return from_json_file(spec);
}

std::optional<int> ClassMap::background_id() const {
    for (const auto& e : entries_) {
        if (e.is_background) {
            return e.id;
        }
    }
    return std::nullopt;
}

const ClassEntry* ClassMap::find(int id) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const ClassEntry& e, int value) { return e.id < value; });
    return it != entries_.end() && it->id == id ? &*it : nullptr;
}

bool ClassMap::is_known(int value) const { return is_void(value) || find(value) != nullptr; }

bool ClassMap::is_class(int value) const {
    const auto* e = find(value);
    return e != nullptr && !e->is_background;
}

const std::string& ClassMap::name_of(int id) const {
    const auto* e = find(id);
    if (e == nullptr) {
        throw ConfigError("unknown class id " + std::to_string(id));
    }
    return e->name;
}

std::vector<int> ClassMap::foreground_ids() const {
    std::vector<int> ids;
    for (const auto& e : entries_) {
        if (!e.is_background) {
            ids.push_back(e.id);
        }
    }
    return ids;
}

std::vector<std::array<std::uint8_t, 3>> voc_palette() {
    std::vector<std::array<std::uint8_t, 3>> palette(256);
    for (int i = 0; i < 256; ++i) {
        int label = i;
        std::uint8_t r = 0, g = 0, b = 0;
        for (int shift = 7; shift >= 0; --shift) {
            r |= static_cast<std::uint8_t>(((label >> 0) & 1) << shift);
            g |= static_cast<std::uint8_t>(((label >> 1) & 1) << shift);
            b |= static_cast<std::uint8_t>(((label >> 2) & 1) << shift);
            label >>= 3;
        }
        palette[static_cast<std::size_t>(i)] = {r, g, b};
    }
    return palette;
}

}  // namespace segsynth
