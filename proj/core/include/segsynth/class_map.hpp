#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace segsynth {

struct ClassEntry {
    int id = 0;
    std::string name;
    bool is_background = false;

    friend bool operator==(const ClassEntry&, const ClassEntry&) = default;
};

/// Maps label values to class names. At most one entry is background; the void id, when set,
/// marks pixels that belong to no class.
class ClassMap {
  public:
    ClassMap() = default;
    /// Throws ConfigError on duplicate ids, several background entries, ids outside [0,255],
    /// or a void id that collides with a class id.
    ClassMap(std::vector<ClassEntry> entries, std::optional<int> void_id);

    /// The 21 PASCAL VOC classes (0 = background) with void 255.
    static ClassMap voc();
    /// Single foreground class on an implicit 0 background, no void.
    static ClassMap binary(std::string foreground_name = "foreground", int foreground_id = 1);
    /// JSON: {"void_id": 255, "classes": [{"id": 0, "name": "background", "background": true}, ...]}
    static ClassMap from_json_file(const std::filesystem::path& path);
    /// "voc", "binary" or a path to a JSON class-map file.
    static ClassMap resolve(const std::string& spec);

    [[nodiscard]] const std::vector<ClassEntry>& entries() const { return entries_; }
    [[nodiscard]] std::optional<int> void_id() const { return void_id_; }
    [[nodiscard]] std::optional<int> background_id() const;

    [[nodiscard]] const ClassEntry* find(int id) const;
    [[nodiscard]] bool is_known(int value) const;
    /// True for ids of non-background entries.
    [[nodiscard]] bool is_class(int value) const;
    [[nodiscard]] bool is_void(int value) const { return void_id_ && *void_id_ == value; }
    /// Throws ConfigError for unknown ids.
    [[nodiscard]] const std::string& name_of(int id) const;
    [[nodiscard]] std::vector<int> foreground_ids() const;

    friend bool operator==(const ClassMap&, const ClassMap&) = default;

  private:
    std::vector<ClassEntry> entries_;
    std::optional<int> void_id_;
};

/// The standard 256-entry PASCAL VOC label colormap.
std::vector<std::array<std::uint8_t, 3>> voc_palette();

}  // namespace segsynth
