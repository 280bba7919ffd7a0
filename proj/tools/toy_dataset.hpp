#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace segsynth::toy {

struct ToyOptions {
    int samples = 8;
    int width = 128;
    int height = 128;
    std::vector<int> class_ids{8, 12, 15};  // VOC cat, dog, person
    std::uint64_t seed = 7;
    bool void_rings = true;         // 1 px void (255) outline around each object
    bool captions = true;           // sidecar captions on even samples
    int empty_samples = 0;          // trailing samples with background and void only
};

/// Writes a VOC-layout dataset (images/*.png, labels/*.png with the VOC palette) of ellipses and
/// rectangles over textured backgrounds. Every non-empty sample contains at least one class.
void write_toy_dataset(const std::filesystem::path& root, const ToyOptions& options);

}  // namespace segsynth::toy
