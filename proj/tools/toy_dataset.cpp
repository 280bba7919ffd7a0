#include "toy_dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "segsynth/class_map.hpp"
#include "segsynth/dataset_io.hpp"
#include "segsynth/image_codec.hpp"

namespace segsynth::toy {

void write_toy_dataset(const std::filesystem::path& root, const ToyOptions& options) {
    namespace fs = std::filesystem;
    fs::create_directories(root / kImagesDir);
    fs::create_directories(root / kLabelsDir);
    const ClassMap voc = ClassMap::voc();
    const auto palette = voc_palette();
    std::mt19937_64 rng(options.seed);
    const Size size{options.width, options.height};

    for (int s = 0; s < options.samples; ++s) {
        char id[32];
        std::snprintf(id, sizeof(id), "toy_%03d", s);
        const bool empty = s >= options.samples - options.empty_samples;

        RgbImage image(size);
        std::uniform_int_distribution<int> byte(0, 255);
        const int br = byte(rng), bg = byte(rng), bb = byte(rng);
        for (int y = 0; y < size.height; ++y) {
            for (int x = 0; x < size.width; ++x) {
                const int wave = static_cast<int>(20.0 * std::sin(0.15 * x + 0.1 * y));
                image.at(x, y, 0) = static_cast<std::uint8_t>(std::clamp(br / 2 + wave + 64, 0, 255));
                image.at(x, y, 1) = static_cast<std::uint8_t>(std::clamp(bg / 2 + x / 4, 0, 255));
                image.at(x, y, 2) = static_cast<std::uint8_t>(std::clamp(bb / 2 + y / 4, 0, 255));
            }
        }
        GrayImage label(size, 0);

        std::vector<int> present;
        if (!empty) {
            for (const int c : options.class_ids) {
                if (std::bernoulli_distribution(0.7)(rng)) present.push_back(c);
            }
            if (present.empty()) {
                present.push_back(options.class_ids[static_cast<std::size_t>(s) % options.class_ids.size()]);
            }
        }
        for (const int c : present) {
            std::uniform_int_distribution<int> cx(size.width / 6, size.width * 5 / 6);
            std::uniform_int_distribution<int> cy(size.height / 6, size.height * 5 / 6);
            std::uniform_int_distribution<int> radius(std::max(3, size.width / 12), std::max(4, size.width / 5));
            const int x0 = cx(rng), y0 = cy(rng), rx = radius(rng), ry = radius(rng);
            const bool ellipse = std::bernoulli_distribution(0.5)(rng);
            const int r = byte(rng), g = byte(rng), b = byte(rng);
            for (int y = 0; y < size.height; ++y) {
                for (int x = 0; x < size.width; ++x) {
                    const double dx = static_cast<double>(x - x0) / rx;
                    const double dy = static_cast<double>(y - y0) / ry;
                    const bool inside = ellipse ? dx * dx + dy * dy <= 1.0 : std::abs(dx) <= 1.0 && std::abs(dy) <= 1.0;
                    if (!inside) continue;
                    label.at(x, y) = static_cast<std::uint8_t>(c);
                    const int shade = ((x + y) % 7) * 3;
                    image.at(x, y, 0) = static_cast<std::uint8_t>(std::clamp(r + shade, 0, 255));
                    image.at(x, y, 1) = static_cast<std::uint8_t>(std::clamp(g + shade, 0, 255));
                    image.at(x, y, 2) = static_cast<std::uint8_t>(std::clamp(b - shade, 0, 255));
                }
            }
        }
        if (options.void_rings) {
            // outer 1 px ring of each object becomes void, as in VOC annotations
            const GrayImage painted = label;
            for (int y = 0; y < size.height; ++y) {
                for (int x = 0; x < size.width; ++x) {
                    if (painted.at(x, y) != 0) continue;
                    for (int d = 0; d < 4; ++d) {
                        static constexpr int kDx[4] = {1, -1, 0, 0};
                        static constexpr int kDy[4] = {0, 0, 1, -1};
                        const int nx = x + kDx[d], ny = y + kDy[d];
                        if (nx >= 0 && ny >= 0 && nx < size.width && ny < size.height && painted.at(nx, ny) != 0) {
                            label.at(x, y) = 255;
                            break;
                        }
                    }
                }
            }
        }

        write_png(root / kImagesDir / (std::string(id) + ".png"), image);
        write_png(root / kLabelsDir / (std::string(id) + ".png"), IndexedImage{label, palette});
        if (options.captions && s % 2 == 0 && !present.empty()) {
            std::ofstream caption(root / kImagesDir / (std::string(id) + kCaptionSuffix));
            caption << "a " << voc.name_of(present.front()) << " in front of a painted wall\n";
        }
    }
}

}  // namespace segsynth::toy
