#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <random>

#include "segsynth/dataset_io.hpp"
#include "segsynth/digest.hpp"
#include "test_support.hpp"

using namespace segsynth;
using namespace segsynth::testing;
namespace fs = std::filesystem;

namespace {

void write_pair(const fs::path& root, const std::string& id, const LabelMask& label, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    fs::create_directories(root / kImagesDir);
    fs::create_directories(root / kLabelsDir);
    write_png(root / kImagesDir / (id + ".png"), random_rgb(rng, label.size()));
    write_png(root / kLabelsDir / (id + ".png"), IndexedImage{label.data, voc_palette()});
}

LabelMask two_class_label() {
    LabelMask label{GrayImage({8, 6}, 0)};
    label.data.at(1, 1) = 15;
    label.data.at(5, 4) = 12;
    label.data.at(7, 5) = 255;
    return label;
}

ManifestEntry sample_entry(int i) {
    ManifestEntry e;
    e.source_id = "img" + std::to_string(i);
    e.synthetic_id = synthetic_id(e.source_id, PathTag::D2, i);
    e.path_tag = PathTag::D2;
    e.seed = 0xFFFFFFFFFFFFFFF0ull + static_cast<std::uint64_t>(i);
    e.image_path = "d2/images/" + e.synthetic_id + ".png";
    e.label_path = "d2/labels/" + e.synthetic_id + ".png";
    e.prompt_rendered = "A photograph of (dog)++, \"quoted\" | x";
    e.alpha = 0.8;
    e.backend_info = "mock";
    return e;
}

}  // namespace

TEST(Layout, Parse) {
    EXPECT_EQ(parse_layout("voc-indexed"), DatasetLayout::VocIndexed);
    EXPECT_EQ(parse_layout("binary-masks"), DatasetLayout::BinaryMasks);
    EXPECT_THROW(parse_layout("coco"), ConfigError);
}

TEST(ClassesPresent, Cases) {
    const auto voc = ClassMap::voc();
    LabelMask label{GrayImage({2, 2}, std::vector<std::uint8_t>{0, 255, 0, 255})};
    EXPECT_TRUE(classes_present(label, voc).empty());
    label.data.at(1, 1) = 15;
    EXPECT_EQ(classes_present(label, voc), std::vector<int>{15});
    EXPECT_EQ(classes_present(two_class_label(), voc), (std::vector<int>{12, 15}));
}

TEST(LoadDataset, SortedSamplesWithClasses) {
    TempDir dir;
    for (const std::string id : {"c", "a", "b"}) write_pair(dir.path(), id, two_class_label());
    {
        std::ofstream(dir / "images/a.caption.txt") << "a cat and a dog\n";
    }
    const auto result = load_dataset(dir.path(), DatasetLayout::VocIndexed, ClassMap::voc());
    EXPECT_TRUE(result.issues.empty());
    ASSERT_EQ(result.samples.size(), 3u);
    EXPECT_EQ(result.samples[0].id, "a");
    EXPECT_EQ(result.samples[1].id, "b");
    EXPECT_EQ(result.samples[2].id, "c");
    EXPECT_EQ(result.samples[0].classes, (std::vector<int>{12, 15}));
    EXPECT_EQ(result.samples[0].caption, "a cat and a dog");
    EXPECT_FALSE(result.samples[1].caption.has_value());
    EXPECT_EQ(result.samples[0].label, two_class_label());
}

TEST(LoadDataset, ReportsIssuesWithoutFailing) {
    TempDir dir;
    write_pair(dir.path(), "good", two_class_label());
    write_pair(dir.path(), "orphan", two_class_label());
    fs::remove(dir / "labels/orphan.png");
    write_pair(dir.path(), "mismatch", two_class_label());
    write_png(dir / "labels/mismatch.png", IndexedImage{GrayImage({4, 4}, 0), voc_palette()});
    write_pair(dir.path(), "badvalue", two_class_label());
    write_png(dir / "labels/badvalue.png", IndexedImage{GrayImage({8, 6}, 40), voc_palette()});

    const auto result = load_dataset(dir.path(), DatasetLayout::VocIndexed, ClassMap::voc());
    ASSERT_EQ(result.samples.size(), 1u);
    EXPECT_EQ(result.samples[0].id, "good");
    ASSERT_EQ(result.issues.size(), 3u);
    std::set<std::string> ids;
    for (const auto& i : result.issues) ids.insert(i.id);
    EXPECT_EQ(ids, (std::set<std::string>{"orphan", "mismatch", "badvalue"}));
}

TEST(LoadDataset, MissingRootThrows) {
    TempDir dir;
    EXPECT_THROW(load_dataset(dir / "none", DatasetLayout::VocIndexed, ClassMap::voc()), IoError);
    EXPECT_THROW(load_dataset(dir.path(), DatasetLayout::VocIndexed, ClassMap::voc()), IoError);
}

TEST(LoadDataset, BinaryMasksLayout) {
    TempDir dir;
    std::mt19937_64 rng(2);
    fs::create_directories(dir / "images");
    fs::create_directories(dir / "labels");
    write_png(dir / "images/m.png", random_rgb(rng, {4, 4}));
    GrayImage mask({4, 4}, 0);
    mask.at(2, 2) = 255;
    write_png(dir / "labels/m.png", mask);
    const auto result = load_dataset(dir.path(), DatasetLayout::BinaryMasks, ClassMap::binary());
    ASSERT_EQ(result.samples.size(), 1u);
    EXPECT_EQ(result.samples[0].classes, std::vector<int>{1});
    EXPECT_EQ(result.samples[0].label.data.at(2, 2), 1);
    EXPECT_EQ(result.samples[0].label.data.at(0, 0), 0);
}

TEST(WriteSynthetic, CopiesLabelBytesAndSeparatesPaths) {
    TempDir src, out;
    write_pair(src.path(), "s1", two_class_label());
    const auto sample = load_dataset(src.path(), DatasetLayout::VocIndexed, ClassMap::voc()).samples.at(0);
    std::mt19937_64 rng(3);
    const auto generated = random_rgb(rng, sample.image.size());

    const auto e1 = write_synthetic_sample(out.path(), sample, generated, {PathTag::D1, 0, 11, "p", 0.8, "mock"});
    const auto e2 = write_synthetic_sample(out.path(), sample, generated, {PathTag::D2, 0, 12, "q", 0.8, "mock"});
    EXPECT_NE(e1.synthetic_id, e2.synthetic_id);
    EXPECT_EQ(e1.image_path, "d1/images/" + e1.synthetic_id + ".png");
    EXPECT_EQ(e2.label_path, "d2/labels/" + e2.synthetic_id + ".png");
    EXPECT_EQ(e1.seed, 11u);
    EXPECT_EQ(sha256_file(out / e1.label_path), sha256_file(sample.label_path));
    EXPECT_EQ(sha256_file(out / e2.label_path), sha256_file(sample.label_path));
    EXPECT_EQ(read_rgb(out / e1.image_path), generated);

    EXPECT_THROW(write_synthetic_sample(out.path(), sample, random_rgb(rng, {3, 3}), {}), RasterError);
}

TEST(SyntheticId, Format) {
    EXPECT_EQ(synthetic_id("2007_000032", PathTag::D1, 0), "2007_000032_d1_v0");
    EXPECT_EQ(synthetic_id("x", PathTag::D2, 3), "x_d2_v3");
}

TEST(Manifest, RoundTrips) {
    EXPECT_EQ(serialize_manifest({}), "");
    EXPECT_TRUE(parse_manifest("").empty());
    const std::vector<ManifestEntry> entries{sample_entry(0), sample_entry(1)};
    const auto text = serialize_manifest(entries);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
    EXPECT_EQ(parse_manifest(text), entries);

    TempDir dir;
    const auto path = write_manifest(dir.path(), entries);
    EXPECT_EQ(path.filename(), kManifestFile);
    EXPECT_EQ(load_manifest(path), entries);
}

TEST(Manifest, IgnoresUnknownKeys) {
    auto text = serialize_manifest({sample_entry(4)});
    text.insert(1, R"("future_field": [1, 2], )");
    EXPECT_EQ(parse_manifest(text), std::vector<ManifestEntry>{sample_entry(4)});
}

TEST(Manifest, MalformedLineNamesLine) {
    const auto text = serialize_manifest({sample_entry(0)}) + "{not json\n";
    try {
        (void)parse_manifest(text);
        FAIL();
    } catch (const IoError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}
