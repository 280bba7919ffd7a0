#include <gtest/gtest.h>

#include "segsynth/mock_backend.hpp"
#include "segsynth/pipeline.hpp"
#include "segsynth/qa.hpp"
#include "test_support.hpp"
#include "toy_dataset.hpp"

using namespace segsynth;
using namespace segsynth::testing;
namespace fs = std::filesystem;

namespace {

class QaRun : public ::testing::Test {
  protected:
    void SetUp() override {
        toy::ToyOptions opt;
        opt.samples = 3;
        opt.width = opt.height = 64;
        toy::write_toy_dataset(data_.path(), opt);
        const auto samples = load_dataset(data_.path(), DatasetLayout::VocIndexed, ClassMap::voc()).samples;
        PipelineConfig config;
        config.gen_resolution = {64, 64};
        MockBackend mock;
        report_ = run(config, samples, ClassMap::voc(), mock, out_.path());
        entries_ = load_manifest(report_.manifest_path);
    }

    QAReport verify() { return verify_run(out_.path(), data_.path(), DatasetLayout::VocIndexed, ClassMap::voc()); }

    const ManifestEntry& first(PathTag tag) const {
        for (const auto& e : entries_)
            if (e.path_tag == tag) return e;
        throw std::runtime_error("no entry");
    }

    const EntryCheck& check_for(const QAReport& r, const std::string& sid) {
        for (const auto& c : r.entries)
            if (c.synthetic_id == sid) return c;
        throw std::runtime_error("no check for " + sid);
    }

    TempDir data_, out_;
    RunReport report_;
    std::vector<ManifestEntry> entries_;
};

// First pixel of the image whose label is background.
std::pair<int, int> background_pixel(const LabelMask& label) {
    for (int y = 0; y < label.size().height; ++y)
        for (int x = 0; x < label.size().width; ++x)
            if (label.data.at(x, y) == 0) return {x, y};
    throw std::runtime_error("no background");
}

}  // namespace

TEST_F(QaRun, CleanRunPasses) {
    ASSERT_TRUE(report_.ok());
    const auto qa = verify();
    EXPECT_EQ(qa.entries.size(), 6u);
    EXPECT_EQ(qa.failures(), 0u);
    EXPECT_GT(qa.mean_abs_pixel_diff_d1, 0.0);
    EXPECT_GT(qa.changed_pixel_ratio_d2, 0.0);
    EXPECT_LT(qa.changed_pixel_ratio_d2, 1.0);
    for (const auto& c : qa.entries) {
        EXPECT_EQ(c.outside_mask_unchanged.has_value(), c.path_tag == PathTag::D2);
    }
    write_qa_report(out_.path(), qa);
    EXPECT_TRUE(fs::exists(out_ / kQaReportFile));
}

TEST_F(QaRun, TamperedD2PixelIsCaught) {
    const auto& e = first(PathTag::D2);
    auto image = read_rgb(out_ / e.image_path);
    const auto label = read_label(data_ / "labels" / (e.source_id + ".png"), DatasetLayout::VocIndexed, ClassMap::voc());
    const auto [x, y] = background_pixel(label);
    image.at(x, y, 1) ^= 0x01;
    write_png(out_ / e.image_path, image);

    const auto qa = verify();
    EXPECT_EQ(qa.failures(), 1u);
    const auto& c = check_for(qa, e.synthetic_id);
    EXPECT_EQ(c.outside_mask_unchanged, false);
    ASSERT_FALSE(c.notes.empty());
}

TEST_F(QaRun, ReplacedLabelFailsOnlyThatEntry) {
    const auto& e = first(PathTag::D1);
    write_png(out_ / e.label_path, IndexedImage{GrayImage({64, 64}, 0), voc_palette()});
    const auto qa = verify();
    EXPECT_EQ(qa.failures(), 1u);
    const auto& c = check_for(qa, e.synthetic_id);
    EXPECT_FALSE(c.label_digest_match);
    EXPECT_TRUE(c.dims_match);
}

TEST_F(QaRun, MissingImageFlagsEntry) {
    const auto& e = first(PathTag::D1);
    fs::remove(out_ / e.image_path);
    const auto qa = verify();
    EXPECT_EQ(qa.failures(), 1u);
    EXPECT_FALSE(check_for(qa, e.synthetic_id).ok());
}

TEST_F(QaRun, WrongSizeImageFlagsEntry) {
    const auto& e = first(PathTag::D1);
    write_png(out_ / e.image_path, solid_rgb({32, 64}, 1, 2, 3));
    const auto qa = verify();
    EXPECT_FALSE(check_for(qa, e.synthetic_id).dims_match);
}

TEST(Qa, MissingManifestThrows) {
    TempDir dir;
    EXPECT_THROW(verify_run(dir.path(), dir.path(), DatasetLayout::VocIndexed, ClassMap::voc()), IoError);
}
