#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "segsynth/mask_ops.hpp"
#include "test_support.hpp"

using namespace segsynth;
using namespace segsynth::testing;

namespace {

LabelMask label_from(Size size, std::initializer_list<int> values) {
    std::vector<std::uint8_t> data(values.begin(), values.end());
    return LabelMask{GrayImage(size, std::move(data))};
}

}  // namespace

TEST(ExtractClassMasks, AllBackgroundGivesNoMasks) {
    const auto map = ClassMap::voc();
    EXPECT_TRUE(extract_class_masks(LabelMask{GrayImage({4, 4}, 0)}, map).empty());
}

TEST(ExtractClassMasks, BackgroundAndVoidOnly) {
    const auto label = label_from({4, 1}, {0, 255, 255, 0});
    EXPECT_TRUE(extract_class_masks(label, ClassMap::voc()).empty());
}

TEST(ExtractClassMasks, HalvesAreDisjointAndCover) {
    LabelMask label{GrayImage({6, 4})};
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 6; ++x) label.data.at(x, y) = x < 3 ? 3 : 7;
    const auto masks = extract_class_masks(label, ClassMap::voc());
    ASSERT_EQ(masks.size(), 2u);
    EXPECT_EQ(masks[0].class_id, 3);
    EXPECT_EQ(masks[1].class_id, 7);
    for (int y = 0; y < 4; ++y) {
        for (int x = 0; x < 6; ++x) {
            EXPECT_EQ(masks[0].data.at(x, y) + masks[1].data.at(x, y), 1);
        }
    }
}

TEST(ExtractClassMasks, UnknownValueNamesValueAndCoordinate) {
    const auto label = label_from({3, 2}, {0, 1, 0, 0, 40, 40});
    try {
        (void)extract_class_masks(label, small_class_map(2));
        FAIL() << "expected an error";
    } catch (const RasterError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("40"), std::string::npos) << msg;
        EXPECT_NE(msg.find("(1, 1)"), std::string::npos) << msg;
    }
}

TEST(ExtractClassMasks, MatchesDoubleLoopOracleOnRandomLabels) {
    std::mt19937_64 rng(11);
    const auto map = small_class_map(2);
    for (int trial = 0; trial < 50; ++trial) {
        const auto label = random_label(rng, {8, 8}, {0, 1, 2, 255});
        const auto masks = extract_class_masks(label, map);
        const auto expected = oracle::class_masks(label, map);
        ASSERT_EQ(masks.size(), expected.size());
        for (std::size_t i = 0; i < masks.size(); ++i) {
            EXPECT_EQ(masks[i].class_id, expected[i].first);
            EXPECT_EQ(masks[i].data, expected[i].second);
        }
        // union is exactly the non-background, non-void set
        const auto u = mask_union(masks, label.size());
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) {
                const int v = label.data.at(x, y);
                EXPECT_EQ(u.data.at(x, y), (v == 1 || v == 2) ? 1 : 0);
            }
    }
}

TEST(Dilate, RadiusZeroIsIdentity) {
    std::mt19937_64 rng(3);
    const auto m = random_mask(rng, {9, 7}, 0.3, 5);
    EXPECT_EQ(dilate(m, 0), m);
}

TEST(Dilate, CenterPixelGrowsToSquare) {
    BinaryMask m{GrayImage({7, 7}, 0), 1};
    m.data.at(3, 3) = 1;
    const auto d = dilate(m, 1);
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 7; ++x) {
            const bool inside = x >= 2 && x <= 4 && y >= 2 && y <= 4;
            EXPECT_EQ(d.data.at(x, y), inside ? 1 : 0) << x << "," << y;
        }
}

TEST(Dilate, MatchesMaxFilterOracleAndIsMonotone) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = random_mask(rng, {16, 16}, 0.08, 2);
        for (int r : {1, 2, 3}) {
            const auto d = dilate(m, r);
            EXPECT_EQ(d.data, oracle::max_filter(m.data, r)) << "radius " << r;
            EXPECT_EQ(d.class_id, 2);
            for (std::size_t i = 0; i < m.data.values().size(); ++i) {
                EXPECT_GE(d.data.values()[i], m.data.values()[i]);
            }
        }
    }
}

TEST(Dilate, NegativeRadiusThrows) {
    BinaryMask m{GrayImage({2, 2}, 0), 1};
    EXPECT_THROW(dilate(m, -1), RasterError);
}

TEST(MaskUnion, EmptyListIsAllZero) {
    const auto u = mask_union({}, {5, 3});
    EXPECT_EQ(u.size(), (Size{5, 3}));
    EXPECT_FALSE(u.any());
}

TEST(MaskUnion, SizeMismatchThrows) {
    std::vector<BinaryMask> ms{BinaryMask{GrayImage({2, 2}, 1), 1}};
    EXPECT_THROW(mask_union(ms, {3, 3}), RasterError);
}

TEST(Coverage, FullAndPartial) {
    EXPECT_DOUBLE_EQ(coverage(BinaryMask{GrayImage({8, 8}, 1), 1}), 1.0);
    BinaryMask half{GrayImage({4, 1}, std::vector<std::uint8_t>{1, 0, 1, 0}), 1};
    EXPECT_DOUBLE_EQ(coverage(half), 0.5);
    EXPECT_DOUBLE_EQ(coverage(BinaryMask{}), 0.0);
}

TEST(Composite, NoPatchesReturnsBase) {
    std::mt19937_64 rng(1);
    const auto base = random_rgb(rng, {10, 6});
    EXPECT_EQ(composite(base, std::vector<std::pair<RgbImage, BinaryMask>>{}), base);
}

TEST(Composite, FullMaskTakesPatch) {
    const auto red = solid_rgb({4, 4}, 255, 0, 0);
    const auto blue = solid_rgb({4, 4}, 0, 0, 255);
    std::vector<std::pair<RgbImage, BinaryMask>> patches{{blue, BinaryMask{GrayImage({4, 4}, 1), 1}}};
    EXPECT_EQ(composite(red, patches), blue);
}

TEST(Composite, MatchesPixelMergeOracle) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        const Size size{16, 16};
        const auto base = random_rgb(rng, size);
        const auto masks = random_disjoint_masks(rng, size, 3);
        std::vector<std::pair<RgbImage, BinaryMask>> patches;
        std::vector<RgbImage> images;
        std::vector<GrayImage> planes;
        for (const auto& m : masks) {
            images.push_back(random_rgb(rng, size));
            planes.push_back(m.data);
            patches.emplace_back(images.back(), m);
        }
        const auto out = composite(base, patches);
        EXPECT_EQ(out, oracle::pixel_merge(base, images, planes));
        // idempotent in the base
        EXPECT_EQ(composite(out, patches), out);
    }
}

TEST(Composite, OverlapNamesClassesAndPixel) {
    const auto base = solid_rgb({4, 4}, 0, 0, 0);
    BinaryMask a{GrayImage({4, 4}, 0), 3};
    BinaryMask b{GrayImage({4, 4}, 0), 9};
    a.data.at(2, 1) = 1;
    b.data.at(2, 1) = 1;
    b.data.at(3, 3) = 1;
    std::vector<std::pair<RgbImage, BinaryMask>> patches{{base, a}, {base, b}};
    try {
        (void)composite(base, patches);
        FAIL() << "expected overlap error";
    } catch (const RasterError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("3"), std::string::npos);
        EXPECT_NE(msg.find("9"), std::string::npos);
        EXPECT_NE(msg.find("(2, 1)"), std::string::npos) << msg;
    }
}

TEST(Composite, DimensionMismatchThrows) {
    const auto base = solid_rgb({4, 4}, 0, 0, 0);
    std::vector<std::pair<RgbImage, BinaryMask>> patches{{solid_rgb({4, 5}, 1, 1, 1), BinaryMask{GrayImage({4, 4}, 1), 1}}};
    EXPECT_THROW(composite(base, patches), RasterError);
}
