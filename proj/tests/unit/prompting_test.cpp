#include <gtest/gtest.h>

#include <random>

#include "segsynth/errors.hpp"
#include "segsynth/prompting.hpp"

using namespace segsynth;

namespace {

const std::vector<std::string> kVocabulary{"dog", "cat", "person", "horse", "bus", "sheep", "pottedplant", "tvmonitor"};
const std::vector<std::string> kFiller{"a", "small", "runs", "on", "grass", "near", "the", "old", "wall", "bright", "day"};

bool weights_ok(const PromptSpec& spec) {
    for (const auto& s : spec.segments) {
        if (s.text.empty() || !(s.weight > 0.0)) return false;
    }
    return true;
}

}  // namespace

TEST(SimplePrompt, TwoClasses) {
    const auto spec = build_simple_prompt({"dog", "cat"}, 1.21);
    const std::vector<PromptSegment> expected{{"A photograph of", 1.0}, {"dog", 1.21}, {",", 1.0}, {"cat", 1.21}};
    EXPECT_EQ(spec.segments, expected);
    EXPECT_EQ(spec.plain_text(), "A photograph of dog, cat");
}

TEST(SimplePrompt, EmptyAndSingle) {
    EXPECT_EQ(build_simple_prompt({}).segments, (std::vector<PromptSegment>{{"A photograph", 1.0}}));
    EXPECT_EQ(build_simple_prompt({"aeroplane"}).plain_text(), "A photograph of aeroplane");
}

TEST(ClassAwarePrompt, SplitsPresentAndAppendsMissing) {
    const auto spec = build_class_aware_prompt("a dog runs on grass", {"dog", "cat"}, 1.21);
    const std::vector<PromptSegment> expected{
        {"a", 1.0}, {"dog", 1.21}, {"runs on grass", 1.0}, {",", 1.0}, {"cat", 1.21}};
    EXPECT_EQ(spec.segments, expected);
    EXPECT_EQ(spec.plain_text(), "a dog runs on grass, cat");
    EXPECT_EQ(render_weighted_syntax(spec), "a (dog)++ runs on grass, (cat)++");
}

TEST(ClassAwarePrompt, AllPresentLeavesTextUnchanged) {
    const std::string caption = "a Dog chasing a cat across the yard";
    const auto spec = build_class_aware_prompt(caption, {"cat", "dog"}, 1.21);
    EXPECT_EQ(spec.plain_text(), caption);
    int weighted = 0;
    for (const auto& s : spec.segments) weighted += s.weight != 1.0;
    EXPECT_EQ(weighted, 2);
}

TEST(ClassAwarePrompt, FirstOccurrenceOnlyAndWholeWord) {
    const auto spec = build_class_aware_prompt("cats and a cat and a cat", {"cat"}, 1.21);
    const std::vector<PromptSegment> expected{{"cats and a", 1.0}, {"cat", 1.21}, {"and a cat", 1.0}};
    EXPECT_EQ(spec.segments, expected);
}

TEST(ClassAwarePrompt, NeutralWeight) {
    const auto spec = build_class_aware_prompt("a dog", {"dog", "cat"}, 1.0);
    for (const auto& s : spec.segments) EXPECT_EQ(s.weight, 1.0);
    EXPECT_EQ(spec.plain_text(), "a dog, cat");
    EXPECT_EQ(render_weighted_syntax(spec), "a dog, cat");
}

TEST(ClassAwarePrompt, EmptyCaptionFallsBack) {
    EXPECT_EQ(build_class_aware_prompt("  ", {"dog"}, 1.21), build_simple_prompt({"dog"}, 1.21));
}

TEST(ClassAwarePrompt, RejectsWeightBelowOne) {
    EXPECT_THROW(build_class_aware_prompt("a dog", {"dog"}, 0.9), ConfigError);
}

TEST(ClassAwarePrompt, RandomCaptionsContainEveryClass) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<int> words(3, 12);
    std::uniform_int_distribution<std::size_t> filler(0, kFiller.size() - 1);
    std::uniform_int_distribution<std::size_t> vocab(0, kVocabulary.size() - 1);
    std::bernoulli_distribution use_class(0.25), upper(0.3);
    for (int trial = 0; trial < 50; ++trial) {
        std::string caption;
        const int n = words(rng);
        for (int i = 0; i < n; ++i) {
            std::string w = use_class(rng) ? kVocabulary[vocab(rng)] : kFiller[filler(rng)];
            if (upper(rng)) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
            caption += (i ? " " : "") + w;
        }
        std::vector<std::string> classes;
        for (const auto& c : kVocabulary)
            if (std::bernoulli_distribution(0.3)(rng)) classes.push_back(c);

        const auto spec = build_class_aware_prompt(caption, classes, 1.21);
        EXPECT_TRUE(weights_ok(spec));
        const auto plain = spec.plain_text();
        for (const auto& c : classes) EXPECT_TRUE(find_whole_word(plain, c).has_value()) << c << " / " << plain;
        EXPECT_EQ(spec, build_class_aware_prompt(caption, classes, 1.21));
    }
}

TEST(InpaintPrompt, Examples) {
    auto spec = build_inpaint_prompt("horse", std::string("a man riding a horse"), 1.21);
    EXPECT_EQ(spec.plain_text(), "A photograph of horse, a man riding a horse");
    EXPECT_EQ(spec.segments[1], (PromptSegment{"horse", 1.21}));

    spec = build_inpaint_prompt("bus", std::nullopt, 1.0);
    EXPECT_EQ(spec.plain_text(), "A photograph of bus");
    for (const auto& s : spec.segments) EXPECT_EQ(s.weight, 1.0);

    spec = build_inpaint_prompt("bus", std::nullopt, 2.0);
    EXPECT_EQ(render_weighted_syntax(spec), "A photograph of (bus:2.00)");
    EXPECT_THROW(build_inpaint_prompt(" ", std::nullopt), ConfigError);
}

TEST(WeightedSyntax, Rendering) {
    EXPECT_EQ(render_weighted_syntax({{{"dog", 1.21}}, ""}), "(dog)++");
    EXPECT_EQ(render_weighted_syntax({{{"dog", 1.1}}, ""}), "(dog)+");
    EXPECT_EQ(render_weighted_syntax({{{"dog", 1.4641}}, ""}), "(dog)++++");
    EXPECT_EQ(render_weighted_syntax({{{"dog", 1.61051}}, ""}), "(dog:1.61)");
    EXPECT_EQ(render_weighted_syntax({{{"cat", 1.5}}, ""}), "(cat:1.50)");
    EXPECT_EQ(render_weighted_syntax({{{"a", 1.0}, {"b", 1.0}, {",", 1.0}, {"c", 1.0}}, ""}), "a b, c");
}

TEST(WeightedSyntax, RenderParseRoundTrip) {
    std::mt19937_64 rng(77);
    const std::vector<double> weights{1.0, 1.1, 1.21, 1.331, 1.4641, 1.5, 0.8, 2.0};
    std::uniform_int_distribution<std::size_t> wpick(0, weights.size() - 1);
    std::uniform_int_distribution<std::size_t> vocab(0, kVocabulary.size() - 1);
    for (int trial = 0; trial < 50; ++trial) {
        PromptSpec spec;
        for (int i = 0; i < 5; ++i) spec.segments.push_back({kVocabulary[vocab(rng)], weights[wpick(rng)]});
        const auto rendered = render_weighted_syntax(spec);
        const auto parsed = parse_weighted_syntax(rendered);
        EXPECT_EQ(render_weighted_syntax(parsed), rendered);
        EXPECT_EQ(parsed.plain_text(), spec.plain_text());
    }
}

TEST(WholeWord, Matching) {
    EXPECT_EQ(find_whole_word("A Dog barks", "dog"), 2u);
    EXPECT_FALSE(find_whole_word("hotdogs", "dog").has_value());
    EXPECT_EQ(find_whole_word("dog,cat", "cat"), 4u);
    EXPECT_FALSE(find_whole_word("", "cat").has_value());
}
