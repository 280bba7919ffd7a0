#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace segsynth {

/// Weight of a token emphasised with "++": each '+' multiplies by 1.1.
inline constexpr double kDefaultClassWeight = 1.21;

struct PromptSegment {
    std::string text;
    double weight = 1.0;

    friend bool operator==(const PromptSegment&, const PromptSegment&) = default;
};

/// Ordered weighted text segments plus an optional negative prompt.
struct PromptSpec {
    std::vector<PromptSegment> segments;
    std::string negative_text;

    /// Segments joined by single spaces, except that no space precedes a segment starting with
    /// punctuation (",.;:!?').
    [[nodiscard]] std::string plain_text() const;
    friend bool operator==(const PromptSpec&, const PromptSpec&) = default;
};

/// "A photograph of n1, n2, ..." with every name weighted `class_weight`; "A photograph" when empty.
PromptSpec build_simple_prompt(const std::vector<std::string>& class_names, double class_weight = kDefaultClassWeight);

/// Splits the caption so the first whole-word, case-insensitive occurrence of each class name
/// becomes its own weighted segment; names missing from the caption are appended after a comma.
/// An empty caption falls back to build_simple_prompt. Throws ConfigError if class_weight < 1.
PromptSpec build_class_aware_prompt(std::string_view caption, const std::vector<std::string>& class_names,
                                    double class_weight = kDefaultClassWeight);

/// "A photograph of <class>, <caption>" with the class segment weighted.
PromptSpec build_inpaint_prompt(const std::string& class_name, const std::optional<std::string>& caption,
                                double class_weight = kDefaultClassWeight);

/// Weighted syntax: weight 1 bare, 1.1^k (k = 1..4) as "(text)" plus k '+', otherwise "(text:w.ww)".
std::string render_weighted_syntax(const PromptSpec& spec);

/// Inverse of render_weighted_syntax up to 2-decimal weight precision.
PromptSpec parse_weighted_syntax(std::string_view text);

/// Whole-word, case-insensitive search. Returns the byte offset of the first match.
std::optional<std::size_t> find_whole_word(std::string_view haystack, std::string_view word);

}  // namespace segsynth
