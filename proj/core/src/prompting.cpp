#include "segsynth/prompting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "segsynth/errors.hpp"

namespace segsynth {
namespace {

constexpr std::string_view kLead = "A photograph of";
constexpr std::string_view kLeadEmpty = "A photograph";
constexpr double kWeightTolerance = 1e-6;

bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

bool starts_with_punct(std::string_view s) {
    return !s.empty() && std::string_view(",.;:!?'").find(s.front()) != std::string_view::npos;
}

char fold(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// trims and collapses internal whitespace runs to single spaces
std::string normalize_space(std::string_view s) {
    std::string out;
    bool pending = false;
    for (const char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending = !out.empty();
            continue;
        }
        if (pending) out.push_back(' ');
        pending = false;
        out.push_back(c);
    }
    return out;
}

void push(PromptSpec& spec, std::string_view text, double weight) {
    std::string t = trim(text);
    if (!t.empty()) {
        spec.segments.push_back({std::move(t), weight});
    }
}

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty() && !starts_with_punct(p)) out.push_back(' ');
        out += p;
    }
    return out;
}

// k in 1..4 when weight == 1.1^k
int plus_count(double weight) {
    double w = 1.0;
    for (int k = 1; k <= 4; ++k) {
        w *= 1.1;
        if (std::abs(weight - w) <= kWeightTolerance) return k;
    }
    return 0;
}

struct Match {
    std::size_t pos;
    std::size_t len;
};

}  // namespace

std::string PromptSpec::plain_text() const {
    std::vector<std::string> parts;
    parts.reserve(segments.size());
    for (const auto& s : segments) parts.push_back(s.text);
    return join(parts);
}

std::optional<std::size_t> find_whole_word(std::string_view haystack, std::string_view word) {
    if (word.empty() || word.size() > haystack.size()) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i + word.size() <= haystack.size(); ++i) {
        bool equal = true;
        for (std::size_t k = 0; k < word.size() && equal; ++k) {
            equal = fold(haystack[i + k]) == fold(word[k]);
        }
        if (!equal) continue;
        const bool left_ok = i == 0 || !is_word_char(haystack[i - 1]);
        const bool right_ok = i + word.size() == haystack.size() || !is_word_char(haystack[i + word.size()]);
        if (left_ok && right_ok) return i;
    }
    return std::nullopt;
}

PromptSpec build_simple_prompt(const std::vector<std::string>& class_names, double class_weight) {
    PromptSpec spec;
    if (class_names.empty()) {
        spec.segments.push_back({std::string(kLeadEmpty), 1.0});
        return spec;
    }
    spec.segments.push_back({std::string(kLead), 1.0});
    for (std::size_t i = 0; i < class_names.size(); ++i) {
        if (i > 0) spec.segments.push_back({",", 1.0});
        spec.segments.push_back({class_names[i], class_weight});
    }
    return spec;
}

PromptSpec build_class_aware_prompt(std::string_view caption, const std::vector<std::string>& class_names,
                                    double class_weight) {
    if (!(class_weight >= 1.0)) {
        throw ConfigError("class_weight must be >= 1, got " + std::to_string(class_weight));
    }
    const std::string text = normalize_space(caption);
    if (text.empty()) {
        return build_simple_prompt(class_names, class_weight);
    }

    std::vector<Match> matches;
    std::vector<std::string> missing;
    for (const auto& raw : class_names) {
        const std::string name = normalize_space(raw);
        if (name.empty()) continue;
        const auto pos = find_whole_word(text, name);
        if (!pos) {
            missing.push_back(name);
            continue;
        }
        // a name nested inside an already claimed span is present but not split out again
        const bool overlaps = std::any_of(matches.begin(), matches.end(), [&](const Match& m) {
            return *pos < m.pos + m.len && m.pos < *pos + name.size();
        });
        if (!overlaps) matches.push_back({*pos, name.size()});
    }
    std::sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) { return a.pos < b.pos; });

    PromptSpec spec;
    std::size_t cursor = 0;
    for (const auto& m : matches) {
        push(spec, std::string_view(text).substr(cursor, m.pos - cursor), 1.0);
        spec.segments.push_back({text.substr(m.pos, m.len), class_weight});
        cursor = m.pos + m.len;
    }
    push(spec, std::string_view(text).substr(cursor), 1.0);
    for (const auto& name : missing) {
        spec.segments.push_back({",", 1.0});
        spec.segments.push_back({name, class_weight});
    }
    return spec;
}

PromptSpec build_inpaint_prompt(const std::string& class_name, const std::optional<std::string>& caption,
                                double class_weight) {
    const std::string name = normalize_space(class_name);
    if (name.empty()) {
        throw ConfigError("inpaint prompt needs a class name");
    }
    PromptSpec spec;
    spec.segments.push_back({std::string(kLead), 1.0});
    spec.segments.push_back({name, class_weight});
    if (caption) {
        const std::string clause = normalize_space(*caption);
        if (!clause.empty()) {
            spec.segments.push_back({",", 1.0});
            spec.segments.push_back({clause, 1.0});
        }
    }
    return spec;
}

std::string render_weighted_syntax(const PromptSpec& spec) {
    std::vector<std::string> parts;
    parts.reserve(spec.segments.size());
    for (const auto& s : spec.segments) {
        if (std::abs(s.weight - 1.0) <= kWeightTolerance) {
            parts.push_back(s.text);
        } else if (const int k = plus_count(s.weight); k > 0) {
            parts.push_back("(" + s.text + ")" + std::string(static_cast<std::size_t>(k), '+'));
        } else {
            char buf[32];
            std::snprintf(buf, sizeof(buf), ":%.2f)", s.weight);
            parts.push_back("(" + s.text + buf);
        }
    }
    return join(parts);
}

PromptSpec parse_weighted_syntax(std::string_view text) {
    PromptSpec spec;
    std::size_t i = 0;
    std::string bare;
    auto flush = [&] {
        push(spec, bare, 1.0);
        bare.clear();
    };
    while (i < text.size()) {
        if (text[i] != '(') {
            bare.push_back(text[i++]);
            continue;
        }
        const auto close = text.find(')', i);
        if (close == std::string_view::npos) {
            bare.append(text.substr(i));
            break;
        }
        flush();
        std::string_view inner = text.substr(i + 1, close - i - 1);
        double weight = 1.0;
        std::size_t next = close + 1;
        if (const auto colon = inner.rfind(':'); colon != std::string_view::npos) {
            weight = std::strtod(std::string(inner.substr(colon + 1)).c_str(), nullptr);
            inner = inner.substr(0, colon);
        } else {
            int plus = 0;
            while (next < text.size() && text[next] == '+') {
                ++plus;
                ++next;
            }
            weight = std::pow(1.1, plus);
        }
        push(spec, inner, weight);
        i = next;
    }
    flush();
    return spec;
}

}  // namespace segsynth
