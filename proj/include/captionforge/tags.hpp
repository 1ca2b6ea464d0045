#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace captionforge {

// Tag category as carried by booru-style metadata. The "rating" category
// marks the tag that mirrors a post's content rating; a record holds at
// most one of those.
enum class TagCategory { general, character, artist, copyright, meta, rating };

// Content rating levels of the source site.
enum class Rating { general, sensitive, questionable, explicit_ };

// Quality bins, ordered worst to best.
enum class QualityLabel { worst, bad, average, good, best, masterpiece };

// Upload-era bins, ordered oldest to newest.
enum class YearModifier { oldest, old, modern, recent, newest };

inline constexpr int kQualityLabelCount = 6;
inline constexpr int kYearModifierCount = 5;

std::string_view to_string(TagCategory c);
std::string_view to_string(Rating r);
std::string_view to_string(YearModifier y);

// Display text used in captions and record fields, e.g. "worst quality".
std::string_view quality_display(QualityLabel q);
// Canonical token form, e.g. "worst_quality".
std::string_view quality_token(QualityLabel q);

std::optional<TagCategory> parse_tag_category(std::string_view s);
std::optional<Rating> parse_rating(std::string_view s);
std::optional<QualityLabel> parse_quality_display(std::string_view s);
std::optional<YearModifier> parse_year_modifier(std::string_view s);

// Canonical <-> display rendering. Canonical token text stores underscores
// ("hatsune_miku"); captions render them as spaces ("hatsune miku").
std::string display_form(std::string_view canonical);
std::string canonical_form(std::string_view display);

// One categorized tag. name is canonical token text: non-empty, trimmed,
// and contains neither "," nor "|||".
struct Tag {
    std::string name;
    TagCategory category = TagCategory::general;

    bool operator==(const Tag&) const = default;
};

// Returns empty when valid, otherwise the reason the name is not a legal
// canonical tag name.
std::optional<std::string> tag_name_problem(std::string_view name);

}  // namespace captionforge
