#include "captionforge/tags.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace captionforge {

namespace {

constexpr std::array<std::string_view, 6> kCategoryNames = {
    "general", "character", "artist", "copyright", "meta", "rating"};

constexpr std::array<std::string_view, 4> kRatingNames = {
    "general", "sensitive", "questionable", "explicit"};

constexpr std::array<std::string_view, kQualityLabelCount> kQualityDisplay = {
    "worst quality", "bad quality",  "average quality",
    "good quality",  "best quality", "masterpiece"};

constexpr std::array<std::string_view, kQualityLabelCount> kQualityToken = {
    "worst_quality", "bad_quality",  "average_quality",
    "good_quality",  "best_quality", "masterpiece"};

constexpr std::array<std::string_view, kYearModifierCount> kYearNames = {
    "oldest", "old", "modern", "recent", "newest"};

}  // namespace

std::string_view to_string(TagCategory c) {
    return kCategoryNames[static_cast<int>(c)];
}

std::string_view to_string(Rating r) { return kRatingNames[static_cast<int>(r)]; }

std::string_view to_string(YearModifier y) { return kYearNames[static_cast<int>(y)]; }

std::string_view quality_display(QualityLabel q) {
    return kQualityDisplay[static_cast<int>(q)];
}

std::string_view quality_token(QualityLabel q) {
    return kQualityToken[static_cast<int>(q)];
}

std::optional<TagCategory> parse_tag_category(std::string_view s) {
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
        if (s == kCategoryNames[i]) return static_cast<TagCategory>(i);
    return std::nullopt;
}

std::optional<Rating> parse_rating(std::string_view s) {
    for (std::size_t i = 0; i < kRatingNames.size(); ++i)
        if (s == kRatingNames[i]) return static_cast<Rating>(i);
    return std::nullopt;
}

std::optional<QualityLabel> parse_quality_display(std::string_view s) {
    for (std::size_t i = 0; i < kQualityDisplay.size(); ++i)
        if (s == kQualityDisplay[i]) return static_cast<QualityLabel>(i);
    return std::nullopt;
}

std::optional<YearModifier> parse_year_modifier(std::string_view s) {
    for (std::size_t i = 0; i < kYearNames.size(); ++i)
        if (s == kYearNames[i]) return static_cast<YearModifier>(i);
    return std::nullopt;
}

std::string display_form(std::string_view canonical) {
    std::string out(canonical);
    std::replace(out.begin(), out.end(), '_', ' ');
    return out;
}

std::string canonical_form(std::string_view display) {
    std::string out(display);
    std::replace(out.begin(), out.end(), ' ', '_');
    return out;
}

std::optional<std::string> tag_name_problem(std::string_view name) {
    if (name.empty()) return "tag name is empty";
    if (std::isspace(static_cast<unsigned char>(name.front())) ||
        std::isspace(static_cast<unsigned char>(name.back())))
        return "tag name is not trimmed";
    if (name.find(',') != std::string_view::npos)
        return "tag name contains ','";
    if (name.find("|||") != std::string_view::npos)
        return "tag name contains '|||'";
    return std::nullopt;
}

}  // namespace captionforge
