#include "captionforge/schema.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace captionforge {

std::vector<std::string> StructuredCaption::flatten() const {
    std::vector<std::string> out;
    out.reserve(person_count.size() + characters.size() + general.size() +
                artists.size() + 3);
    out.insert(out.end(), person_count.begin(), person_count.end());
    out.insert(out.end(), characters.begin(), characters.end());
    if (!rating.empty()) out.push_back(rating);
    out.insert(out.end(), general.begin(), general.end());
    out.insert(out.end(), artists.begin(), artists.end());
    if (!quality.empty()) out.push_back(quality);
    if (!year.empty()) out.push_back(year);
    return out;
}

bool StructuredCaption::empty() const {
    return person_count.empty() && characters.empty() && rating.empty() &&
           general.empty() && artists.empty() && quality.empty() && year.empty();
}

std::vector<std::string> derive_person_count(const std::vector<Tag>& tags,
                                             const std::vector<std::string>& count_lexicon) {
    std::unordered_set<std::string_view> names;
    for (const auto& t : tags) names.insert(t.name);
    std::vector<std::string> out;
    for (const auto& token : count_lexicon)
        if (names.count(token)) out.push_back(token);
    return out;
}

StructuredCaption order_tags(const ImageRecord& rec, QualityLabel quality,
                             YearModifier year,
                             const std::vector<std::string>& count_lexicon) {
    StructuredCaption c;
    c.person_count = derive_person_count(rec.tags, count_lexicon);
    std::unordered_set<std::string_view> counted(c.person_count.begin(),
                                                 c.person_count.end());
    for (const auto& t : rec.tags) {
        if (counted.count(t.name)) continue;
        switch (t.category) {
            case TagCategory::character: c.characters.push_back(t.name); break;
            case TagCategory::artist: c.artists.push_back(t.name); break;
            case TagCategory::rating: c.rating = t.name; break;
            default: c.general.push_back(t.name); break;
        }
    }
    if (c.rating.empty()) c.rating = std::string(to_string(rec.rating));
    c.quality = std::string(quality_token(quality));
    c.year = std::string(to_string(year));
    return c;
}

std::string join_tokens(const std::vector<std::string>& tokens, Separator sep) {
    const char* joiner = sep == Separator::comma ? ", " : " ";
    std::string out;
    for (const auto& token : tokens) {
        if (!out.empty()) out += joiner;
        out += display_form(token);
    }
    return out;
}

std::string serialize_caption(const StructuredCaption& c, const RenderOptions& opts) {
    return join_tokens(c.flatten(), opts.separator);
}

namespace {

bool contains(const std::vector<std::string>& lexicon, const std::string& token) {
    return std::find(lexicon.begin(), lexicon.end(), token) != lexicon.end();
}

std::vector<std::string> split_comma_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string piece = text.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        auto begin = piece.find_first_not_of(' ');
        if (begin == std::string::npos) {
            if (!(tokens.empty() && comma == std::string::npos))
                throw std::invalid_argument("empty token in caption");
        } else {
            auto end = piece.find_last_not_of(' ');
            tokens.push_back(piece.substr(begin, end - begin + 1));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return tokens;
}

}  // namespace

StructuredCaption parse_caption(const std::string& text, const ParseLexicons& lexicons) {
    StructuredCaption c;
    if (text.empty()) return c;
    const auto& counts =
        lexicons.count.empty() ? default_count_lexicon() : lexicons.count;

    for (const auto& display : split_comma_tokens(text)) {
        std::string token = canonical_form(display);
        if (contains(counts, token)) {
            c.person_count.push_back(token);
        } else if (contains(lexicons.characters, token)) {
            c.characters.push_back(token);
        } else if (contains(lexicons.artists, token)) {
            c.artists.push_back(token);
        } else if (auto q = parse_quality_display(display_form(token))) {
            c.quality = token;
        } else if (parse_year_modifier(token)) {
            c.year = token;
        } else if (parse_rating(token)) {
            c.rating = token;
        } else if (contains(lexicons.general, token)) {
            c.general.push_back(token);
        } else {
            throw std::invalid_argument("unknown token: '" + display_form(token) + "'");
        }
    }
    return c;
}

}  // namespace captionforge
