#pragma once

#include <string>
#include <vector>

#include "captionforge/lexicon.hpp"
#include "captionforge/record.hpp"
#include "captionforge/tags.hpp"

namespace captionforge {

// The seven ordered caption segments. All token text is stored in canonical
// (underscore) form; rendering converts to spaced display form. Empty
// strings mean an absent rating/quality/year segment.
struct StructuredCaption {
    std::vector<std::string> person_count;
    std::vector<std::string> characters;
    std::string rating;
    std::vector<std::string> general;
    std::vector<std::string> artists;
    std::string quality;
    std::string year;

    bool operator==(const StructuredCaption&) const = default;

    // Segment-order flattening of every present token.
    std::vector<std::string> flatten() const;
    bool empty() const;
};

enum class Separator { comma, space };

struct RenderOptions {
    Separator separator = Separator::comma;
};

// Every count-lexicon token present among the tags, in lexicon order.
std::vector<std::string> derive_person_count(const std::vector<Tag>& tags,
                                             const std::vector<std::string>& count_lexicon);

// Routes a record's tags into schema segments. Count tokens are matched by
// name against the lexicon regardless of category and removed from the other
// segments; the rating segment takes the record's rating tag when present
// and otherwise falls back to the record's rating field.
StructuredCaption order_tags(const ImageRecord& rec, QualityLabel quality,
                             YearModifier year,
                             const std::vector<std::string>& count_lexicon);

inline StructuredCaption order_tags(const ImageRecord& rec, QualityLabel quality,
                                    YearModifier year) {
    return order_tags(rec, quality, year, default_count_lexicon());
}

// Flattens segments in schema order, joins with ", " (or single spaces),
// rendering underscores as spaces. Empty segments are omitted outright.
std::string serialize_caption(const StructuredCaption& c, const RenderOptions& opts = {});

// Joins an already-flattened token list the same way serialize_caption does.
std::string join_tokens(const std::vector<std::string>& tokens, Separator sep);

// Category lexicons for parsing captions back into segments. Quality, year,
// rating and count tokens are recognized intrinsically.
struct ParseLexicons {
    std::vector<std::string> count = {};  // empty -> default count lexicon
    std::vector<std::string> characters;
    std::vector<std::string> artists;
    std::vector<std::string> general;
};

// Inverse of serialize_caption for comma-rendered canonical captions.
// Throws std::invalid_argument naming the first token that is not covered
// by any lexicon and is not a quality/year/rating/count token.
StructuredCaption parse_caption(const std::string& text, const ParseLexicons& lexicons);

}  // namespace captionforge
