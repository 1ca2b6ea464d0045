#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "captionforge/tags.hpp"

namespace captionforge {

// One metadata row of the corpus. Immutable value type; quality/year_modifier
// are filled in by the labeling stage and travel with the record from then on.
// Fields we do not know about are kept in `extra` and re-emitted verbatim so
// records can flow through external tools without loss.
struct ImageRecord {
    std::int64_t id = 0;
    std::int64_t width = 1;
    std::int64_t height = 1;
    std::int64_t score = 0;
    Rating rating = Rating::general;
    int created_year = 2000;
    std::vector<Tag> tags;
    std::vector<std::string> captions;
    std::uint64_t file_size = 0;
    std::optional<QualityLabel> quality;
    std::optional<YearModifier> year_modifier;
    nlohmann::ordered_json extra = nlohmann::ordered_json::object();

    double megapixels() const {
        return static_cast<double>(width) * static_cast<double>(height) / 1e6;
    }

    bool operator==(const ImageRecord&) const = default;
};

}  // namespace captionforge
