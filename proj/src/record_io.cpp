#include "captionforge/record_io.hpp"

#include <array>
#include <stdexcept>
#include <string_view>

namespace captionforge {

namespace {

using nlohmann::ordered_json;

constexpr std::array<std::string_view, 11> kKnownKeys = {
    "id",       "width",    "height",  "score",   "rating",       "year",
    "tags",     "captions", "file_size", "quality", "year_modifier"};

bool is_known_key(std::string_view key) {
    for (auto k : kKnownKeys)
        if (k == key) return true;
    return false;
}

[[noreturn]] void fail(const std::string& reason) {
    throw std::invalid_argument(reason);
}

std::int64_t require_int(const ordered_json& j, const char* key) {
    if (!j.contains(key)) fail(std::string("missing field: ") + key);
    const auto& v = j.at(key);
    if (!v.is_number_integer())
        fail(std::string("field ") + key + ": expected an integer");
    return v.get<std::int64_t>();
}

std::int64_t require_positive_int(const ordered_json& j, const char* key) {
    std::int64_t v = require_int(j, key);
    if (v < 1) fail(std::string("field ") + key + ": must be >= 1");
    return v;
}

}  // namespace

ImageRecord parse_record_line(const std::string& line) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const ordered_json::parse_error& e) {
        fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("record is not an object");

    ImageRecord rec;
    rec.id = require_int(j, "id");
    rec.width = require_positive_int(j, "width");
    rec.height = require_positive_int(j, "height");
    rec.score = require_int(j, "score");

    if (!j.contains("rating")) fail("missing field: rating");
    if (!j.at("rating").is_string()) fail("field rating: expected a string");
    auto rating = parse_rating(j.at("rating").get<std::string>());
    if (!rating) fail("unknown rating: '" + j.at("rating").get<std::string>() + "'");
    rec.rating = *rating;

    rec.created_year = static_cast<int>(require_int(j, "year"));

    if (!j.contains("tags")) fail("missing field: tags");
    if (!j.at("tags").is_array()) fail("field tags: expected an array");
    int rating_tags = 0;
    for (const auto& t : j.at("tags")) {
        if (!t.is_object() || !t.contains("name") || !t.contains("category"))
            fail("field tags: each tag needs {name, category}");
        if (!t.at("name").is_string() || !t.at("category").is_string())
            fail("field tags: name and category must be strings");
        Tag tag;
        tag.name = t.at("name").get<std::string>();
        if (auto problem = tag_name_problem(tag.name)) fail(*problem);
        auto cat = parse_tag_category(t.at("category").get<std::string>());
        if (!cat)
            fail("unknown tag category: '" + t.at("category").get<std::string>() + "'");
        tag.category = *cat;
        if (tag.category == TagCategory::rating && ++rating_tags > 1)
            fail("more than one rating tag");
        rec.tags.push_back(std::move(tag));
    }

    if (j.contains("captions")) {
        if (!j.at("captions").is_array()) fail("field captions: expected an array");
        for (const auto& c : j.at("captions")) {
            if (!c.is_string()) fail("field captions: entries must be strings");
            rec.captions.push_back(c.get<std::string>());
        }
    }

    if (j.contains("file_size")) {
        const auto& fs = j.at("file_size");
        if (!fs.is_number_integer() || fs.get<std::int64_t>() < 0)
            fail("field file_size: expected a non-negative integer");
        rec.file_size = fs.get<std::uint64_t>();
    }

    if (j.contains("quality")) {
        if (!j.at("quality").is_string()) fail("field quality: expected a string");
        auto q = parse_quality_display(j.at("quality").get<std::string>());
        if (!q) fail("unknown quality: '" + j.at("quality").get<std::string>() + "'");
        rec.quality = *q;
    }

    if (j.contains("year_modifier")) {
        if (!j.at("year_modifier").is_string())
            fail("field year_modifier: expected a string");
        auto y = parse_year_modifier(j.at("year_modifier").get<std::string>());
        if (!y)
            fail("unknown year_modifier: '" + j.at("year_modifier").get<std::string>() + "'");
        rec.year_modifier = *y;
    }

    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!is_known_key(it.key())) rec.extra[it.key()] = it.value();
    }
    return rec;
}

std::string record_to_line(const ImageRecord& rec) {
    ordered_json j;
    j["id"] = rec.id;
    j["width"] = rec.width;
    j["height"] = rec.height;
    j["score"] = rec.score;
    j["rating"] = to_string(rec.rating);
    j["year"] = rec.created_year;
    auto tags = ordered_json::array();
    for (const auto& t : rec.tags)
        tags.push_back({{"name", t.name}, {"category", to_string(t.category)}});
    j["tags"] = std::move(tags);
    j["captions"] = rec.captions;
    j["file_size"] = rec.file_size;
    if (rec.quality) j["quality"] = quality_display(*rec.quality);
    if (rec.year_modifier) j["year_modifier"] = to_string(*rec.year_modifier);
    for (auto it = rec.extra.begin(); it != rec.extra.end(); ++it)
        j[it.key()] = it.value();
    return j.dump();
}

ReadResult read_records(std::istream& in, const ReadOptions& opts) {
    ReadResult result;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            result.records.push_back(parse_record_line(line));
        } catch (const std::invalid_argument& e) {
            result.issues.push_back({lineno, e.what()});
            if (opts.fail_fast) break;
        }
    }
    return result;
}

void write_records(std::ostream& out, const std::vector<ImageRecord>& records) {
    for (const auto& rec : records) out << record_to_line(rec) << '\n';
}

}  // namespace captionforge
