#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "captionforge/record.hpp"

namespace captionforge {

// One malformed input line: 1-based line number plus the reason it was
// rejected (names the offending field where there is one).
struct ParseIssue {
    std::size_t line = 0;
    std::string reason;
};

struct ReadOptions {
    // Stop at the first malformed line instead of skipping and collecting.
    bool fail_fast = false;
};

struct ReadResult {
    std::vector<ImageRecord> records;
    std::vector<ParseIssue> issues;
};

// Parses one record per line (see README "Record format"). Blank lines are
// skipped. Records come back in input order; malformed lines land in
// `issues` (just the first one when fail_fast is set).
ReadResult read_records(std::istream& in, const ReadOptions& opts = {});

// Parses a single record line. Throws std::invalid_argument with the
// malformed-line reason on bad input.
ImageRecord parse_record_line(const std::string& line);

// Serializes with a fixed key order: id, width, height, score, rating, year,
// tags, captions, file_size, then quality / year_modifier when present, then
// any preserved extra keys. Output is deterministic byte-for-byte.
std::string record_to_line(const ImageRecord& rec);

void write_records(std::ostream& out, const std::vector<ImageRecord>& records);

}  // namespace captionforge
