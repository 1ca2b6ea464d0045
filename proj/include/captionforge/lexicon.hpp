#pragma once

#include <istream>
#include <string>
#include <vector>

namespace captionforge {

// Lexicon file format: one canonical token per line, UTF-8, '#' starts a
// comment, blank lines ignored. Order is preserved (it is meaningful for the
// person-count lexicon).
std::vector<std::string> load_lexicon(std::istream& in);

// Default person-count lexicon, girls before boys, group tokens last.
const std::vector<std::string>& default_count_lexicon();

}  // namespace captionforge
