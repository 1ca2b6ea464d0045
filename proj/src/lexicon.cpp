#include "captionforge/lexicon.hpp"

namespace captionforge {

std::vector<std::string> load_lexicon(std::istream& in) {
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        auto end = line.find_last_not_of(" \t\r");
        tokens.push_back(line.substr(begin, end - begin + 1));
    }
    return tokens;
}

const std::vector<std::string>& default_count_lexicon() {
    static const std::vector<std::string> lexicon = {
        "1girl", "2girls", "3girls", "4girls", "5girls", "6+girls",
        "1boy",  "2boys",  "3boys",  "4boys",  "5boys",  "6+boys",
        "multiple_girls", "multiple_boys", "solo", "no_humans"};
    return lexicon;
}

}  // namespace captionforge
