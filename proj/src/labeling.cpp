#include "captionforge/labeling.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace captionforge {

double LabelBoundaries::upper(QualityLabel q) const {
    switch (q) {
        case QualityLabel::worst: return worst;
        case QualityLabel::bad: return bad;
        case QualityLabel::average: return average;
        case QualityLabel::good: return good;
        case QualityLabel::best: return best;
        case QualityLabel::masterpiece: return masterpiece;
    }
    return masterpiece;
}

YearModifier year_modifier(int year) {
    if (year <= 2017) return YearModifier::oldest;
    if (year <= 2019) return YearModifier::old;
    if (year == 2020) return YearModifier::modern;
    if (year <= 2022) return YearModifier::recent;
    return YearModifier::newest;
}

double percentile_rank(std::int64_t score, std::span<const std::int64_t> window_scores) {
    if (window_scores.empty())
        throw std::invalid_argument("percentile_rank: empty window");
    std::size_t at_or_below = 0;
    for (auto s : window_scores)
        if (s <= score) ++at_or_below;
    return 100.0 * static_cast<double>(at_or_below) /
           static_cast<double>(window_scores.size());
}

QualityLabel quality_label(double percentile, const LabelBoundaries& b) {
    for (int i = 0; i < kQualityLabelCount; ++i) {
        auto q = static_cast<QualityLabel>(i);
        if (percentile <= b.upper(q)) return q;
    }
    return QualityLabel::masterpiece;
}

namespace {

// Labels one window in O(n log n): sort a copy of the scores, then each
// record's count-at-or-below is an upper_bound lookup.
void label_window(std::span<const ImageRecord* const> window,
                  const LabelBoundaries& b,
                  std::unordered_map<std::int64_t, LabelAssignment>& out) {
    std::vector<std::int64_t> sorted;
    sorted.reserve(window.size());
    for (const auto* rec : window) sorted.push_back(rec->score);
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    for (const auto* rec : window) {
        auto at_or_below = static_cast<double>(
            std::upper_bound(sorted.begin(), sorted.end(), rec->score) -
            sorted.begin());
        double percentile = 100.0 * at_or_below / n;
        out[rec->id] = {quality_label(percentile, b), year_modifier(rec->created_year)};
    }
}

void label_partition(std::vector<const ImageRecord*>& part, const WindowConfig& cfg,
                     const LabelBoundaries& b,
                     std::unordered_map<std::int64_t, LabelAssignment>& out) {
    if (part.empty()) return;
    if (cfg.order_key == OrderKey::id) {
        std::sort(part.begin(), part.end(),
                  [](const ImageRecord* a, const ImageRecord* c) { return a->id < c->id; });
    } else {
        std::sort(part.begin(), part.end(), [](const ImageRecord* a, const ImageRecord* c) {
            return std::tie(a->created_year, a->id) < std::tie(c->created_year, c->id);
        });
    }

    const std::size_t w = cfg.window_size;
    std::size_t full_windows = part.size() / w;
    std::size_t tail = part.size() % w;
    std::vector<std::size_t> window_ends;
    for (std::size_t i = 1; i <= full_windows; ++i) window_ends.push_back(i * w);
    if (tail > 0) {
        if (!window_ends.empty() && tail < w / 2)
            window_ends.back() = part.size();  // short final window merges back
        else
            window_ends.push_back(part.size());
    }

    std::size_t begin = 0;
    for (std::size_t end : window_ends) {
        label_window(std::span(part.data() + begin, end - begin), b, out);
        begin = end;
    }
}

}  // namespace

std::unordered_map<std::int64_t, LabelAssignment> assign_labels(
    const std::vector<ImageRecord>& corpus, const WindowConfig& cfg,
    const LabelBoundaries& b) {
    if (cfg.window_size < 10)
        throw std::invalid_argument("assign_labels: window_size must be >= 10");
    std::unordered_map<std::int64_t, LabelAssignment> out;
    out.reserve(corpus.size());
    if (cfg.partition_by_rating) {
        std::array<std::vector<const ImageRecord*>, 4> parts;
        for (const auto& rec : corpus)
            parts[static_cast<int>(rec.rating)].push_back(&rec);
        for (auto& part : parts) label_partition(part, cfg, b, out);
    } else {
        std::vector<const ImageRecord*> all;
        all.reserve(corpus.size());
        for (const auto& rec : corpus) all.push_back(&rec);
        label_partition(all, cfg, b, out);
    }
    return out;
}

}  // namespace captionforge
