#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "captionforge/record.hpp"
#include "captionforge/tags.hpp"

namespace captionforge {

enum class OrderKey { id, year_then_id };

struct WindowConfig {
    std::size_t window_size = 100000;  // >= 10
    bool partition_by_rating = true;
    OrderKey order_key = OrderKey::id;
};

// Cumulative upper percentiles for the six quality labels.
// Strictly increasing; the last one is 100.
struct LabelBoundaries {
    double worst = 8.0;
    double bad = 20.0;
    double average = 60.0;
    double good = 82.0;
    double best = 92.0;
    double masterpiece = 100.0;

    double upper(QualityLabel q) const;
};

struct LabelAssignment {
    QualityLabel quality = QualityLabel::average;
    YearModifier year = YearModifier::modern;

    bool operator==(const LabelAssignment&) const = default;
};

// Year table: oldest through 2017, old through 2019, modern 2020,
// recent through 2022, newest from 2023 on.
YearModifier year_modifier(int year);

// Inclusive nearest-rank percentile: 100 * |{s in window : s <= score}| / |window|.
// Throws std::invalid_argument on an empty window.
double percentile_rank(std::int64_t score, std::span<const std::int64_t> window_scores);

// First label whose cumulative boundary is >= percentile.
QualityLabel quality_label(double percentile, const LabelBoundaries& b);

// Partitions by rating (when enabled), sorts by the order key, chunks into
// tumbling windows of window_size (a final window shorter than half the size
// merges into its predecessor), then labels each record by its percentile
// within its own window. Deterministic and independent of input order.
std::unordered_map<std::int64_t, LabelAssignment> assign_labels(
    const std::vector<ImageRecord>& corpus, const WindowConfig& cfg,
    const LabelBoundaries& b);

}  // namespace captionforge
