#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace captionforge {

enum class MatchMode { duel_fixed, duel_free, free_for_all };
enum class DuelResult { win_a, win_b, draw };

std::string to_string(MatchMode m);
MatchMode parse_match_mode(const std::string& text);

// One recorded match. Duels carry duel_result; free-for-alls carry a strict
// ranking (best first) that must be a permutation of participants. Draws are
// only legal for duel_fixed.
struct MatchOutcome {
    std::int64_t match_id = 0;
    std::int64_t timestamp = 0;
    MatchMode mode = MatchMode::duel_fixed;
    std::vector<std::string> participants;
    DuelResult duel_result = DuelResult::win_a;
    std::vector<std::string> ranking;

    bool operator==(const MatchOutcome&) const = default;
};

// Throws std::invalid_argument when an invariant is violated.
void validate_match(const MatchOutcome& match);

MatchOutcome parse_match_line(const std::string& line);
std::string match_to_line(const MatchOutcome& match);

// Reads one match per line, skipping blank lines. Throws
// std::invalid_argument("line N: ...") on the first malformed line.
std::vector<MatchOutcome> read_matches(std::istream& in);

double elo_expected(double rating, double opponent_rating);

// Both sides share K, so the pair is zero-sum.
std::pair<double, double> elo_update(double rating_a, double rating_b, double k,
                                     DuelResult result);

struct SkillState {
    double mu = 25.0;
    double sigma_sq = (25.0 / 3.0) * (25.0 / 3.0);
    double beta_sq = (25.0 / 6.0) * (25.0 / 6.0);
};

// mu' = mu + (sigma^2 / (sigma^2 + beta^2)) (perf - mu)
// sigma^2' = sigma^2 beta^2 / (sigma^2 + beta^2)
SkillState trueskill_update(const SkillState& state, double perf);

// Pairwise duels implied by a strict ranking: one per (i, j) with i < j, the
// i-ranked participant winning. Children keep the parent timestamp, run in
// duel_free mode, and get match_id = parent_id * 1000 + pair_index.
std::vector<MatchOutcome> ffa_decompose(const MatchOutcome& match);

struct EloParams {
    double initial = 1000.0;
    double k = 32.0;
    double half_life = 604800.0;  // leaderboard time-weighted column
};

struct TrueSkillParams {
    double mu0 = 25.0;
    double sigma0 = 25.0 / 3.0;
    double beta = 25.0 / 6.0;
};

struct RatingEngine {
    enum class Kind { elo, trueskill };
    Kind kind = Kind::elo;
    EloParams elo;
    TrueSkillParams trueskill;
};

struct HistoryPoint {
    std::int64_t timestamp = 0;
    double rating = 0.0;
    bool operator==(const HistoryPoint&) const = default;
};

struct ModelStanding {
    std::string model;
    double rating = 0.0;
    // sigma under TrueSkill, time-weighted rating under Elo.
    double secondary = 0.0;
    std::int64_t matches = 0;

    bool operator==(const ModelStanding&) const = default;
};

struct RatingReport {
    // Sorted by rating descending, ties broken by model identifier.
    std::vector<ModelStanding> standings;
    std::map<std::string, std::vector<HistoryPoint>> histories;
};

// Sequential fold over matches in (timestamp, match_id) order, free-for-alls
// decomposed in place. Throws on duplicate match_id or invalid matches.
RatingReport rate_corpus(const std::vector<MatchOutcome>& matches,
                         const RatingEngine& engine);

// series[i] is the exponentially weighted mean of history[0..i] with weight
// 2^(-(t_i - t_j) / half_life); the summary is the final series value.
struct WeightedSeries {
    std::vector<double> series;
    double summary = 0.0;
};

WeightedSeries time_weighted_series(const std::vector<HistoryPoint>& history,
                                    double half_life);

struct GroupSimilarityQuery {
    std::vector<std::string> group;
    std::string candidate;
    // Pairwise difference in [0, 1]; not assumed symmetric, always called as
    // oracle(member, candidate).
    std::function<double(const std::string&, const std::string&)> oracle;
    double threshold = 0.5;
};

double group_difference(const GroupSimilarityQuery& query);
bool same_character(const GroupSimilarityQuery& query);

}  // namespace captionforge
