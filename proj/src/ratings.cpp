#include "captionforge/ratings.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace captionforge {

std::string to_string(MatchMode m) {
    switch (m) {
        case MatchMode::duel_fixed: return "duel_fixed";
        case MatchMode::duel_free: return "duel_free";
        case MatchMode::free_for_all: return "free_for_all";
    }
    return "duel_fixed";
}

MatchMode parse_match_mode(const std::string& text) {
    if (text == "duel_fixed") return MatchMode::duel_fixed;
    if (text == "duel_free") return MatchMode::duel_free;
    if (text == "free_for_all") return MatchMode::free_for_all;
    throw std::invalid_argument("unknown match mode: '" + text + "'");
}

void validate_match(const MatchOutcome& match) {
    std::set<std::string> distinct(match.participants.begin(), match.participants.end());
    if (distinct.size() != match.participants.size())
        throw std::invalid_argument("participants must be distinct");

    if (match.mode == MatchMode::free_for_all) {
        if (match.participants.size() < 3)
            throw std::invalid_argument("free_for_all needs at least 3 participants");
        if (std::set<std::string>(match.ranking.begin(), match.ranking.end()) != distinct ||
            match.ranking.size() != match.participants.size())
            throw std::invalid_argument("ranking must be a permutation of participants");
    } else {
        if (match.participants.size() != 2)
            throw std::invalid_argument("duels need exactly 2 participants");
        if (match.duel_result == DuelResult::draw && match.mode != MatchMode::duel_fixed)
            throw std::invalid_argument("draws are only legal in duel_fixed matches");
        if (!match.ranking.empty())
            throw std::invalid_argument("duels must not carry a ranking");
    }
}

MatchOutcome parse_match_line(const std::string& line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("match line must be a JSON object");

    auto require = [&](const char* key) -> const nlohmann::json& {
        auto it = j.find(key);
        if (it == j.end())
            throw std::invalid_argument(std::string("missing field: ") + key);
        return *it;
    };

    MatchOutcome m;
    const auto& id = require("match_id");
    if (!id.is_number_integer()) throw std::invalid_argument("match_id must be an integer");
    m.match_id = id.get<std::int64_t>();
    const auto& ts = require("timestamp");
    if (!ts.is_number_integer()) throw std::invalid_argument("timestamp must be an integer");
    m.timestamp = ts.get<std::int64_t>();
    const auto& mode = require("mode");
    if (!mode.is_string()) throw std::invalid_argument("mode must be a string");
    m.mode = parse_match_mode(mode.get<std::string>());

    const auto& parts = require("participants");
    if (!parts.is_array()) throw std::invalid_argument("participants must be an array");
    for (const auto& p : parts) {
        if (!p.is_string() || p.get<std::string>().empty())
            throw std::invalid_argument("participants must be non-empty strings");
        m.participants.push_back(p.get<std::string>());
    }

    const auto& result = require("result");
    if (!result.is_object()) throw std::invalid_argument("result must be an object");
    if (m.mode == MatchMode::free_for_all) {
        auto it = result.find("ranking");
        if (it == result.end() || !it->is_array())
            throw std::invalid_argument("free_for_all result needs a ranking array");
        for (const auto& p : *it) {
            if (!p.is_string())
                throw std::invalid_argument("ranking entries must be strings");
            m.ranking.push_back(p.get<std::string>());
        }
    } else if (auto it = result.find("winner"); it != result.end()) {
        if (!it->is_string()) throw std::invalid_argument("winner must be a string");
        const std::string winner = it->get<std::string>();
        if (m.participants.size() == 2 && winner == m.participants[0])
            m.duel_result = DuelResult::win_a;
        else if (m.participants.size() == 2 && winner == m.participants[1])
            m.duel_result = DuelResult::win_b;
        else
            throw std::invalid_argument("winner '" + winner + "' is not a participant");
    } else if (result.contains("draw")) {
        if (!result["draw"].is_boolean() || !result["draw"].get<bool>())
            throw std::invalid_argument("draw must be true when present");
        m.duel_result = DuelResult::draw;
    } else {
        throw std::invalid_argument("duel result needs winner or draw");
    }

    validate_match(m);
    return m;
}

std::string match_to_line(const MatchOutcome& match) {
    nlohmann::ordered_json j;
    j["match_id"] = match.match_id;
    j["timestamp"] = match.timestamp;
    j["mode"] = to_string(match.mode);
    j["participants"] = match.participants;
    nlohmann::ordered_json result;
    if (match.mode == MatchMode::free_for_all) {
        result["ranking"] = match.ranking;
    } else if (match.duel_result == DuelResult::draw) {
        result["draw"] = true;
    } else {
        result["winner"] = match.duel_result == DuelResult::win_a ? match.participants[0]
                                                                  : match.participants[1];
    }
    j["result"] = std::move(result);
    return j.dump();
}

std::vector<MatchOutcome> read_matches(std::istream& in) {
    std::vector<MatchOutcome> matches;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            matches.push_back(parse_match_line(line));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("line " + std::to_string(line_number) + ": " +
                                        e.what());
        }
    }
    return matches;
}

double elo_expected(double rating, double opponent_rating) {
    return 1.0 / (1.0 + std::pow(10.0, (opponent_rating - rating) / 400.0));
}

std::pair<double, double> elo_update(double rating_a, double rating_b, double k,
                                     DuelResult result) {
    double actual_a = 0.5;
    if (result == DuelResult::win_a) actual_a = 1.0;
    if (result == DuelResult::win_b) actual_a = 0.0;
    const double expected_a = elo_expected(rating_a, rating_b);
    const double delta = k * (actual_a - expected_a);
    return {rating_a + delta, rating_b - delta};
}

SkillState trueskill_update(const SkillState& state, double perf) {
    if (!(state.sigma_sq > 0.0)) throw std::invalid_argument("sigma^2 must be positive");
    if (!(state.beta_sq > 0.0)) throw std::invalid_argument("beta^2 must be positive");
    const double gain = state.sigma_sq / (state.sigma_sq + state.beta_sq);
    SkillState next = state;
    next.mu = state.mu + gain * (perf - state.mu);
    next.sigma_sq = state.sigma_sq * state.beta_sq / (state.sigma_sq + state.beta_sq);
    return next;
}

std::vector<MatchOutcome> ffa_decompose(const MatchOutcome& match) {
    if (match.mode != MatchMode::free_for_all)
        throw std::invalid_argument("ffa_decompose requires a free_for_all match");
    // Degenerate two-entry rankings are accepted here (they reduce to the
    // plain duel) even though logged free_for_all matches require >= 3.
    std::set<std::string> distinct(match.participants.begin(), match.participants.end());
    if (distinct.size() != match.participants.size())
        throw std::invalid_argument("participants must be distinct");
    if (match.participants.size() < 2)
        throw std::invalid_argument("a ranking needs at least 2 participants");
    if (std::set<std::string>(match.ranking.begin(), match.ranking.end()) != distinct ||
        match.ranking.size() != match.participants.size())
        throw std::invalid_argument("ranking must be a permutation of participants");
    const std::size_t n = match.ranking.size();
    if (n * (n - 1) / 2 >= 1000)
        throw std::invalid_argument("too many participants to derive child match ids");
    if (match.match_id > (std::numeric_limits<std::int64_t>::max() - 999) / 1000 ||
        match.match_id < std::numeric_limits<std::int64_t>::min() / 1000)
        throw std::invalid_argument("match_id too large to derive child match ids");

    std::vector<MatchOutcome> duels;
    std::int64_t pair_index = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            MatchOutcome duel;
            duel.match_id = match.match_id * 1000 + pair_index;
            duel.timestamp = match.timestamp;
            duel.mode = MatchMode::duel_free;
            duel.participants = {match.ranking[i], match.ranking[j]};
            duel.duel_result = DuelResult::win_a;
            duels.push_back(std::move(duel));
            ++pair_index;
        }
    }
    return duels;
}

namespace {

struct ModelTrack {
    double rating = 0.0;       // Elo R or TrueSkill mu
    double sigma_sq = 0.0;     // TrueSkill only
    std::int64_t matches = 0;
    std::vector<HistoryPoint> history;
};

}  // namespace

RatingReport rate_corpus(const std::vector<MatchOutcome>& matches,
                         const RatingEngine& engine) {
    std::unordered_set<std::int64_t> seen_ids;
    for (const auto& m : matches) {
        validate_match(m);
        if (!seen_ids.insert(m.match_id).second)
            throw std::invalid_argument("duplicate match_id: " +
                                        std::to_string(m.match_id));
    }

    std::vector<const MatchOutcome*> ordered;
    ordered.reserve(matches.size());
    for (const auto& m : matches) ordered.push_back(&m);
    std::sort(ordered.begin(), ordered.end(),
              [](const MatchOutcome* a, const MatchOutcome* b) {
                  if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
                  return a->match_id < b->match_id;
              });

    const bool is_elo = engine.kind == RatingEngine::Kind::elo;
    const double beta_sq = engine.trueskill.beta * engine.trueskill.beta;

    std::unordered_map<std::string, ModelTrack> tracks;
    auto track_of = [&](const std::string& model) -> ModelTrack& {
        auto [it, inserted] = tracks.try_emplace(model);
        if (inserted) {
            if (is_elo) {
                it->second.rating = engine.elo.initial;
            } else {
                it->second.rating = engine.trueskill.mu0;
                it->second.sigma_sq = engine.trueskill.sigma0 * engine.trueskill.sigma0;
            }
        }
        return it->second;
    };

    auto fold_duel = [&](const MatchOutcome& duel) {
        // Insert both before taking references; a rehash would invalidate them.
        track_of(duel.participants[0]);
        track_of(duel.participants[1]);
        ModelTrack& a = tracks.at(duel.participants[0]);
        ModelTrack& b = tracks.at(duel.participants[1]);
        if (is_elo) {
            auto [ra, rb] = elo_update(a.rating, b.rating, engine.elo.k, duel.duel_result);
            a.rating = ra;
            b.rating = rb;
        } else {
            const double mu_a = a.rating;
            const double mu_b = b.rating;
            const double beta = engine.trueskill.beta;
            double perf_a = mu_b;
            double perf_b = mu_a;
            if (duel.duel_result == DuelResult::win_a) {
                perf_a = mu_b + beta;
                perf_b = mu_a - beta;
            } else if (duel.duel_result == DuelResult::win_b) {
                perf_a = mu_b - beta;
                perf_b = mu_a + beta;
            }
            SkillState sa{mu_a, a.sigma_sq, beta_sq};
            SkillState sb{mu_b, b.sigma_sq, beta_sq};
            sa = trueskill_update(sa, perf_a);
            sb = trueskill_update(sb, perf_b);
            a.rating = sa.mu;
            a.sigma_sq = sa.sigma_sq;
            b.rating = sb.mu;
            b.sigma_sq = sb.sigma_sq;
        }
        a.matches += 1;
        b.matches += 1;
        a.history.push_back({duel.timestamp, a.rating});
        b.history.push_back({duel.timestamp, b.rating});
    };

    for (const MatchOutcome* m : ordered) {
        if (m->mode == MatchMode::free_for_all) {
            for (const MatchOutcome& duel : ffa_decompose(*m)) fold_duel(duel);
        } else {
            fold_duel(*m);
        }
    }

    RatingReport report;
    for (auto& [model, track] : tracks) {
        ModelStanding standing;
        standing.model = model;
        standing.rating = track.rating;
        standing.matches = track.matches;
        if (is_elo)
            standing.secondary =
                time_weighted_series(track.history, engine.elo.half_life).summary;
        else
            standing.secondary = std::sqrt(track.sigma_sq);
        report.standings.push_back(std::move(standing));
        report.histories.emplace(model, std::move(track.history));
    }
    std::sort(report.standings.begin(), report.standings.end(),
              [](const ModelStanding& a, const ModelStanding& b) {
                  if (a.rating != b.rating) return a.rating > b.rating;
                  return a.model < b.model;
              });
    return report;
}

WeightedSeries time_weighted_series(const std::vector<HistoryPoint>& history,
                                    double half_life) {
    if (history.empty())
        throw std::invalid_argument("time_weighted_series requires a non-empty history");
    if (!(half_life > 0.0)) throw std::invalid_argument("half_life must be positive");

    WeightedSeries out;
    out.series.reserve(history.size());
    double weighted_sum = 0.0;
    double weight_total = 0.0;
    std::int64_t prev_ts = history.front().timestamp;
    for (const auto& point : history) {
        if (point.timestamp < prev_ts)
            throw std::invalid_argument("history timestamps must be non-decreasing");
        const double decay =
            std::exp2(-static_cast<double>(point.timestamp - prev_ts) / half_life);
        weighted_sum = weighted_sum * decay + point.rating;
        weight_total = weight_total * decay + 1.0;
        out.series.push_back(weighted_sum / weight_total);
        prev_ts = point.timestamp;
    }
    out.summary = out.series.back();
    return out;
}

double group_difference(const GroupSimilarityQuery& query) {
    if (query.group.empty())
        throw std::invalid_argument("group_difference requires a non-empty group");
    if (!query.oracle) throw std::invalid_argument("oracle is not set");
    double total = 0.0;
    for (const auto& member : query.group) {
        const double d = query.oracle(member, query.candidate);
        if (!(d >= 0.0 && d <= 1.0))
            throw std::invalid_argument("oracle value outside [0, 1]");
        total += d;
    }
    return total / static_cast<double>(query.group.size());
}

bool same_character(const GroupSimilarityQuery& query) {
    return group_difference(query) <= query.threshold;
}

}  // namespace captionforge
