#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "captionforge/config.hpp"
#include "captionforge/filter.hpp"
#include "captionforge/labeling.hpp"
#include "captionforge/ratings.hpp"
#include "captionforge/record_io.hpp"
#include "captionforge/synth.hpp"

namespace {

using namespace captionforge;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitMalformed = 2;

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// Resolves --input/--output (empty means the standard streams).
struct Streams {
    std::ifstream file_in;
    std::ofstream file_out;
    std::istream* in = &std::cin;
    std::ostream* out = &std::cout;

    bool open(const std::string& input_path, const std::string& output_path) {
        if (!input_path.empty()) {
            file_in.open(input_path);
            if (!file_in) {
                std::cerr << "cannot open input '" << input_path << "'\n";
                return false;
            }
            in = &file_in;
        }
        if (!output_path.empty()) {
            file_out.open(output_path);
            if (!file_out) {
                std::cerr << "cannot open output '" << output_path << "'\n";
                return false;
            }
            out = &file_out;
        }
        return true;
    }
};

// Reads the whole corpus, reports malformed lines and duplicate ids to
// stderr, and leaves the records sorted by id. Non-zero means abort with
// that exit code.
int read_corpus(std::istream& in, std::vector<ImageRecord>& records) {
    ReadResult result = read_records(in);
    if (!result.issues.empty()) {
        for (const auto& issue : result.issues)
            std::cerr << "line " << issue.line << ": " << issue.reason << "\n";
        return kExitMalformed;
    }
    records = std::move(result.records);
    std::stable_sort(records.begin(), records.end(),
                     [](const ImageRecord& a, const ImageRecord& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].id == records[i - 1].id) {
            std::cerr << "duplicate record id: " << records[i].id << "\n";
            return kExitMalformed;
        }
    }
    return kExitOk;
}

int run_label(const PipelineConfig& cfg) {
    Streams io;
    if (!io.open(cfg.input_path, cfg.output_path)) return kExitMalformed;
    std::vector<ImageRecord> records;
    if (int rc = read_corpus(*io.in, records); rc != kExitOk) return rc;

    auto labels = assign_labels(records, cfg.window, cfg.boundaries);
    for (auto& rec : records) {
        const LabelAssignment& a = labels.at(rec.id);
        rec.quality = a.quality;
        rec.year_modifier = a.year;
    }
    write_records(*io.out, records);
    return kExitOk;
}

nlohmann::ordered_json plan_to_json(const ResizePlan& plan) {
    nlohmann::ordered_json j;
    j["target_width"] = plan.target_width;
    j["target_height"] = plan.target_height;
    j["stages"] = nlohmann::ordered_json::array();
    for (const KernelStep& step : {plan.stage1, plan.stage2}) {
        nlohmann::ordered_json s;
        s["kernel"] = to_string(step.kernel);
        s["width"] = step.width;
        s["height"] = step.height;
        j["stages"].push_back(std::move(s));
    }
    return j;
}

int run_filter(const PipelineConfig& cfg, bool emit_records) {
    Streams io;
    if (!io.open(cfg.input_path, cfg.output_path)) return kExitMalformed;
    std::vector<ImageRecord> records;
    if (int rc = read_corpus(*io.in, records); rc != kExitOk) return rc;

    std::size_t kept = 0, pruned = 0, resized = 0;
    for (const auto& rec : records) {
        FilterDecision decision = classify(rec, cfg.filter);
        switch (decision.verdict) {
            case Verdict::keep: ++kept; break;
            case Verdict::prune: ++pruned; break;
            case Verdict::resize: ++resized; break;
        }
        if (emit_records) {
            if (decision.verdict != Verdict::prune)
                *io.out << record_to_line(rec) << "\n";
            continue;
        }
        nlohmann::ordered_json j;
        j["id"] = rec.id;
        j["verdict"] = to_string(decision.verdict);
        if (decision.reason) j["reason"] = to_string(*decision.reason);
        if (decision.plan) j["plan"] = plan_to_json(*decision.plan);
        if (decision.verdict != Verdict::prune)
            j["bucket"] = effective_bucket(rec, decision, cfg.filter);
        *io.out << j.dump() << "\n";
    }
    std::cerr << "keep\t" << kept << "\nprune\t" << pruned << "\nresize\t" << resized
              << "\n";
    return kExitOk;
}

// Caption synthesis over labeled records; the per-record work is embarrassingly
// parallel and output order (by id) is independent of the thread count.
int synthesize(const std::vector<ImageRecord>& records, const PipelineConfig& cfg,
               unsigned threads, std::ostream& out) {
    CaptionPolicy policy = cfg.caption;
    policy.seed = *cfg.seed;

    for (const auto& rec : records) {
        if (!rec.quality) {
            std::cerr << "record " << rec.id
                      << " has no quality label; run label first\n";
            return kExitValidation;
        }
    }

    std::vector<std::string> captions(records.size());
    auto render_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const ImageRecord& rec = records[i];
            LabelAssignment labels;
            labels.quality = *rec.quality;
            labels.year = rec.year_modifier ? *rec.year_modifier
                                            : year_modifier(rec.created_year);
            captions[i] = render_training_caption(rec, labels, policy, cfg.epoch);
        }
    };

    if (threads <= 1 || records.size() < 2) {
        render_range(0, records.size());
    } else {
        const std::size_t n = records.size();
        const unsigned worker_count = std::min<std::size_t>(threads, n);
        std::vector<std::thread> workers;
        const std::size_t chunk = (n + worker_count - 1) / worker_count;
        for (unsigned w = 0; w < worker_count; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            workers.emplace_back(render_range, begin, end);
        }
        for (auto& t : workers) t.join();
    }

    for (std::size_t i = 0; i < records.size(); ++i) {
        nlohmann::ordered_json j;
        j["id"] = records[i].id;
        j["caption"] = captions[i];
        out << j.dump() << "\n";
    }
    return kExitOk;
}

int run_synth(const PipelineConfig& cfg, unsigned threads) {
    if (!cfg.seed) {
        std::cerr << "synth requires a seed (--seed or config)\n";
        return kExitValidation;
    }
    Streams io;
    if (!io.open(cfg.input_path, cfg.output_path)) return kExitMalformed;
    std::vector<ImageRecord> records;
    if (int rc = read_corpus(*io.in, records); rc != kExitOk) return rc;
    return synthesize(records, cfg, threads, *io.out);
}

int run_pipeline(const PipelineConfig& cfg, unsigned threads) {
    if (!cfg.seed) {
        std::cerr << "pipeline requires a seed (--seed or config)\n";
        return kExitValidation;
    }
    Streams io;
    if (!io.open(cfg.input_path, cfg.output_path)) return kExitMalformed;
    std::vector<ImageRecord> records;
    if (int rc = read_corpus(*io.in, records); rc != kExitOk) return rc;

    auto labels = assign_labels(records, cfg.window, cfg.boundaries);
    for (auto& rec : records) {
        const LabelAssignment& a = labels.at(rec.id);
        rec.quality = a.quality;
        rec.year_modifier = a.year;
    }

    std::vector<ImageRecord> survivors;
    survivors.reserve(records.size());
    std::size_t kept = 0, pruned = 0, resized = 0;
    for (auto& rec : records) {
        FilterDecision decision = classify(rec, cfg.filter);
        switch (decision.verdict) {
            case Verdict::keep: ++kept; break;
            case Verdict::prune: ++pruned; break;
            case Verdict::resize: ++resized; break;
        }
        if (decision.verdict != Verdict::prune) survivors.push_back(std::move(rec));
    }
    std::cerr << "keep\t" << kept << "\nprune\t" << pruned << "\nresize\t" << resized
              << "\n";
    return synthesize(survivors, cfg, threads, *io.out);
}

void write_rating_report(const RatingReport& report, std::ostream& out) {
    for (const auto& s : report.standings)
        out << "standing\t" << s.model << "\t" << fixed3(s.rating) << "\t"
            << fixed3(s.secondary) << "\t" << s.matches << "\n";
    for (const auto& s : report.standings)
        for (const auto& point : report.histories.at(s.model))
            out << "history\t" << s.model << "\t" << point.timestamp << "\t"
                << fixed3(point.rating) << "\n";
}

int run_rate(const PipelineConfig& cfg) {
    Streams io;
    if (!io.open(cfg.input_path, cfg.output_path)) return kExitMalformed;
    std::vector<MatchOutcome> matches;
    try {
        matches = read_matches(*io.in);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitMalformed;
    }
    RatingReport report;
    try {
        report = rate_corpus(matches, cfg.rating);
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitMalformed;
    }
    write_rating_report(report, *io.out);
    return kExitOk;
}

struct ParsedStanding {
    std::string model;
    std::string rating;
    std::string secondary;
    std::string matches;
};

int run_report(const PipelineConfig& cfg) {
    Streams io;
    if (!io.open(cfg.input_path, cfg.output_path)) return kExitMalformed;

    std::vector<ParsedStanding> standings;
    std::map<std::string, std::vector<HistoryPoint>> histories;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(*io.in, line)) {
        ++line_number;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, '\t')) cols.push_back(col);
        try {
            if (cols.at(0) == "standing" && cols.size() == 5) {
                standings.push_back({cols[1], cols[2], cols[3], cols[4]});
            } else if (cols.at(0) == "history" && cols.size() == 4) {
                histories[cols[1]].push_back(
                    {std::stoll(cols[2]), std::stod(cols[3])});
            } else {
                throw std::invalid_argument("unrecognized row");
            }
        } catch (const std::exception&) {
            std::cerr << "line " << line_number << ": malformed report input\n";
            return kExitMalformed;
        }
    }
    if (standings.empty()) {
        std::cerr << "report requires a non-empty leaderboard\n";
        return kExitValidation;
    }

    const double half_life = cfg.rating.elo.half_life;
    for (const auto& s : standings) {
        auto it = histories.find(s.model);
        if (it == histories.end()) continue;
        WeightedSeries ws = time_weighted_series(it->second, half_life);
        *io.out << "series\t" << s.model;
        for (double v : ws.series) *io.out << "\t" << fixed3(v);
        *io.out << "\n";
    }
    for (const auto& s : standings)
        *io.out << "standing\t" << s.model << "\t" << s.rating << "\t" << s.secondary
                << "\t" << s.matches << "\n";
    return kExitOk;
}

int run_validate(const PipelineConfig& cfg, const std::string& config_error) {
    std::vector<std::string> violations;
    if (!config_error.empty()) violations.push_back(config_error);

    Streams io;
    if (!io.open(cfg.input_path, cfg.output_path)) return kExitMalformed;
    ReadResult result = read_records(*io.in);
    for (const auto& issue : result.issues)
        violations.push_back("line " + std::to_string(issue.line) + ": " + issue.reason);

    std::unordered_set<std::int64_t> ids;
    for (const auto& rec : result.records)
        if (!ids.insert(rec.id).second)
            violations.push_back("duplicate record id: " + std::to_string(rec.id));

    for (const auto& v : violations) std::cerr << v << "\n";
    return violations.empty() ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"caption synthesis, corpus filtering, and model rating toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "config file (JSON)")
        ->envname("CAPTIONFORGE_CONFIG");
    std::uint64_t seed = 0;
    auto* seed_opt = app.add_option("--seed", seed, "synthesis seed");
    std::uint64_t epoch = 0;
    auto* epoch_opt = app.add_option("--epoch", epoch, "training epoch");
    std::string engine;
    auto* engine_opt = app.add_option("--engine", engine, "rating engine")
                           ->check(CLI::IsMember({"elo", "trueskill"}));
    double k_factor = 0.0;
    auto* k_opt = app.add_option("--k", k_factor, "Elo K-factor");
    std::string input_path;
    auto* input_opt = app.add_option("--input", input_path, "input path (default stdin)");
    std::string output_path;
    auto* output_opt =
        app.add_option("--output", output_path, "output path (default stdout)");

    auto* label_cmd = app.add_subcommand("label", "assign quality and year labels");
    auto* filter_cmd = app.add_subcommand("filter", "classify records against the policy");
    std::string emit = "decisions";
    filter_cmd->add_option("--emit", emit, "decisions or surviving records")
        ->check(CLI::IsMember({"decisions", "records"}));
    auto* synth_cmd = app.add_subcommand("synth", "render training captions");
    std::string policy_path;
    auto* policy_opt =
        synth_cmd->add_option("--policy", policy_path, "caption policy file (JSON)");
    unsigned threads = 1;
    synth_cmd->add_option("--threads", threads, "worker threads");
    auto* rate_cmd = app.add_subcommand("rate", "fold a match log into a leaderboard");
    double half_life = 0.0;
    auto* half_life_opt =
        rate_cmd->add_option("--half-life", half_life, "time weighting half-life (s)");
    auto* report_cmd = app.add_subcommand("report", "time-weighted series and standings");
    auto* validate_cmd = app.add_subcommand("validate", "check config and records");
    auto* pipeline_cmd =
        app.add_subcommand("pipeline", "label, filter, and synth in one pass");
    pipeline_cmd->add_option("--threads", threads, "worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitMalformed;
    }

    PipelineConfig cfg;
    std::string config_error;
    if (!config_path.empty()) {
        try {
            cfg = load_config_file(config_path);
        } catch (const std::invalid_argument& e) {
            if (app.got_subcommand(validate_cmd) &&
                std::string(e.what()).find("invalid JSON") == std::string::npos &&
                std::string(e.what()).find("cannot open") == std::string::npos) {
                // Structural problems are exactly what validate reports.
                config_error = e.what();
            } else {
                std::cerr << e.what() << "\n";
                return kExitMalformed;
            }
        }
    }

    if (*policy_opt) {
        try {
            CaptionPolicyFile policy = load_caption_policy_file(policy_path);
            cfg.caption = policy.policy;
            if (policy.seed) cfg.seed = policy.seed;
        } catch (const std::invalid_argument& e) {
            std::cerr << e.what() << "\n";
            return kExitMalformed;
        }
    }
    if (*seed_opt) cfg.seed = seed;
    if (*epoch_opt) cfg.epoch = epoch;
    if (*engine_opt)
        cfg.rating.kind =
            engine == "elo" ? RatingEngine::Kind::elo : RatingEngine::Kind::trueskill;
    if (*k_opt) cfg.rating.elo.k = k_factor;
    if (*half_life_opt) cfg.rating.elo.half_life = half_life;
    if (*input_opt) cfg.input_path = input_path;
    if (*output_opt) cfg.output_path = output_path;

    if (app.got_subcommand(validate_cmd)) {
        if (config_error.empty()) {
            try {
                cfg.validate();
            } catch (const std::invalid_argument& e) {
                config_error = e.what();
            }
        }
        return run_validate(cfg, config_error);
    }

    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    }

    if (app.got_subcommand(label_cmd)) return run_label(cfg);
    if (app.got_subcommand(filter_cmd)) return run_filter(cfg, emit == "records");
    if (app.got_subcommand(synth_cmd)) return run_synth(cfg, threads);
    if (app.got_subcommand(rate_cmd)) return run_rate(cfg);
    if (app.got_subcommand(report_cmd)) return run_report(cfg);
    if (app.got_subcommand(pipeline_cmd)) return run_pipeline(cfg, threads);
    return kExitMalformed;
}
