// End-to-end checks of the captionforge binary: exit codes, stream wiring,
// config/env precedence, and byte-level output stability.

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "captionforge/labeling.hpp"
#include "captionforge/ratings.hpp"
#include "captionforge/record_io.hpp"
#include "captionforge/schema.hpp"
#include "test_support.hpp"

using namespace captionforge;

namespace {

std::string g_bin;
testsupport::TempDir* g_tmp = nullptr;
int g_checks = 0;
int g_failures = 0;
int g_seq = 0;

bool check(bool ok, const std::string& what) {
    ++g_checks;
    if (!ok) {
        ++g_failures;
        std::printf("    FAIL: %s\n", what.c_str());
    }
    return ok;
}

void check_eq(const std::string& got, const std::string& want, const std::string& what) {
    if (!check(got == want, what))
        std::printf("      got:  '%s'\n      want: '%s'\n", got.c_str(), want.c_str());
}

void check_contains(const std::string& haystack, const std::string& needle,
                    const std::string& what) {
    if (!check(haystack.find(needle) != std::string::npos, what))
        std::printf("      text: '%s'\n      lacks: '%s'\n", haystack.c_str(),
                    needle.c_str());
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    const std::string out_path = g_tmp->path("out_" + std::to_string(g_seq) + ".txt");
    const std::string err_path = g_tmp->path("err_" + std::to_string(g_seq) + ".txt");
    ++g_seq;
    std::string cmd = env_prefix.empty() ? "" : env_prefix + " ";
    cmd += g_bin + " " + args + " > " + out_path + " 2> " + err_path;
    RunResult r;
    r.exit_code = testsupport::run(cmd);
    r.out = testsupport::read_file(out_path);
    r.err = testsupport::read_file(err_path);
    return r;
}

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

// ---- fixtures --------------------------------------------------------------

ImageRecord labeled_record(std::int64_t id, int w, int h, std::int64_t score) {
    ImageRecord rec = testsupport::basic_record(id, w, h, score, Rating::general, 2021);
    rec.tags.push_back({"1girl", TagCategory::general});
    rec.tags.push_back({"short_hair", TagCategory::general});
    rec.tags.push_back({"smile_" + std::to_string(id % 5), TagCategory::general});
    rec.tags.push_back({"rem", TagCategory::character});
    rec.tags.push_back({"artist_" + std::to_string(id % 3), TagCategory::artist});
    rec.quality = static_cast<QualityLabel>(id % 6);
    rec.year_modifier = static_cast<YearModifier>(id % 5);
    return rec;
}

std::string corpus_text(const std::vector<ImageRecord>& records) {
    std::ostringstream out;
    for (const auto& rec : records) out << record_to_line(rec) << "\n";
    return out.str();
}

std::string labeled_corpus_file(const std::string& name, int n) {
    std::vector<ImageRecord> records;
    for (int i = 1; i <= n; ++i)
        records.push_back(labeled_record(i, 900 + i % 300, 900 + (i * 7) % 300, i));
    const std::string path = g_tmp->path(name);
    testsupport::write_file(path, corpus_text(records));
    return path;
}

std::string duel_line(std::int64_t id, std::int64_t ts, const std::string& a,
                      const std::string& b, const std::string& winner) {
    MatchOutcome m;
    m.match_id = id;
    m.timestamp = ts;
    m.mode = MatchMode::duel_fixed;
    m.participants = {a, b};
    m.duel_result = winner == a ? DuelResult::win_a : DuelResult::win_b;
    return match_to_line(m);
}

// ---- validate --------------------------------------------------------------

void validate_clean_corpus() {
    std::vector<ImageRecord> records{labeled_record(1, 1000, 1000, 5),
                                     labeled_record(2, 1100, 900, 9)};
    const std::string path = g_tmp->path("clean.jsonl");
    testsupport::write_file(path, corpus_text(records));
    RunResult r = run_cli("validate --input " + path);
    check(r.exit_code == 0, "clean corpus must validate with exit 0");
    check(r.err.empty(), "clean corpus must print nothing, got: " + r.err);
}

void validate_reports_all_violations() {
    std::vector<ImageRecord> records{labeled_record(7, 1000, 1000, 5)};
    std::string text = corpus_text(records);
    text += "{\"id\":8,\"width\":\"wide\",\"height\":10,\"score\":1,\"rating\":"
            "\"general\",\"created_year\":2020,\"tags\":[]}\n";
    text += corpus_text(records);  // id 7 again
    const std::string path = g_tmp->path("dirty.jsonl");
    testsupport::write_file(path, text);
    RunResult r = run_cli("validate --input " + path);
    check(r.exit_code == 1, "violations must exit 1, got " + std::to_string(r.exit_code));
    check_contains(r.err, "line 2: field width", "the malformed line is named");
    check_contains(r.err, "duplicate record id: 7", "the duplicate id is named");
}

void validate_reports_config_problems() {
    const std::string cfg = g_tmp->path("bad_key.json");
    testsupport::write_file(cfg, "{\"window\": {\"syze\": 50}}");
    const std::string corpus = labeled_corpus_file("validate_cfg_corpus.jsonl", 2);
    RunResult r = run_cli("validate --config " + cfg + " --input " + corpus);
    check(r.exit_code == 1, "structural config problems are validation findings");
    check_contains(r.err, "config: window has unknown key 'syze'", "the key is named");

    const std::string broken = g_tmp->path("broken.json");
    testsupport::write_file(broken, "{\"window\": ");
    r = run_cli("validate --config " + broken + " --input " + corpus);
    check(r.exit_code == 2, "unparseable config must exit 2");
    check_contains(r.err, "invalid JSON", "the parse failure is reported");
}

// ---- label -----------------------------------------------------------------

void label_assigns_display_labels() {
    std::vector<ImageRecord> records;
    for (int i = 1; i <= 10; ++i) {
        ImageRecord rec = testsupport::basic_record(i, 1000, 1000, i, Rating::general,
                                                    2020);
        rec.tags.push_back({"1girl", TagCategory::general});
        records.push_back(std::move(rec));
    }
    const std::string in = g_tmp->path("unlabeled.jsonl");
    testsupport::write_file(in, corpus_text(records));
    RunResult r = run_cli("label --input " + in);
    check(r.exit_code == 0, "label over a clean corpus exits 0");

    std::vector<std::string> lines = testsupport::split_lines(r.out);
    check(lines.size() == 10, "one output record per input record");
    std::istringstream round(r.out);
    ReadResult parsed = read_records(round);
    check(parsed.issues.empty(), "label output must parse back cleanly");
    bool labels_match = parsed.records.size() == 10;
    if (labels_match) {
        // Scores 1..10 in one window: percentile of score i is 10*i.
        const std::vector<QualityLabel> expected{
            QualityLabel::bad,   QualityLabel::bad,   QualityLabel::average,
            QualityLabel::average, QualityLabel::average, QualityLabel::average,
            QualityLabel::good,  QualityLabel::good,  QualityLabel::best,
            QualityLabel::masterpiece};
        for (int i = 0; i < 10; ++i)
            labels_match = labels_match &&
                           parsed.records[static_cast<std::size_t>(i)].quality ==
                               expected[static_cast<std::size_t>(i)];
    }
    check(labels_match, "the score ladder 1..10 maps onto the documented labels");
    check_contains(lines[9], "\"quality\":\"masterpiece\"",
                   "labels are serialized in display form");
    check_contains(lines[0], "\"year_modifier\":\"modern\"", "2020 labels as modern");

    const std::string bad = g_tmp->path("label_bad.jsonl");
    testsupport::write_file(bad, "not json\n");
    r = run_cli("label --input " + bad);
    check(r.exit_code == 2, "malformed records must exit 2");
    check_contains(r.err, "line 1:", "the offending line is named");
}

// ---- filter ----------------------------------------------------------------

void filter_emits_decisions() {
    std::vector<ImageRecord> records{labeled_record(1, 1024, 1024, 5),
                                     labeled_record(2, 640, 640, 5),
                                     labeled_record(3, 3000, 2000, 5)};
    const std::string in = g_tmp->path("filter_in.jsonl");
    testsupport::write_file(in, corpus_text(records));
    RunResult r = run_cli("filter --input " + in);
    check(r.exit_code == 0, "filter exits 0");
    check_eq(r.err, "keep\t1\nprune\t1\nresize\t1\n", "stderr carries the tally");

    std::vector<std::string> lines = testsupport::split_lines(r.out);
    check(lines.size() == 3, "one decision per record");
    if (lines.size() == 3) {
        nlohmann::json keep = nlohmann::json::parse(lines[0]);
        check(keep.at("id") == 1 && keep.at("verdict") == "keep", "1024x1024 keeps");
        check(keep.at("bucket") == 1.0 && !keep.contains("reason") &&
                  !keep.contains("plan"),
              "keep rows carry only a bucket");

        nlohmann::json prune = nlohmann::json::parse(lines[1]);
        check(prune.at("verdict") == "prune" && prune.at("reason") == "too_small",
              "640x640 prunes as too_small");
        check(!prune.contains("bucket") && !prune.contains("plan"),
              "pruned rows carry no bucket or plan");

        nlohmann::json resize = nlohmann::json::parse(lines[2]);
        check(resize.at("verdict") == "resize", "3000x2000 resizes");
        if (check(resize.contains("plan"), "resize rows carry the plan")) {
            const auto& plan = resize.at("plan");
            check(plan.at("target_width") == 2432 && plan.at("target_height") == 1600,
                  "the plan lands on 2432x1600");
            check(plan.at("stages").size() == 2 &&
                      plan.at("stages")[0].at("kernel") == "nearest" &&
                      plan.at("stages")[1].at("kernel") == "lanczos",
                  "the plan stages run nearest then lanczos");
            check(plan.at("stages")[1].at("width") == 2432 &&
                      plan.at("stages")[1].at("height") == 1600,
                  "the final stage lands on the target");
        }
        check(resize.at("bucket") == 2.25, "resized records bucket by target area");
    }
}

void filter_emits_records() {
    // Input deliberately out of id order; survivors come back sorted.
    std::vector<ImageRecord> records{labeled_record(3, 3000, 2000, 5),
                                     labeled_record(1, 1024, 1024, 5),
                                     labeled_record(2, 640, 640, 5)};
    const std::string in = g_tmp->path("filter_rec_in.jsonl");
    testsupport::write_file(in, corpus_text(records));
    RunResult r = run_cli("filter --emit records --input " + in);
    check(r.exit_code == 0, "filter --emit records exits 0");
    check_eq(r.err, "keep\t1\nprune\t1\nresize\t1\n", "the tally is unchanged");
    check_eq(r.out, record_to_line(records[1]) + "\n" + record_to_line(records[0]) + "\n",
             "survivors pass through byte-identically in id order");
}

// ---- synth -----------------------------------------------------------------

void synth_requires_seed() {
    const std::string in = labeled_corpus_file("synth_seedless.jsonl", 3);
    RunResult r = run_cli("synth --input " + in);
    check(r.exit_code == 1, "seedless synth must exit 1");
    check_eq(r.err, "synth requires a seed (--seed or config)\n", "and say why");
}

void synth_requires_quality_labels() {
    ImageRecord rec = testsupport::basic_record(5, 1000, 1000, 1, Rating::general, 2020);
    rec.tags.push_back({"1girl", TagCategory::general});
    const std::string in = g_tmp->path("synth_unlabeled.jsonl");
    testsupport::write_file(in, record_to_line(rec) + "\n");
    RunResult r = run_cli("synth --seed 3 --input " + in);
    check(r.exit_code == 1, "unlabeled records must exit 1");
    check_eq(r.err, "record 5 has no quality label; run label first\n",
             "the record is named");
}

void synth_is_deterministic() {
    const std::string in = labeled_corpus_file("synth_det.jsonl", 500);
    RunResult a = run_cli("synth --seed 11 --epoch 3 --input " + in);
    RunResult b = run_cli("synth --seed 11 --epoch 3 --input " + in);
    RunResult c = run_cli("synth --seed 11 --epoch 3 --threads 3 --input " + in);
    check(a.exit_code == 0 && b.exit_code == 0 && c.exit_code == 0, "synth exits 0");
    check(!a.out.empty() && testsupport::split_lines(a.out).size() == 500,
          "500 caption lines come back");
    check(a.out == b.out, "reruns are byte-identical");
    check(a.out == c.out, "thread count does not leak into the output");

    RunResult d = run_cli("synth --seed 12 --epoch 3 --input " + in);
    check(d.exit_code == 0 && d.out != a.out, "a different seed changes the output");

    nlohmann::json first = nlohmann::json::parse(testsupport::split_lines(a.out)[0]);
    check(first.contains("id") && first.contains("caption"),
          "caption rows are {id, caption} objects");
}

void synth_policy_file_and_precedence() {
    const std::string in = labeled_corpus_file("synth_policy.jsonl", 40);
    const std::string policy = g_tmp->path("policy_seed9.json");
    testsupport::write_file(policy, "{\"seed\": 9}");

    RunResult from_policy = run_cli("synth --policy " + policy + " --input " + in);
    check(from_policy.exit_code == 0, "a policy file seed satisfies synth");
    RunResult from_flag = run_cli("synth --seed 9 --input " + in);
    check_eq(from_policy.out, from_flag.out,
             "a default policy file with seed 9 matches --seed 9");

    RunResult overridden =
        run_cli("synth --policy " + policy + " --seed 10 --input " + in);
    check(overridden.exit_code == 0 && overridden.out != from_policy.out,
          "--seed overrides the policy file seed");

    const std::string bad = g_tmp->path("policy_bad.json");
    testsupport::write_file(bad, "{\"stagez\": {}}");
    RunResult r = run_cli("synth --policy " + bad + " --seed 1 --input " + in);
    check(r.exit_code == 2, "a structurally bad policy file exits 2");
    check_contains(r.err, "config: caption has unknown key 'stagez'",
                   "the unknown key is named");
}

// ---- rate ------------------------------------------------------------------

void rate_elo_duel_exactly() {
    const std::string in = g_tmp->path("one_duel.jsonl");
    testsupport::write_file(in, duel_line(1, 100, "a", "b", "a") + "\n");
    RunResult r = run_cli("rate --input " + in);
    check(r.exit_code == 0, "rate exits 0");
    check_eq(r.out,
             "standing\ta\t1016.000\t1016.000\t1\n"
             "standing\tb\t984.000\t984.000\t1\n"
             "history\ta\t100\t1016.000\n"
             "history\tb\t100\t984.000\n",
             "a single duel produces the documented report");
}

void rate_k_flag_and_config() {
    const std::string in = g_tmp->path("k_duel.jsonl");
    testsupport::write_file(in, duel_line(1, 100, "a", "b", "a") + "\n");
    RunResult r = run_cli("rate --k 64 --input " + in);
    check_contains(r.out, "standing\ta\t1032.000", "--k 64 doubles the transfer");

    const std::string cfg = g_tmp->path("k_config.json");
    testsupport::write_file(cfg, "{\"rating\": {\"k\": 64}}");
    r = run_cli("rate --config " + cfg + " --input " + in);
    check_contains(r.out, "standing\ta\t1032.000", "rating.k loads from config");
    r = run_cli("rate --config " + cfg + " --k 16 --input " + in);
    check_contains(r.out, "standing\ta\t1008.000", "--k beats the config value");
}

void rate_half_life_flag() {
    std::string log = duel_line(1, 0, "a", "b", "a") + "\n" +
                      duel_line(2, 604800, "a", "b", "a") + "\n";
    const std::string in = g_tmp->path("hl_duels.jsonl");
    testsupport::write_file(in, log);

    auto [a1, b1] = elo_update(1000.0, 1000.0, 32.0, DuelResult::win_a);
    auto [a2, b2] = elo_update(a1, b1, 32.0, DuelResult::win_a);
    WeightedSeries expected =
        time_weighted_series({{0, a1}, {604800, a2}}, 302400.0);

    RunResult r = run_cli("rate --half-life 302400 --input " + in);
    check(r.exit_code == 0, "rate accepts --half-life");
    check_contains(r.out, "standing\ta\t" + fixed3(a2) + "\t" + fixed3(expected.summary),
                   "--half-life reshapes the time-weighted column");
}

void rate_trueskill_engine() {
    const std::string in = g_tmp->path("ts_duel.jsonl");
    testsupport::write_file(in, duel_line(1, 100, "a", "b", "a") + "\n");
    RunResult r = run_cli("rate --engine trueskill --input " + in);
    check(r.exit_code == 0, "trueskill engine runs");
    std::vector<std::string> lines = testsupport::split_lines(r.out);
    check(lines.size() == 4, "two standings plus two history rows");
    if (lines.size() == 4) {
        check_eq(lines[0], "standing\ta\t28.333\t3.727\t1",
                 "the winner moves to mu=28.333, sigma=3.727");
        check_eq(lines[1], "standing\tb\t21.667\t3.727\t1",
                 "the loser mirrors to mu=21.667");
    }
}

void rate_rejects_bad_logs() {
    const std::string garbled = g_tmp->path("garbled.jsonl");
    testsupport::write_file(garbled, "one match please\n");
    RunResult r = run_cli("rate --input " + garbled);
    check(r.exit_code == 2, "malformed logs exit 2");
    check_contains(r.err, "line 1:", "the line is named");

    std::string dup = duel_line(5, 1, "a", "b", "a") + "\n" +
                      duel_line(5, 2, "a", "b", "b") + "\n";
    const std::string dup_path = g_tmp->path("dup.jsonl");
    testsupport::write_file(dup_path, dup);
    r = run_cli("rate --input " + dup_path);
    check(r.exit_code == 2, "duplicate match ids exit 2");
    check_contains(r.err, "duplicate match_id: 5", "the id is named");

    RunResult bad_engine = run_cli("rate --engine bogus --input " + dup_path);
    check(bad_engine.exit_code == 2, "an unknown engine is a usage error");
}

// ---- report ----------------------------------------------------------------

void report_constant_history() {
    const std::string in = g_tmp->path("flat_report.tsv");
    testsupport::write_file(in,
                            "standing\tmodel-x\t1000.000\t1000.000\t2\n"
                            "history\tmodel-x\t0\t1000.000\n"
                            "history\tmodel-x\t604800\t1000.000\n");
    RunResult r = run_cli("report --input " + in);
    check(r.exit_code == 0, "report exits 0");
    check_eq(r.out,
             "series\tmodel-x\t1000.000\t1000.000\n"
             "standing\tmodel-x\t1000.000\t1000.000\t2\n",
             "a constant history yields a flat series and echoes the standings");
}

void report_two_point_series() {
    const std::string in = g_tmp->path("two_point.tsv");
    testsupport::write_file(in,
                            "standing\tmodel-x\t1100.000\t1066.667\t2\n"
                            "history\tmodel-x\t0\t1000.000\n"
                            "history\tmodel-x\t604800\t1100.000\n");
    RunResult r = run_cli("report --input " + in);
    std::vector<std::string> lines = testsupport::split_lines(r.out);
    check(lines.size() == 2, "one series row and one standing row");
    if (!lines.empty())
        check_eq(lines[0], "series\tmodel-x\t1000.000\t1066.667",
                 "the default half-life halves the older point's weight");
}

void report_round_trips_rate_output() {
    std::string log;
    for (int i = 0; i < 6; ++i)
        log += duel_line(i + 1, i * 50, i % 2 ? "alpha" : "beta",
                         i % 2 ? "beta" : "gamma", i % 2 ? "alpha" : "gamma") +
               "\n";
    const std::string matches = g_tmp->path("report_matches.jsonl");
    testsupport::write_file(matches, log);
    RunResult rated = run_cli("rate --input " + matches);
    check(rated.exit_code == 0, "rate exits 0");

    const std::string report_in = g_tmp->path("report_in.tsv");
    testsupport::write_file(report_in, rated.out);
    RunResult reported = run_cli("report --input " + report_in);
    check(reported.exit_code == 0, "report consumes rate output");

    std::vector<std::string> standing_rows;
    for (const auto& line : testsupport::split_lines(rated.out))
        if (line.rfind("standing\t", 0) == 0) standing_rows.push_back(line);
    std::vector<std::string> out_lines = testsupport::split_lines(reported.out);
    check(out_lines.size() == standing_rows.size() * 2,
          "every model gets a series row and an echoed standing row");
    std::size_t series_rows = 0;
    for (const auto& line : out_lines)
        if (line.rfind("series\t", 0) == 0) ++series_rows;
    check(series_rows == standing_rows.size(), "one series row per model");
    for (std::size_t i = 0; i < standing_rows.size() && series_rows + i < out_lines.size();
         ++i)
        check_eq(out_lines[series_rows + i], standing_rows[i],
                 "standings echo byte-identically");
}

void report_rejects_bad_input() {
    const std::string empty = g_tmp->path("empty_report.tsv");
    testsupport::write_file(empty, "");
    RunResult r = run_cli("report --input " + empty);
    check(r.exit_code == 1, "an empty leaderboard exits 1");
    check_eq(r.err, "report requires a non-empty leaderboard\n", "and says why");

    const std::string bogus = g_tmp->path("bogus_report.tsv");
    testsupport::write_file(bogus, "mystery\trow\n");
    r = run_cli("report --input " + bogus);
    check(r.exit_code == 2, "unrecognized rows exit 2");
    check_eq(r.err, "line 1: malformed report input\n", "the line is named");
}

// ---- pipeline and composition ----------------------------------------------

void pipeline_matches_manual_stages() {
    std::vector<ImageRecord> records;
    for (int i = 1; i <= 60; ++i) {
        int w = 1000, h = 1000;
        if (i % 5 == 0) w = 640;                    // pruned
        else if (i % 7 == 0) { w = 3000; h = 2100; } // resized
        ImageRecord rec =
            testsupport::basic_record(i, w, h, i * 3 % 41, static_cast<Rating>(i % 4),
                                      2012 + i % 12);
        rec.tags.push_back({"1girl", TagCategory::general});
        rec.tags.push_back({"rem", TagCategory::character});
        for (int g = 0; g < 4 + i % 6; ++g)
            rec.tags.push_back({"prop_" + std::to_string((i + g) % 17),
                                TagCategory::general});
        rec.tags.push_back({"artist_" + std::to_string(i % 4), TagCategory::artist});
        records.push_back(std::move(rec));
    }
    const std::string in = g_tmp->path("pipe_corpus.jsonl");
    testsupport::write_file(in, corpus_text(records));

    const std::string direct_out = g_tmp->path("pipeline_direct.jsonl");
    const std::string direct_err = g_tmp->path("pipeline_direct.err");
    int code = testsupport::run(g_bin + " pipeline --input " + in + " --seed 5 --epoch 2" +
                                " --output " + direct_out + " 2> " + direct_err);
    check(code == 0, "pipeline exits 0");
    std::string tally = testsupport::read_file(direct_err);
    check_eq(tally, "keep\t41\nprune\t12\nresize\t7\n",
             "the tally matches the constructed corpus");

    const std::string piped_out = g_tmp->path("pipeline_piped.jsonl");
    code = testsupport::run(g_bin + " label --input " + in + " | " + g_bin +
                            " filter --emit records 2>/dev/null | " + g_bin +
                            " synth --seed 5 --epoch 2 > " + piped_out + " 2>/dev/null");
    check(code == 0, "label | filter | synth exits 0");
    check_eq(testsupport::read_file(piped_out), testsupport::read_file(direct_out),
             "the pipeline equals its composed stages byte for byte");
}

// ---- global flags and config wiring ----------------------------------------

void config_env_and_flag_precedence() {
    const std::string in = g_tmp->path("cfg_duel.jsonl");
    testsupport::write_file(in, duel_line(1, 100, "a", "b", "a") + "\n");

    const std::string cfg64 = g_tmp->path("env_k64.json");
    testsupport::write_file(cfg64, "{\"rating\": {\"k\": 64}}");
    const std::string cfg16 = g_tmp->path("flag_k16.json");
    testsupport::write_file(cfg16, "{\"rating\": {\"k\": 16}}");

    RunResult via_env =
        run_cli("rate --input " + in, "CAPTIONFORGE_CONFIG=" + cfg64);
    check(via_env.exit_code == 0, "the env config is honored");
    check_contains(via_env.out, "standing\ta\t1032.000", "env config sets k=64");

    RunResult flag_wins = run_cli("rate --config " + cfg16 + " --input " + in,
                                  "CAPTIONFORGE_CONFIG=" + cfg64);
    check_contains(flag_wins.out, "standing\ta\t1008.000", "--config beats the env");

    RunResult missing =
        run_cli("rate --input " + in, "CAPTIONFORGE_CONFIG=" + g_tmp->path("nope.json"));
    check(missing.exit_code == 2, "a dangling env config path exits 2");
    check_contains(missing.err, "config: cannot open", "and is reported");
}

void config_io_section() {
    const std::string in = labeled_corpus_file("io_corpus.jsonl", 12);
    const std::string out = g_tmp->path("io_captions.jsonl");
    const std::string cfg = g_tmp->path("io_config.json");
    testsupport::write_file(cfg, "{\"io\": {\"input\": \"" + in + "\", \"output\": \"" +
                                     out + "\"}, \"seed\": 21}");
    RunResult r = run_cli("synth --config " + cfg);
    check(r.exit_code == 0, "io paths and seed load from config");
    check(r.out.empty(), "output goes to the configured file, not stdout");
    std::string produced = testsupport::read_file(out);
    check(testsupport::split_lines(produced).size() == 12, "all records are captioned");

    // A --input flag must override the configured path.
    const std::string small = labeled_corpus_file("io_small.jsonl", 2);
    RunResult overridden = run_cli("synth --config " + cfg + " --input " + small);
    check(overridden.exit_code == 0 &&
              testsupport::split_lines(testsupport::read_file(out)).size() == 2,
          "--input beats io.input");
}

void config_validation_failures_exit_one() {
    const std::string cfg = g_tmp->path("bad_values.json");
    testsupport::write_file(cfg, "{\"window\": {\"size\": 5}}");
    const std::string in = labeled_corpus_file("bad_cfg_corpus.jsonl", 3);
    RunResult r = run_cli("synth --config " + cfg + " --seed 1 --input " + in);
    check(r.exit_code == 1, "an out-of-range config value exits 1");
    check_contains(r.err, "window.size", "the offending field is named");
}

void usage_errors_exit_two() {
    check(run_cli("synth --frobnicate").exit_code == 2, "unknown flags exit 2");
    check(run_cli("frobnicate").exit_code == 2, "unknown subcommands exit 2");
    check(run_cli("").exit_code == 2, "a missing subcommand exits 2");
    check(run_cli("rate --input /nonexistent/matches.jsonl").exit_code == 2,
          "an unopenable input exits 2");
}

struct NamedTest {
    const char* name;
    void (*fn)();
};

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::printf("usage: cli_tests <path-to-captionforge>\n");
        return 2;
    }
    g_bin = argv[1];
    testsupport::TempDir tmp("captionforge_cli");
    g_tmp = &tmp;

    const std::vector<NamedTest> tests{
        {"validate_clean_corpus", validate_clean_corpus},
        {"validate_reports_all_violations", validate_reports_all_violations},
        {"validate_reports_config_problems", validate_reports_config_problems},
        {"label_assigns_display_labels", label_assigns_display_labels},
        {"filter_emits_decisions", filter_emits_decisions},
        {"filter_emits_records", filter_emits_records},
        {"synth_requires_seed", synth_requires_seed},
        {"synth_requires_quality_labels", synth_requires_quality_labels},
        {"synth_is_deterministic", synth_is_deterministic},
        {"synth_policy_file_and_precedence", synth_policy_file_and_precedence},
        {"rate_elo_duel_exactly", rate_elo_duel_exactly},
        {"rate_k_flag_and_config", rate_k_flag_and_config},
        {"rate_half_life_flag", rate_half_life_flag},
        {"rate_trueskill_engine", rate_trueskill_engine},
        {"rate_rejects_bad_logs", rate_rejects_bad_logs},
        {"report_constant_history", report_constant_history},
        {"report_two_point_series", report_two_point_series},
        {"report_round_trips_rate_output", report_round_trips_rate_output},
        {"report_rejects_bad_input", report_rejects_bad_input},
        {"pipeline_matches_manual_stages", pipeline_matches_manual_stages},
        {"config_env_and_flag_precedence", config_env_and_flag_precedence},
        {"config_io_section", config_io_section},
        {"config_validation_failures_exit_one", config_validation_failures_exit_one},
        {"usage_errors_exit_two", usage_errors_exit_two},
    };

    for (const auto& t : tests) {
        const int before = g_failures;
        t.fn();
        std::printf("%s %s\n", g_failures == before ? "PASS" : "FAIL", t.name);
    }
    std::printf("%d checks, %d failures\n", g_checks, g_failures);
    return g_failures == 0 ? 0 : 1;
}
