#include "captionforge/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace captionforge {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument("config: " + where + " " + what);
}

// View over one JSON object that records which keys were read so finish()
// can reject anything unexpected. A Section over an absent object hands out
// fallbacks only.
class Section {
public:
    Section(const json* obj, std::string path) : obj_(obj), path_(std::move(path)) {}

    Section child(const char* key) const {
        const json* sub = find(key);
        std::string sub_path = path_.empty() ? key : path_ + "." + key;
        if (sub && !sub->is_object()) fail(sub_path, "must be an object");
        return {sub, std::move(sub_path)};
    }

    bool boolean(const char* key, bool fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_boolean()) fail(key_path(key), "must be a boolean");
        return v->get<bool>();
    }

    double number(const char* key, double fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number()) fail(key_path(key), "must be a number");
        return v->get<double>();
    }

    std::int64_t integer(const char* key, std::int64_t fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_number_integer()) fail(key_path(key), "must be an integer");
        return v->get<std::int64_t>();
    }

    std::string text(const char* key, const std::string& fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_string()) fail(key_path(key), "must be a string");
        return v->get<std::string>();
    }

    std::vector<std::string> strings(const char* key,
                                     std::vector<std::string> fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_array()) fail(key_path(key), "must be an array of strings");
        std::vector<std::string> out;
        for (const auto& item : *v) {
            if (!item.is_string()) fail(key_path(key), "must be an array of strings");
            out.push_back(item.get<std::string>());
        }
        return out;
    }

    std::vector<double> numbers(const char* key, std::vector<double> fallback) const {
        const json* v = find(key);
        if (!v) return fallback;
        if (!v->is_array()) fail(key_path(key), "must be an array of numbers");
        std::vector<double> out;
        for (const auto& item : *v) {
            if (!item.is_number()) fail(key_path(key), "must be an array of numbers");
            out.push_back(item.get<double>());
        }
        return out;
    }

    const json* raw(const char* key) const { return find(key); }

    void finish() const {
        if (!obj_) return;
        for (auto it = obj_->begin(); it != obj_->end(); ++it)
            if (!seen_.count(it.key()))
                fail(path_.empty() ? "top level" : path_,
                     "has unknown key '" + it.key() + "'");
    }

private:
    const json* find(const char* key) const {
        if (!obj_) return nullptr;
        seen_.insert(key);
        auto it = obj_->find(key);
        return it == obj_->end() ? nullptr : &*it;
    }

    std::string key_path(const char* key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json* obj_;
    std::string path_;
    mutable std::set<std::string> seen_;
};

std::vector<std::string> canonical_tokens(std::vector<std::string> tokens) {
    for (auto& t : tokens) t = canonical_form(t);
    return tokens;
}

void load_caption_section(const Section& caption, CaptionPolicy& policy) {
    for (const auto& t :
         caption.strings("protected_tokens", {}))
        policy.protected_tokens.insert(canonical_form(t));

    Section weak = caption.child("weak_keep");
    policy.weak_keep.characters = weak.number("characters", policy.weak_keep.characters);
    policy.weak_keep.artists = weak.number("artists", policy.weak_keep.artists);
    weak.finish();

    Section reg = caption.child("register");
    policy.register_token.probability =
        reg.number("probability", policy.register_token.probability);
    policy.register_token.length = static_cast<std::size_t>(
        reg.integer("length", static_cast<std::int64_t>(policy.register_token.length)));
    policy.register_token.charset = reg.text("charset", policy.register_token.charset);
    reg.finish();

    Section para = caption.child("paraphrase");
    policy.paraphrase_probability =
        para.number("probability", policy.paraphrase_probability);
    if (const json* table = para.raw("table")) {
        if (!table->is_object()) fail("caption.paraphrase.table", "must be an object");
        for (auto it = table->begin(); it != table->end(); ++it) {
            if (!it.value().is_array())
                fail("caption.paraphrase.table", "entries must be arrays of strings");
            std::vector<std::string> alts;
            for (const auto& alt : it.value()) {
                if (!alt.is_string())
                    fail("caption.paraphrase.table", "entries must be arrays of strings");
                alts.push_back(canonical_form(alt.get<std::string>()));
            }
            policy.paraphrase_table[canonical_form(it.key())] = std::move(alts);
        }
    }
    para.finish();

    policy.separator_space_prob =
        caption.number("separator_space_prob", policy.separator_space_prob);

    Section stages = caption.child("stages");
    policy.stage_probs.stage1 = stages.number("stage1", policy.stage_probs.stage1);
    policy.stage_probs.stage2 = stages.number("stage2", policy.stage_probs.stage2);
    policy.stage_probs.stage3 = stages.number("stage3", policy.stage_probs.stage3);
    policy.stage_probs.stage4 = stages.number("stage4", policy.stage_probs.stage4);
    stages.finish();

    Section variants = caption.child("variants");
    policy.variant_weights.tag_only =
        variants.number("tag_only", policy.variant_weights.tag_only);
    policy.variant_weights.natural =
        variants.number("natural", policy.variant_weights.natural);
    policy.variant_weights.combined =
        variants.number("combined", policy.variant_weights.combined);
    variants.finish();

    policy.protect_control_tokens =
        caption.boolean("protect_control_tokens", policy.protect_control_tokens);
    policy.count_lexicon = canonical_tokens(caption.strings("count_lexicon", {}));
}

}  // namespace

PipelineConfig load_config(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top level", "must be a JSON object");

    PipelineConfig cfg;
    Section root(&j, "");

    Section io = root.child("io");
    cfg.input_path = io.text("input", "");
    cfg.output_path = io.text("output", "");
    io.finish();

    Section window = root.child("window");
    cfg.window.window_size = static_cast<std::size_t>(
        window.integer("size", static_cast<std::int64_t>(cfg.window.window_size)));
    cfg.window.partition_by_rating =
        window.boolean("partition_by_rating", cfg.window.partition_by_rating);
    const std::string order = window.text("order", "id");
    if (order == "id")
        cfg.window.order_key = OrderKey::id;
    else if (order == "year_then_id")
        cfg.window.order_key = OrderKey::year_then_id;
    else
        fail("window.order", "must be 'id' or 'year_then_id'");
    window.finish();

    Section bounds = root.child("boundaries");
    cfg.boundaries.worst = bounds.number("worst", cfg.boundaries.worst);
    cfg.boundaries.bad = bounds.number("bad", cfg.boundaries.bad);
    cfg.boundaries.average = bounds.number("average", cfg.boundaries.average);
    cfg.boundaries.good = bounds.number("good", cfg.boundaries.good);
    cfg.boundaries.best = bounds.number("best", cfg.boundaries.best);
    cfg.boundaries.masterpiece = bounds.number("masterpiece", cfg.boundaries.masterpiece);
    bounds.finish();

    Section filter = root.child("filter");
    cfg.filter.min_side =
        static_cast<int>(filter.integer("min_side", cfg.filter.min_side));
    cfg.filter.max_megapixels = filter.number("max_megapixels", cfg.filter.max_megapixels);
    cfg.filter.max_aspect = filter.number("max_aspect", cfg.filter.max_aspect);
    cfg.filter.resize_trigger_mp =
        filter.number("resize_trigger_mp", cfg.filter.resize_trigger_mp);
    cfg.filter.bucket_targets = filter.numbers("bucket_targets", cfg.filter.bucket_targets);
    cfg.filter.bucket_step =
        static_cast<int>(filter.integer("bucket_step", cfg.filter.bucket_step));
    cfg.filter.keep_high_res = filter.boolean("keep_high_res", cfg.filter.keep_high_res);
    filter.finish();

    Section caption = root.child("caption");
    load_caption_section(caption, cfg.caption);
    caption.finish();

    Section rating = root.child("rating");
    const std::string engine = rating.text("engine", "elo");
    if (engine == "elo")
        cfg.rating.kind = RatingEngine::Kind::elo;
    else if (engine == "trueskill")
        cfg.rating.kind = RatingEngine::Kind::trueskill;
    else
        fail("rating.engine", "must be 'elo' or 'trueskill'");
    cfg.rating.elo.initial = rating.number("initial", cfg.rating.elo.initial);
    cfg.rating.elo.k = rating.number("k", cfg.rating.elo.k);
    cfg.rating.elo.half_life = rating.number("half_life", cfg.rating.elo.half_life);
    cfg.rating.trueskill.mu0 = rating.number("mu0", cfg.rating.trueskill.mu0);
    cfg.rating.trueskill.sigma0 = rating.number("sigma0", cfg.rating.trueskill.sigma0);
    cfg.rating.trueskill.beta = rating.number("beta", cfg.rating.trueskill.beta);
    rating.finish();

    if (root.raw("epoch")) cfg.epoch = static_cast<std::uint64_t>(root.integer("epoch", 0));
    if (root.raw("seed")) cfg.seed = static_cast<std::uint64_t>(root.integer("seed", 0));
    root.finish();
    return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return load_config(in);
}

CaptionPolicyFile load_caption_policy(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) fail("top level", "must be a JSON object");

    CaptionPolicyFile file;
    Section root(&j, "caption");
    load_caption_section(root, file.policy);
    if (root.raw("seed")) {
        file.seed = static_cast<std::uint64_t>(root.integer("seed", 0));
        file.policy.seed = *file.seed;
    }
    root.finish();
    return file;
}

CaptionPolicyFile load_caption_policy_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    return load_caption_policy(in);
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument("config: " + message);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void validate_caption_policy(const CaptionPolicy& caption) {
    require(is_probability(caption.weak_keep.characters),
            "caption.weak_keep.characters must be in [0, 1]");
    require(is_probability(caption.weak_keep.artists),
            "caption.weak_keep.artists must be in [0, 1]");
    require(is_probability(caption.register_token.probability),
            "caption.register.probability must be in [0, 1]");
    require(caption.register_token.length >= 1, "caption.register.length must be >= 1");
    require(!caption.register_token.charset.empty(),
            "caption.register.charset must not be empty");
    for (char c : caption.register_token.charset)
        require(c != ',' && c != ' ' && c != '|',
                "caption.register.charset must not contain separators");
    require(is_probability(caption.paraphrase_probability),
            "caption.paraphrase.probability must be in [0, 1]");
    for (const auto& [token, alts] : caption.paraphrase_table) {
        require(!tag_name_problem(token).has_value(),
                "caption.paraphrase.table key '" + token + "' is not a valid token");
        require(!alts.empty(),
                "caption.paraphrase.table entry for '" + token + "' is empty");
        for (const auto& alt : alts)
            require(!tag_name_problem(alt).has_value(),
                    "caption.paraphrase.table value '" + alt + "' is not a valid token");
    }
    require(is_probability(caption.separator_space_prob),
            "caption.separator_space_prob must be in [0, 1]");
    const StageProbabilities& sp = caption.stage_probs;
    require(is_probability(sp.stage1) && is_probability(sp.stage2) &&
                is_probability(sp.stage3) && is_probability(sp.stage4),
            "caption.stages entries must be in [0, 1]");
    require(sp.stage1 + sp.stage2 + sp.stage3 + sp.stage4 <= 1.0 + 1e-12,
            "caption.stages must sum to at most 1");
    const VariantWeights& vw = caption.variant_weights;
    require(vw.tag_only >= 0.0 && vw.natural >= 0.0 && vw.combined >= 0.0,
            "caption.variants weights must be non-negative");
    require(vw.tag_only + vw.natural + vw.combined > 0.0,
            "caption.variants weights must not all be zero");
    for (const auto& t : caption.protected_tokens)
        require(!tag_name_problem(t).has_value(),
                "caption.protected_tokens entry '" + t + "' is not a valid token");
    for (const auto& t : caption.count_lexicon)
        require(!tag_name_problem(t).has_value(),
                "caption.count_lexicon entry '" + t + "' is not a valid token");
}

void PipelineConfig::validate() const {
    require(window.window_size >= 10, "window.size must be at least 10");

    const LabelBoundaries& b = boundaries;
    require(b.worst > 0.0, "boundaries.worst must be positive");
    require(b.worst < b.bad && b.bad < b.average && b.average < b.good &&
                b.good < b.best && b.best < b.masterpiece,
            "boundaries must be strictly ascending");
    require(b.masterpiece == 100.0, "boundaries.masterpiece must be 100");

    try {
        filter.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: filter ") + e.what());
    }

    validate_caption_policy(caption);

    require(rating.elo.k > 0.0, "rating.k must be positive");
    require(rating.elo.half_life > 0.0, "rating.half_life must be positive");
    require(rating.trueskill.sigma0 > 0.0, "rating.sigma0 must be positive");
    require(rating.trueskill.beta > 0.0, "rating.beta must be positive");
}

}  // namespace captionforge
