#include "captionforge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace captionforge {

std::size_t stage_keep_count(DropoutStage stage, std::size_t droppable_count) {
    const auto t = droppable_count;
    std::size_t keep = t;
    switch (stage) {
        case DropoutStage::stage1:
            keep = std::max<std::size_t>(
                static_cast<std::size_t>(std::ceil(0.30 * static_cast<double>(t))), 10);
            break;
        case DropoutStage::stage2:
            keep = std::max<std::size_t>(
                static_cast<std::size_t>(std::ceil(0.40 * static_cast<double>(t))), 15);
            break;
        case DropoutStage::stage3: keep = std::min<std::size_t>(6, t); break;
        case DropoutStage::stage4: keep = std::min<std::size_t>(t, 4); break;
        case DropoutStage::full: keep = t; break;
    }
    return std::min(keep, t);
}

std::pair<std::vector<std::string>, std::vector<std::string>> split_protected(
    const std::vector<std::string>& tokens, const CaptionPolicy& policy) {
    std::vector<std::string> kept, droppable;
    for (const auto& token : tokens) {
        if (policy.protected_tokens.count(token))
            kept.push_back(token);
        else
            droppable.push_back(token);
    }
    return {std::move(kept), std::move(droppable)};
}

DropoutStage sample_stage(Rng& rng, const StageProbabilities& probs) {
    double u = rng.next_double();
    double edge = probs.stage1;
    if (u < edge) return DropoutStage::stage1;
    edge += probs.stage2;
    if (u < edge) return DropoutStage::stage2;
    edge += probs.stage3;
    if (u < edge) return DropoutStage::stage3;
    edge += probs.stage4;
    if (u < edge) return DropoutStage::stage4;
    return DropoutStage::full;
}

namespace {

// Uniform k-subset of {0..n-1}, ascending. Fisher-Yates over the index
// array, then first k sorted back.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t i = n - 1; i > 0; --i) {
        std::size_t j = rng.next_below(i + 1);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

}  // namespace

std::vector<std::string> apply_dropout(const std::vector<std::string>& droppable,
                                       DropoutStage stage, Rng& rng) {
    const std::size_t t = droppable.size();
    const std::size_t keep = stage_keep_count(stage, t);
    if (keep >= t) return droppable;
    std::vector<std::string> out;
    out.reserve(keep);
    for (std::size_t i : sample_indices(t, keep, rng)) out.push_back(droppable[i]);
    return out;
}

std::vector<std::string> weak_dropout(const std::vector<std::string>& tokens,
                                      double keep_prob, Rng& rng) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& token : tokens)
        if (rng.bernoulli(keep_prob)) out.push_back(token);
    return out;
}

std::vector<std::string> inject_register(std::vector<std::string> tokens,
                                         const CaptionPolicy& policy, Rng& rng) {
    const auto& cfg = policy.register_token;
    if (cfg.length < 1) throw std::invalid_argument("register length must be >= 1");
    if (!rng.bernoulli(cfg.probability)) return tokens;
    std::string token;
    do {
        token.clear();
        for (std::size_t i = 0; i < cfg.length; ++i)
            token += cfg.charset[rng.next_below(cfg.charset.size())];
    } while (policy.protected_tokens.count(token));
    tokens.push_back(std::move(token));
    return tokens;
}

std::vector<std::string> paraphrase(std::vector<std::string> tokens,
                                    const ParaphraseTable& table, double p, Rng& rng,
                                    const std::unordered_set<std::string>* skip) {
    for (auto& token : tokens) {
        if (skip && skip->count(token)) continue;
        auto it = table.find(token);
        if (it == table.end()) continue;
        if (it->second.empty())
            throw std::invalid_argument("paraphrase table entry for '" + token +
                                        "' is empty");
        if (!rng.bernoulli(p)) continue;
        token = it->second[rng.next_below(it->second.size())];
    }
    return tokens;
}

CaptionVariant select_variant_kind(std::size_t caption_count, const VariantWeights& w,
                                   Rng& rng, std::size_t& caption_index) {
    caption_index = 0;
    if (caption_count == 0) return CaptionVariant::tag_only;
    const double total = w.tag_only + w.natural + w.combined;
    if (!(total > 0.0))
        throw std::invalid_argument("variant weights must not all be zero");
    double u = rng.next_double() * total;
    CaptionVariant kind;
    if (u < w.tag_only)
        kind = CaptionVariant::tag_only;
    else if (u < w.tag_only + w.natural)
        kind = CaptionVariant::natural;
    else
        kind = CaptionVariant::combined;
    if (kind != CaptionVariant::tag_only && caption_count > 1)
        caption_index = rng.next_below(caption_count);
    return kind;
}

std::string select_variant(const std::vector<std::string>& nl_captions,
                           const std::string& tag_caption, const VariantWeights& w,
                           Rng& rng) {
    std::size_t index = 0;
    switch (select_variant_kind(nl_captions.size(), w, rng, index)) {
        case CaptionVariant::tag_only: return tag_caption;
        case CaptionVariant::natural: return nl_captions[index];
        case CaptionVariant::combined: return nl_captions[index] + ", " + tag_caption;
    }
    return tag_caption;
}

namespace {

enum class Segment { person_count, characters, rating, general, artists, quality, year };

struct MarkedToken {
    std::string text;
    Segment segment;
    bool is_protected;
};

bool in_weak_segment(Segment s) {
    return s == Segment::characters || s == Segment::artists;
}

}  // namespace

// Draw order, fixed for reproducibility:
//   1. weak-dropout Bernoulli per droppable character token (segment order)
//   2. weak-dropout Bernoulli per droppable artist token
//   3. one stage draw
//   4. Fisher-Yates shuffle over the staged pool (only when it truncates)
//   5. paraphrase accept + pick per surviving unprotected token with an entry
//   6. register accept, then its characters (redrawn on protected collision)
//   7. variant draw (+ caption pick) when the record has natural captions
//   8. separator draw
std::string render_training_caption(const ImageRecord& record,
                                    const LabelAssignment& labels,
                                    const CaptionPolicy& policy, std::uint64_t epoch) {
    const auto& lexicon =
        policy.count_lexicon.empty() ? default_count_lexicon() : policy.count_lexicon;
    StructuredCaption c = order_tags(record, labels.quality, labels.year, lexicon);

    std::vector<MarkedToken> marked;
    auto add = [&](const std::string& text, Segment seg) {
        bool prot = policy.protected_tokens.count(text) > 0;
        if (policy.protect_control_tokens &&
            (seg == Segment::quality || seg == Segment::year))
            prot = true;
        marked.push_back({text, seg, prot});
    };
    for (const auto& t : c.person_count) add(t, Segment::person_count);
    for (const auto& t : c.characters) add(t, Segment::characters);
    if (!c.rating.empty()) add(c.rating, Segment::rating);
    for (const auto& t : c.general) add(t, Segment::general);
    for (const auto& t : c.artists) add(t, Segment::artists);
    if (!c.quality.empty()) add(c.quality, Segment::quality);
    if (!c.year.empty()) add(c.year, Segment::year);

    Rng rng = derive_rng(policy.seed, record.id, epoch);

    // Weak dropout over droppable character, then artist tokens.
    std::vector<bool> keep(marked.size(), true);
    for (Segment seg : {Segment::characters, Segment::artists}) {
        double keep_prob =
            seg == Segment::characters ? policy.weak_keep.characters : policy.weak_keep.artists;
        for (std::size_t i = 0; i < marked.size(); ++i) {
            if (marked[i].segment != seg || marked[i].is_protected) continue;
            keep[i] = rng.bernoulli(keep_prob);
        }
    }

    // Staged dropout over the remaining droppable tokens (everything the
    // weak pass does not own).
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < marked.size(); ++i)
        if (!marked[i].is_protected && !in_weak_segment(marked[i].segment))
            pool.push_back(i);
    DropoutStage stage = sample_stage(rng, policy.stage_probs);
    std::size_t keep_count = stage_keep_count(stage, pool.size());
    if (keep_count < pool.size()) {
        for (std::size_t i : pool) keep[i] = false;
        for (std::size_t i : sample_indices(pool.size(), keep_count, rng))
            keep[pool[i]] = true;
    }

    std::vector<std::string> tokens;
    tokens.reserve(marked.size());
    std::vector<bool> token_protected;
    for (std::size_t i = 0; i < marked.size(); ++i) {
        if (!keep[i]) continue;
        tokens.push_back(marked[i].text);
        token_protected.push_back(marked[i].is_protected);
    }

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (token_protected[i]) continue;
        auto it = policy.paraphrase_table.find(tokens[i]);
        if (it == policy.paraphrase_table.end()) continue;
        if (it->second.empty())
            throw std::invalid_argument("paraphrase table entry for '" + tokens[i] +
                                        "' is empty");
        if (!rng.bernoulli(policy.paraphrase_probability)) continue;
        tokens[i] = it->second[rng.next_below(it->second.size())];
    }

    tokens = inject_register(std::move(tokens), policy, rng);

    std::size_t caption_index = 0;
    CaptionVariant kind = select_variant_kind(record.captions.size(),
                                              policy.variant_weights, rng, caption_index);

    Separator sep =
        rng.bernoulli(policy.separator_space_prob) ? Separator::space : Separator::comma;
    std::string tag_text = join_tokens(tokens, sep);
    switch (kind) {
        case CaptionVariant::tag_only: return tag_text;
        case CaptionVariant::natural: return record.captions[caption_index];
        case CaptionVariant::combined:
            return record.captions[caption_index] + ", " + tag_text;
    }
    return tag_text;
}

}  // namespace captionforge
