#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "captionforge/labeling.hpp"
#include "captionforge/record.hpp"
#include "captionforge/rng.hpp"
#include "captionforge/schema.hpp"

namespace captionforge {

// Random alphanumeric token appended to a caption so unannotated image
// characteristics have somewhere to bind.
struct RegisterConfig {
    double probability = 0.05;
    std::size_t length = 6;
    std::string charset = "abcdefghijklmnopqrstuvwxyz0123456789";
};

// Per-category survival probability for the weak dropout pass.
struct WeakKeep {
    double characters = 0.95;
    double artists = 0.90;
};

// Selection probabilities of the four truncation stages; everything left
// over keeps the full caption.
struct StageProbabilities {
    double stage1 = 0.30;
    double stage2 = 0.20;
    double stage3 = 0.10;
    double stage4 = 0.04;

    double full() const { return 1.0 - stage1 - stage2 - stage3 - stage4; }
};

// Relative weights for choosing among the caption variants of a record.
struct VariantWeights {
    double tag_only = 1.0;
    double natural = 1.0;
    double combined = 1.0;
};

using ParaphraseTable = std::map<std::string, std::vector<std::string>>;

struct CaptionPolicy {
    std::unordered_set<std::string> protected_tokens;
    WeakKeep weak_keep;
    RegisterConfig register_token;
    ParaphraseTable paraphrase_table;
    double paraphrase_probability = 0.1;
    double separator_space_prob = 0.10;
    StageProbabilities stage_probs;
    VariantWeights variant_weights;
    // Quality and year tokens are control tokens; they ride along as
    // protected unless this is switched off.
    bool protect_control_tokens = true;
    std::uint64_t seed = 0;
    std::vector<std::string> count_lexicon;  // empty -> default
};

enum class DropoutStage { stage1, stage2, stage3, stage4, full };

// Kept-token count for a stage over T droppable tokens:
//   stage1: max(ceil(0.30*T), 10)   stage2: max(ceil(0.40*T), 15)
//   stage3: min(6, T)               stage4: min(T, 4)
//   full:   T
// always clamped to at most T.
std::size_t stage_keep_count(DropoutStage stage, std::size_t droppable_count);

// Splits a flattened token list into (protected, droppable), both keeping
// their original relative order.
std::pair<std::vector<std::string>, std::vector<std::string>> split_protected(
    const std::vector<std::string>& tokens, const CaptionPolicy& policy);

DropoutStage sample_stage(Rng& rng, const StageProbabilities& probs);

// Keeps exactly min(stage_keep_count, T) tokens, chosen uniformly without
// replacement, original relative order preserved.
std::vector<std::string> apply_dropout(const std::vector<std::string>& droppable,
                                       DropoutStage stage, Rng& rng);

// Independent per-token Bernoulli keep.
std::vector<std::string> weak_dropout(const std::vector<std::string>& tokens,
                                      double keep_prob, Rng& rng);

// With probability register_token.probability appends one random token of the
// configured length; the token is redrawn if it ever collides with a
// protected token.
std::vector<std::string> inject_register(std::vector<std::string> tokens,
                                         const CaptionPolicy& policy, Rng& rng);

// Each token with a table entry is replaced, with probability p, by one of
// its paraphrases chosen uniformly. Tokens in `skip` are left alone.
std::vector<std::string> paraphrase(std::vector<std::string> tokens,
                                    const ParaphraseTable& table, double p, Rng& rng,
                                    const std::unordered_set<std::string>* skip = nullptr);

enum class CaptionVariant { tag_only, natural, combined };

// Weighted choice among tag-only / one natural-language caption / the
// concatenation. Records without natural-language captions always get
// tag_only without consuming a draw.
CaptionVariant select_variant_kind(std::size_t caption_count, const VariantWeights& w,
                                   Rng& rng, std::size_t& caption_index);

std::string select_variant(const std::vector<std::string>& nl_captions,
                           const std::string& tag_caption, const VariantWeights& w,
                           Rng& rng);

// The full synthesis pipeline for one record. Output is a pure function of
// (record, labels, policy, epoch); see synth.cpp for the fixed draw order.
std::string render_training_caption(const ImageRecord& record,
                                    const LabelAssignment& labels,
                                    const CaptionPolicy& policy, std::uint64_t epoch);

}  // namespace captionforge
