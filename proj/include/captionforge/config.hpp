#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>

#include "captionforge/filter.hpp"
#include "captionforge/labeling.hpp"
#include "captionforge/ratings.hpp"
#include "captionforge/synth.hpp"

namespace captionforge {

// Everything a pipeline run needs, one section per module policy. Loaded
// from a JSON file (see README "Configuration"); command-line flags override
// individual values after loading.
struct PipelineConfig {
    std::string input_path;   // empty means stdin
    std::string output_path;  // empty means stdout
    WindowConfig window;
    LabelBoundaries boundaries;
    FilterPolicy filter;
    CaptionPolicy caption;
    RatingEngine rating;
    std::uint64_t epoch = 0;
    // Synthesis refuses to run without an explicit seed.
    std::optional<std::uint64_t> seed;

    // Throws std::invalid_argument naming the first violated invariant.
    void validate() const;
};

// Parses and structurally checks a config document: unknown keys and wrong
// types throw std::invalid_argument. Values the file omits keep their
// defaults. Invariants are NOT checked here; call validate() for that.
PipelineConfig load_config(std::istream& in);
PipelineConfig load_config_file(const std::string& path);

// A standalone caption-policy document: the "caption" section of the main
// config promoted to the top level, plus an optional "seed".
struct CaptionPolicyFile {
    CaptionPolicy policy;
    std::optional<std::uint64_t> seed;
};

// Same structural rules as load_config, over a policy-only document.
CaptionPolicyFile load_caption_policy(std::istream& in);
CaptionPolicyFile load_caption_policy_file(const std::string& path);

// Invariant checks for one caption policy; load_caption_policy does not
// run them. PipelineConfig::validate() applies these to its own caption
// section.
void validate_caption_policy(const CaptionPolicy& policy);

}  // namespace captionforge
