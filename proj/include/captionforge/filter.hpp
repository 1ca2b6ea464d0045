#pragma once

#include <optional>
#include <string>
#include <vector>

#include "captionforge/record.hpp"

namespace captionforge {

// Corpus hygiene policy: pruning bounds, the resize trigger, and the
// resolution buckets used for training-time grouping.
struct FilterPolicy {
    int min_side = 768;
    double max_megapixels = 40.0;
    double max_aspect = 10.0;  // long side / short side
    double resize_trigger_mp = 4.0;
    std::vector<double> bucket_targets{0.15, 1.0, 2.25};
    int bucket_step = 64;
    // When set, images above the resize trigger are kept at native
    // resolution instead of getting a resize plan.
    bool keep_high_res = false;

    // Throws std::invalid_argument when a bound is out of range.
    void validate() const;
};

enum class Verdict { keep, prune, resize };
enum class PruneReason { too_small, too_large, extreme_aspect };
enum class Kernel { nearest, lanczos };

std::string to_string(Verdict v);
std::string to_string(PruneReason r);
std::string to_string(Kernel k);
Verdict parse_verdict(const std::string& text);
PruneReason parse_prune_reason(const std::string& text);

struct KernelStep {
    Kernel kernel;
    int width = 0;
    int height = 0;
    bool operator==(const KernelStep&) const = default;
};

// Two-stage shrink: NEAREST down to an intermediate no larger than twice
// the target on either side, then LANCZOS to the target. The plan is data;
// executing the kernels is out of scope.
struct ResizePlan {
    int target_width = 0;
    int target_height = 0;
    KernelStep stage1;
    KernelStep stage2;
    bool operator==(const ResizePlan&) const = default;
};

struct FilterDecision {
    Verdict verdict = Verdict::keep;
    std::optional<PruneReason> reason;
    std::optional<ResizePlan> plan;
    bool operator==(const FilterDecision&) const = default;
};

// Checks run in a fixed priority order: too_small, too_large,
// extreme_aspect, resize trigger, keep.
FilterDecision classify(const ImageRecord& record, const FilterPolicy& policy);

// Requires w*h > resize_trigger_mp * 1e6. Targets keep the source aspect
// within rounding, are step-multiples, and never exceed the trigger area.
ResizePlan plan_resize(int width, int height, const FilterPolicy& policy);

// Largest bucket target <= the given megapixels; anything below the
// smallest target falls into the smallest bucket.
double assign_bucket(int width, int height, const FilterPolicy& policy);

// Bucket for the dimensions the record will actually train at
// (post-resize when the decision carries a plan).
double effective_bucket(const ImageRecord& record, const FilterDecision& decision,
                        const FilterPolicy& policy);

}  // namespace captionforge
