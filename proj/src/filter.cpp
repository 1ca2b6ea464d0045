#include "captionforge/filter.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <tuple>

namespace captionforge {

void FilterPolicy::validate() const {
    if (min_side < 1) throw std::invalid_argument("min_side must be >= 1");
    if (!(max_aspect > 1.0)) throw std::invalid_argument("max_aspect must be > 1");
    if (!(resize_trigger_mp < max_megapixels))
        throw std::invalid_argument("resize_trigger_mp must be below max_megapixels");
    if (!(resize_trigger_mp > 0.0))
        throw std::invalid_argument("resize_trigger_mp must be positive");
    if (bucket_step < 1) throw std::invalid_argument("bucket_step must be >= 1");
    if (bucket_targets.empty()) throw std::invalid_argument("bucket_targets is empty");
    for (std::size_t i = 0; i < bucket_targets.size(); ++i) {
        if (!(bucket_targets[i] > 0.0))
            throw std::invalid_argument("bucket targets must be positive");
        if (i > 0 && !(bucket_targets[i] > bucket_targets[i - 1]))
            throw std::invalid_argument("bucket targets must be strictly ascending");
    }
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::keep: return "keep";
        case Verdict::prune: return "prune";
        case Verdict::resize: return "resize";
    }
    return "keep";
}

std::string to_string(PruneReason r) {
    switch (r) {
        case PruneReason::too_small: return "too_small";
        case PruneReason::too_large: return "too_large";
        case PruneReason::extreme_aspect: return "extreme_aspect";
    }
    return "too_small";
}

std::string to_string(Kernel k) {
    return k == Kernel::nearest ? "nearest" : "lanczos";
}

Verdict parse_verdict(const std::string& text) {
    if (text == "keep") return Verdict::keep;
    if (text == "prune") return Verdict::prune;
    if (text == "resize") return Verdict::resize;
    throw std::invalid_argument("unknown verdict: '" + text + "'");
}

PruneReason parse_prune_reason(const std::string& text) {
    if (text == "too_small") return PruneReason::too_small;
    if (text == "too_large") return PruneReason::too_large;
    if (text == "extreme_aspect") return PruneReason::extreme_aspect;
    throw std::invalid_argument("unknown prune reason: '" + text + "'");
}

FilterDecision classify(const ImageRecord& record, const FilterPolicy& policy) {
    const double w = static_cast<double>(record.width);
    const double h = static_cast<double>(record.height);
    const double area = w * h;

    if (std::min(record.width, record.height) < policy.min_side)
        return {Verdict::prune, PruneReason::too_small, std::nullopt};
    if (area >= policy.max_megapixels * 1e6)
        return {Verdict::prune, PruneReason::too_large, std::nullopt};
    if (std::max(w, h) / std::min(w, h) > policy.max_aspect)
        return {Verdict::prune, PruneReason::extreme_aspect, std::nullopt};
    if (area > policy.resize_trigger_mp * 1e6 && !policy.keep_high_res)
        return {Verdict::resize, std::nullopt,
                plan_resize(record.width, record.height, policy)};
    return {Verdict::keep, std::nullopt, std::nullopt};
}

namespace {

// Target aspect ratio stays within this relative distance of the source.
constexpr double kMaxAspectDrift = 0.05;

int snap_down(double raw, int step) {
    int rounded = static_cast<int>(std::lround(raw));
    int snapped = (rounded / step) * step;
    return std::max(snapped, step);
}

int round_to_step(double raw, int step) {
    const long long snapped =
        static_cast<long long>(std::floor(raw / step + 0.5)) * step;
    return static_cast<int>(std::max<long long>(snapped, step));
}

double aspect_drift(int w, int h, int tw, int th) {
    const double source = static_cast<double>(w) / static_cast<double>(h);
    const double target = static_cast<double>(tw) / static_cast<double>(th);
    return std::abs(target - source) / source;
}

struct DimPair {
    bool over_bound = false;
    double key = 0.0;
    double drift = 0.0;
    long long neg_width = 0;
    int width = 0;
    int height = 0;
};

// Within the drift bound: largest area wins; outside it: smallest drift.
std::tuple<bool, double, double, long long> pair_rank(const DimPair& p) {
    return {p.over_bound, p.key, p.drift, p.neg_width};
}

// The plain snap can skew narrow-and-tall sources past the drift bound.
// Pair every step multiple of one dimension with its ratio-derived partner,
// clamped by the cap and the source size, and pick the best pair.
std::optional<DimPair> search_snapped_pair(int width, int height, double cap,
                                           int step) {
    std::optional<DimPair> best;
    auto consider = [&](long long nw, long long nh) {
        if (nw < step || nh < step || nw > width || nh > height) return;
        if (static_cast<double>(nw) * static_cast<double>(nh) > cap) return;
        if (width >= height && nw < nh) return;
        if (height >= width && nh < nw) return;
        DimPair p;
        p.width = static_cast<int>(nw);
        p.height = static_cast<int>(nh);
        p.drift = aspect_drift(width, height, p.width, p.height);
        p.over_bound = p.drift > kMaxAspectDrift;
        p.key = p.over_bound
                    ? p.drift
                    : -(static_cast<double>(nw) * static_cast<double>(nh));
        p.neg_width = -nw;
        if (!best || pair_rank(p) < pair_rank(*best)) best = p;
    };

    const long long cap_ll = static_cast<long long>(cap);
    const long long width_limit = std::min<long long>(width, cap_ll / step);
    for (long long nw = step; nw <= width_limit; nw += step) {
        const double ideal = static_cast<double>(nw) * height / width;
        consider(nw, round_to_step(ideal, step));
        consider(nw, std::min<long long>(height, cap_ll / nw) / step * step);
    }
    const long long height_limit = std::min<long long>(height, cap_ll / step);
    for (long long nh = step; nh <= height_limit; nh += step) {
        const double ideal = static_cast<double>(nh) * width / height;
        consider(round_to_step(ideal, step), nh);
        consider(std::min<long long>(width, cap_ll / nh) / step * step, nh);
    }
    return best;
}

}  // namespace

ResizePlan plan_resize(int width, int height, const FilterPolicy& policy) {
    const double cap = policy.resize_trigger_mp * 1e6;
    const double area = static_cast<double>(width) * static_cast<double>(height);
    if (!(area > cap))
        throw std::invalid_argument("plan_resize requires area above the trigger");

    const double s = std::sqrt(cap / area);
    int tw = snap_down(width * s, policy.bucket_step);
    int th = snap_down(height * s, policy.bucket_step);

    // Rounding can land a hair above the cap; shave the longer side until
    // the area bound holds.
    while (static_cast<double>(tw) * th > cap && std::max(tw, th) > policy.bucket_step) {
        if (tw >= th)
            tw -= policy.bucket_step;
        else
            th -= policy.bucket_step;
    }

    if (aspect_drift(width, height, tw, th) > kMaxAspectDrift) {
        if (auto repaired = search_snapped_pair(width, height, cap, policy.bucket_step)) {
            tw = repaired->width;
            th = repaired->height;
        }
    }

    ResizePlan plan;
    plan.target_width = tw;
    plan.target_height = th;
    plan.stage1 = {Kernel::nearest, std::min(width, 2 * tw), std::min(height, 2 * th)};
    plan.stage2 = {Kernel::lanczos, tw, th};
    return plan;
}

double assign_bucket(int width, int height, const FilterPolicy& policy) {
    const double mp =
        static_cast<double>(width) * static_cast<double>(height) / 1e6;
    double chosen = policy.bucket_targets.front();
    for (double target : policy.bucket_targets)
        if (target <= mp) chosen = target;
    return chosen;
}

double effective_bucket(const ImageRecord& record, const FilterDecision& decision,
                        const FilterPolicy& policy) {
    if (decision.plan)
        return assign_bucket(decision.plan->target_width, decision.plan->target_height,
                             policy);
    return assign_bucket(record.width, record.height, policy);
}

}  // namespace captionforge
