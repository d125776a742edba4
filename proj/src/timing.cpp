#include "airsig/timing.hpp"

#include "airsig/error.hpp"

#include <random>

namespace airsig::plan {

std::vector<double> rhythmic_timestamps(std::size_t count, Rng& rng, double mean_gap, double sd_gap) {
    if (!(mean_gap > 0.0) || !(sd_gap >= 0.0)) throw DomainError("timestamps: mean gap must be positive, sd non-negative");
    std::vector<double> ts;
    ts.reserve(count);
    if (count == 0) return ts;
    ts.push_back(0.0);
    if (sd_gap == 0.0) {
        for (std::size_t j = 1; j < count; ++j) ts.push_back(ts.back() + mean_gap);
        return ts;
    }
    std::normal_distribution<double> gap(mean_gap, sd_gap);
    for (std::size_t j = 1; j < count; ++j) {
        double r = gap(rng);
        while (r <= 0.5 * mean_gap) r = gap(rng);
        ts.push_back(ts.back() + r);
    }
    return ts;
}

ActionPlan assign_timestamps(ActionPlan plan, std::uint64_t seed, double mean_gap, double sd_gap) {
    if (plan.targets.size() < 2) throw InputError("assign_timestamps: plan needs at least 2 targets");
    Rng rng(seed);
    plan.timestamps = rhythmic_timestamps(plan.targets.size(), rng, mean_gap, sd_gap);
    return plan;
}

}  // namespace airsig::plan
