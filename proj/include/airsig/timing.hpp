#pragma once

#include "airsig/action_plan.hpp"
#include "airsig/random.hpp"

#include <cstdint>
#include <vector>

namespace airsig::plan {

inline constexpr double kDefaultMeanGap = 0.1;
inline constexpr double kDefaultSdGap = 0.005;

/// Rhythmic timestamps: ts_0 = 0, ts_j = ts_{j−1} + r with r ~ N(mean, sd),
/// redrawn while r ≤ mean/2.
std::vector<double> rhythmic_timestamps(std::size_t count, Rng& rng, double mean_gap = kDefaultMeanGap,
                                        double sd_gap = kDefaultSdGap);

/// Returns a copy of `plan` with one timestamp per target.
ActionPlan assign_timestamps(ActionPlan plan, std::uint64_t seed, double mean_gap = kDefaultMeanGap,
                             double sd_gap = kDefaultSdGap);

}  // namespace airsig::plan
