#pragma once

#include "airsig/action_plan.hpp"
#include "airsig/geometry.hpp"
#include "airsig/random.hpp"
#include "airsig/surface.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace airsig::plan {

/// Finite distribution over integers.
struct DiscreteDistribution {
    std::vector<std::pair<int, double>> entries;  // (value, probability)

    static DiscreteDistribution uniform(int lo, int hi);

    /// Throws InputError unless nonempty, probabilities ≥ 0 and summing to 1 (±1e−9).
    void validate() const;
    int sample(Rng& rng) const;
    int min_value() const;
    int max_value() const;
};

struct GestureConfig {
    double cube_size = 100.0;
    int min_points = 5;
    int max_points = 10;
    double sagitta_min = 1.0 / 20.0;  // fraction of the chord
    double sagitta_max = 1.0 / 5.0;
    int min_letters = 2;  // air-writing words
    int max_letters = 4;
};

/// Generative layout statistics for synthetic signatures and air-writing.
struct MorphologyConfig {
    DiscreteDistribution word_count{{{1, 0.5}, {2, 0.4}, {3, 0.1}}};
    DiscreteDistribution letters_per_word = DiscreteDistribution::uniform(3, 7);
    double flourish_probability = 0.6;
    DiscreteDistribution points_per_letter = DiscreteDistribution::uniform(3, 6);
    double canvas_size = 100.0;
    GestureConfig gesture;

    void validate() const;
};

/// 2D action-plan layout: targets and one midpoint per link.
struct Morphology2D {
    std::vector<Vec2> targets;
    std::vector<Vec2> midpoints;
};

/// Built-in uppercase letter template in a unit-height box; throws InputError
/// for characters outside A–Z (lowercase is folded).
std::span<const Vec2> letter_template(char letter);

/// Random signature layout: names built from letter templates, optionally
/// followed by a flourish loop. Deterministic in `seed`.
Morphology2D generate_morphology_2d(const MorphologyConfig& cfg, std::uint64_t seed);

/// Layout of a given word (letters A–Z), with per-letter jitter from `seed`.
Morphology2D text_morphology_2d(std::string_view text, const MorphologyConfig& cfg, std::uint64_t seed);

/// Lifts a 2D layout onto the sinusoidal surface and fits the arcs.
ActionPlan lift_to_plan(const Morphology2D& layout, const SurfaceConfig& surface);

/// 5–10 uniform points in a cube joined by arcs whose sagitta is uniform in
/// [d/20, d/5] of the chord d, bulging to a random side.
ActionPlan generate_gesture_plan(const MorphologyConfig& cfg, std::uint64_t seed);

/// Random uppercase word of gesture.min_letters..max_letters letters.
std::string random_word(const MorphologyConfig& cfg, Rng& rng);

}  // namespace airsig::plan
