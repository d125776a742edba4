#pragma once

#include "airsig/action_plan.hpp"
#include "airsig/full_synthesis.hpp"
#include "airsig/random.hpp"
#include "airsig/signature.hpp"

#include <cstdint>
#include <vector>

namespace airsig::ds {

enum class DuplicateKind { genuine, forgery };

inline constexpr double kGenuineLevel = 0.15;
inline constexpr double kForgeryLevel = 0.5;

struct DuplicationConfig {
    double m = kGenuineLevel;  // deformation level, 0 ≤ m < 1
    DuplicateKind kind = DuplicateKind::genuine;
    double insert_remove_max_fraction = 0.05;
    bool affine_enabled = true;
    double rotation_scale = kPi / 100;  // sd of each rotation angle, radians
    double displacement_range = 0.02;   // r ~ U(0, displacement_range)
    bool extent_scaled_amplitude = false;  // A_a = m/50·L_a instead of m/50
    std::uint64_t seed = 0;

    /// Default config of the given kind (m = 0.15 genuine, 0.5 forgery).
    static DuplicationConfig for_kind(DuplicateKind kind, std::uint64_t seed);
    /// Throws DomainError when m or the fractions are out of range.
    void validate() const;
};

/// Multiplies μ, σ², t0 and the four angles of every stroke by (1 + c·m·g),
/// g standard normal per stroke and parameter, c = 0.01 for μ and σ² and
/// 0.001 otherwise. σ² is floored at 1e−4 and onsets are re-sorted when the
/// perturbation swaps them. A changed start direction re-bends the link so it
/// leaves its start target along the new direction.
SigmaLogSignature perturb_parameters(const SigmaLogSignature& sig, const DuplicationConfig& cfg);

/// Result of editing: the new plan and, per new link, the index of the
/// unchanged source link it copies, or -1 for links created by the edit.
struct EditedPlan {
    plan::ActionPlan plan;
    std::vector<int> source_link;
};

/// Removes the interior targets closest to their neighbours and inserts new
/// ones on random links close to an end target. Counts are uniform on
/// [0, ⌊f·N⌋] (insertions on [1, ⌊f·N⌋+1] for forgeries). Endpoints are never
/// touched; new timestamps are interpolated along the link. Plans with fewer
/// than 3 targets, and m = 0, are returned unchanged.
EditedPlan edit_target_points_mapped(const plan::ActionPlan& plan, const DuplicationConfig& cfg);
plan::ActionPlan edit_target_points(const plan::ActionPlan& plan, const DuplicationConfig& cfg);

/// tp_a' = tp_a·(1 + A·sin(2π·P·tp_a/L_a)) per axis, for targets and midpoints,
/// with L_a the target bounding-box extent, A = m/50 and P = 3m. Axes with
/// L_a < 1e−9 are left untouched.
plan::ActionPlan sinusoidal_distortion(const plan::ActionPlan& plan, double m, bool extent_scaled_amplitude = false);

/// Rotation about the target centroid by angles rotation_scale·g about x, y
/// and z, followed by a shift of r times the per-axis target mean.
plan::ActionPlan affine_transform(const plan::ActionPlan& plan, const DuplicationConfig& cfg);

struct Duplicate {
    SigmaLogSignature signature;
    fs::RenderedSignature rendered;
};

/// Full duplication pipeline: perturb, edit targets, warp, rotate/shift, then
/// re-solve D_j (and new strokes) on the new arcs and render at f_m.
/// Throws InputError for signatures without an action plan.
Duplicate duplicate_signature(const SigmaLogSignature& sig, const DuplicationConfig& cfg, double f_m);

}  // namespace airsig::ds
