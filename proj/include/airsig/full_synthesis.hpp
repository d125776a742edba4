#pragma once

#include "airsig/action_plan.hpp"
#include "airsig/signature.hpp"
#include "airsig/trajectory.hpp"

#include <vector>

namespace airsig::fs {

/// Seconds by which a stroke's onset t0 precedes its starting timestamp.
inline constexpr double kOnsetLead = 0.5;

struct SolverOptions {
    /// Use the fixed constant ln(3/2) in the σ quadratic instead of the
    /// duration-dependent ratio. Only equivalent for 1 s strokes.
    bool fixed_log_ratio = false;
};

/// Timing of one stroke between consecutive timestamps.
struct StrokeTiming {
    double ts_prev = 0.0;
    double ts_cur = 0.0;
    double t0 = 0.0;
    double D = 0.0;
};

/// Positive root of σ² + 3√2·σ − ln((ts_cur − t0)/(mid − t0)) = 0, mid the
/// stroke centre. Places the lognormal peak at the stroke centre while the
/// stroke completes (erf argument 3) at ts_cur.
/// Throws InputError when ts_cur ≤ ts_prev or ts_prev ≤ t0.
double solve_sigma(double ts_prev, double ts_cur, double t0, SolverOptions options = {});

/// μ = ln(ts_cur − t0) − 3√2·σ.
double solve_mu(double ts_cur, double t0, double sigma);

/// Lognormal timing (t0, μ, σ²) of a stroke spanning [ts_prev, ts_cur]; D and
/// the angles are left for the caller.
LognormalStroke solve_stroke_timing(double ts_prev, double ts_cur, SolverOptions options = {});

/// Direction angles of an arc's tangent at both ends, stored on `stroke`.
void set_stroke_angles(LognormalStroke& stroke, const plan::PlanarArc& arc);

/// One stroke per link: D = arc length, timing from the solvers, angles from
/// the arc tangents. Throws InputError for an untimed plan.
SigmaLogSignature plan_to_signature(const plan::ActionPlan& plan, SolverOptions options = {});

struct RenderedSignature {
    Trajectory3D trajectory;
    std::vector<double> speed;
};

/// Samples the signature at f_m: each stroke advances D_j·W_j(t) along its
/// arc, and the per-stroke displacements are summed from the first target.
RenderedSignature render_full_signature(const SigmaLogSignature& sig, double f_m);

}  // namespace airsig::fs
