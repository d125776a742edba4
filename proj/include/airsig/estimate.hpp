#pragma once

#include "airsig/full_synthesis.hpp"
#include "airsig/kinematic.hpp"
#include "airsig/signature.hpp"
#include "airsig/trajectory.hpp"

namespace airsig::ks {

enum class StrokeFit {
    /// (t0, μ, σ²) from the FS solvers applied to the observed segment timing.
    timing_solvers,
    /// t0 from the segment start; (μ, σ²) from the moments of the observed
    /// speed within the segment.
    speed_moments,
};

enum class Segmentation {
    /// Curvature salient points only.
    curvature,
    /// Significant minima of the observed speed.
    speed_minima,
    /// Union of both, merged when closer than `merge_time`.
    combined,
};

struct EstimateOptions {
    StrokeFit fit = StrokeFit::speed_moments;
    Segmentation segmentation = Segmentation::speed_minima;
    double minimum_depth = 0.5;  // speed minimum / lower neighbouring peak
    double merge_time = 0.02;    // seconds
    double step = 0.0;  // densification step; 0 picks default_step(Ls)
};

struct Estimate {
    SigmaLogSignature signature;  // times relative to the first observed sample
    SalientPointSet salient;  // curvature salient points, or the boundary indices for speed_minima
    std::vector<double> boundaries;  // segment boundary times, relative
    Trajectory3D reconstruction;  // on the observed time base
    double snr_v = 0.0;
    double snr_t = 0.0;
};

/// Times of speed minima deeper than `depth` × the lower neighbouring peak.
std::vector<double> speed_minimum_times(const Trajectory3D& traj, double depth = 0.5);

/// Sigma-Lognormal parameters of a timed trajectory: segment boundaries become
/// targets, each segment an arc through its farthest-from-chord point, and
/// one stroke per segment. Reports SNR_v / SNR_t of the rendered estimate.
/// Throws InputError for untimed input or fewer than 2 boundaries.
Estimate estimate_parameters(const Trajectory3D& traj, EstimateOptions options = {});

}  // namespace airsig::ks
