#pragma once

#include "airsig/signature.hpp"
#include "airsig/trajectory.hpp"

#include <cstdint>
#include <vector>

namespace airsig::ks {

/// Polyline re-interpolated at a uniform arc-length step.
///
/// cumulative_length[i] is the arc length of points[i] along the source
/// polyline, so the last entry is the source length Ls.
struct DensePath3D {
    std::vector<Vec3> points;
    std::vector<double> cumulative_length;
    double step = 1.0;

    std::size_t size() const { return points.size(); }
    double total_length() const { return cumulative_length.back(); }

    /// Position at arc length s (clamped to [0, Ls]), linear between points.
    Vec3 position_at(double s) const;
};

/// Throws InputError when the trajectory has zero length or step ≤ 0.
DensePath3D densify_path(const Trajectory3D& traj, double step);

enum class Plane { xy, xz, yz };

/// Curvature of the path projected on `plane`, with derivatives from central
/// differences spanning `scale` points on each side (shrunk near the ends,
/// zero at the endpoints). Throws InputError when the path has ≤ 2·scale points.
std::vector<double> plane_curvature(const DensePath3D& path, Plane plane, int scale);

/// The twelve derivative scales, uniform in [1, M/2], rounded and deduplicated.
std::vector<int> curvature_scales(std::size_t path_size);

/// Curvature summed over all scales for one plane.
std::vector<double> summed_curvature(const DensePath3D& path, Plane plane);

/// Indices of peaks in `c` whose prominence / (full width at half prominence)
/// exceeds (max(c) − min(c)) / 45.
std::vector<std::size_t> select_peaks(const std::vector<double>& c);

enum PlaneMask : std::uint8_t { kPlaneXY = 1, kPlaneXZ = 2, kPlaneYZ = 4 };

struct SalientPointSet {
    std::vector<std::size_t> indices;  // sorted, unique, both endpoints included
    std::vector<std::uint8_t> planes;  // PlaneMask bits per index (0 for endpoints)

    std::size_t size() const { return indices.size(); }
};

/// Multiscale curvature peaks of the three planar projections, merged when
/// closer than 2 path steps. Throws InputError when the path has < 24 points.
SalientPointSet detect_salient_points(const DensePath3D& path);

struct LognormalMoments {
    double mu;
    double sigma2;
};

/// Lognormal (μ, σ²) with the given mean and variance (method of moments).
/// Throws DomainError unless both are positive.
LognormalMoments moments_to_lognormal(double mean, double variance);

/// Velocity model of a kinematic synthesis.
struct VelocityProfile {
    std::vector<LognormalStroke> strokes;  // D, t0, μ, σ² used; angles unset
    std::vector<double> timestamps;        // one per salient point
    double omega = 1.0;
    double duration = 0.0;

    /// ω·Σ D_j Λ_j(t)
    double speed(double t) const;
    /// ∫_0^t speed
    double distance(double t) const;
};

/// Times the salient points rhythmically and places one moment-fitted
/// lognormal per segment; ω rescales the area to the path length.
/// Throws InputError with fewer than 2 salient points.
VelocityProfile synthesize_velocity(const SalientPointSet& sps, const DensePath3D& path, std::uint64_t seed);

/// Samples the path at k/f_m, k = 0..⌊T·f_m⌋, each sample placed at the
/// arc length travelled under `vp`. Throws InputError when the travelled
/// distance overshoots the path by more than 0.5%.
Trajectory3D resample_with_velocity(const DensePath3D& path, const VelocityProfile& vp, double f_m);

/// Step that yields a few hundred to a few thousand points for a path of length Ls.
double default_step(double path_length);

struct KinematicResult {
    Trajectory3D trajectory;
    VelocityProfile profile;
    SalientPointSet salient;
    double path_length = 0.0;
};

/// Full kinematic synthesis of a bare trajectory (timestamps, if any, ignored).
KinematicResult synthesize_kinematics(const Trajectory3D& input, double f_m, std::uint64_t seed,
                                      double step = 0.0);

}  // namespace airsig::ks
