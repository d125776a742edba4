#pragma once

#include "airsig/signature.hpp"
#include "airsig/trajectory.hpp"

#include <span>
#include <vector>

namespace airsig::core {

/// Running direction angles of a stroke at time t, interpolated from start to
/// end values by the elapsed lognormal area. Azimuth travel takes the short way.
SphericalAngles stroke_angles(double t, const LognormalStroke& stroke);

/// D·Λ(t)·[sin φ cos ϑ, sin φ sin ϑ, cos φ] with the running angles above.
Vec3 stroke_velocity_vector(double t, const LognormalStroke& stroke);

/// Sum of stroke velocity vectors over `time_grid`. Throws InputError for an
/// empty signature or a non-increasing grid.
std::vector<Vec3> reconstruct_velocity(std::span<const LognormalStroke> strokes,
                                       std::span<const double> time_grid);

/// Time after which every stroke has decayed (last tail at e^{μ+5σ}).
double reconstruction_end_time(std::span<const LognormalStroke> strokes);

/// Trapezoidal integration of the reconstructed velocity from 0 to the end
/// time at step 1/f_m, offset by `origin`.
Trajectory3D reconstruct_trajectory(std::span<const LognormalStroke> strokes, double f_m,
                                    const Vec3& origin = Vec3::Zero());

inline constexpr double kSnrCapDb = 100.0;

/// Velocity SNR in dB between observed and reconstructed trajectories. The
/// reconstruction is linearly resampled at the observed timestamps; velocities
/// come from first differences. Capped at +100 dB.
double snr_v(const Trajectory3D& observed, const Trajectory3D& reconstructed);

/// Trajectory SNR in dB: spread of the observed positions around their time
/// average over the position error. Capped at +100 dB.
double snr_t(const Trajectory3D& observed, const Trajectory3D& reconstructed);

}  // namespace airsig::core
