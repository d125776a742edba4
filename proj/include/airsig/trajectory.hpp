#pragma once

#include "airsig/geometry.hpp"

#include <optional>
#include <span>
#include <vector>

namespace airsig {

/// Ordered 3D point sequence, optionally timestamped.
///
/// A bare trajectory (spatial path only) has no timestamps. A timed one has
/// one strictly increasing timestamp per point. Both hold at least two points.
class Trajectory3D {
public:
    Trajectory3D() = default;

    /// Bare spatial trajectory.
    explicit Trajectory3D(std::vector<Vec3> points);

    /// Timed trajectory. Throws InputError when sizes differ or times do not increase.
    Trajectory3D(std::vector<double> times, std::vector<Vec3> points,
                 std::optional<double> sampling_rate = std::nullopt);

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    bool timed() const { return !times_.empty(); }

    std::span<const Vec3> points() const { return points_; }
    std::span<const double> times() const { return times_; }
    const Vec3& point(std::size_t i) const { return points_[i]; }
    double time(std::size_t i) const { return times_[i]; }
    std::optional<double> sampling_rate() const { return sampling_rate_; }

    /// Sum of segment lengths.
    double path_length() const;

    /// Drops timestamps, keeping the spatial path.
    Trajectory3D bare() const { return Trajectory3D(points_); }

    friend bool operator==(const Trajectory3D&, const Trajectory3D&) = default;

private:
    std::vector<double> times_;
    std::vector<Vec3> points_;
    std::optional<double> sampling_rate_;
};

/// Linear interpolation of a timed trajectory at `t`, clamped to its span.
Vec3 interpolate_at(const Trajectory3D& traj, double t);

}  // namespace airsig
