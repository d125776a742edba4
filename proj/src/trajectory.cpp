#include "airsig/trajectory.hpp"

#include "airsig/error.hpp"

#include <algorithm>

namespace airsig {

Trajectory3D::Trajectory3D(std::vector<Vec3> points) : points_(std::move(points)) {}

Trajectory3D::Trajectory3D(std::vector<double> times, std::vector<Vec3> points,
                           std::optional<double> sampling_rate)
    : times_(std::move(times)), points_(std::move(points)), sampling_rate_(sampling_rate) {
    if (times_.size() != points_.size()) {
        throw InputError("trajectory: time and point counts differ");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
        if (!(times_[i] > times_[i - 1])) {
            throw InputError("trajectory: timestamps must be strictly increasing");
        }
    }
    if (sampling_rate_ && !(*sampling_rate_ > 0.0)) {
        throw InputError("trajectory: sampling rate must be positive");
    }
}

double Trajectory3D::path_length() const {
    double total = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) total += (points_[i] - points_[i - 1]).norm();
    return total;
}

Vec3 interpolate_at(const Trajectory3D& traj, double t) {
    if (!traj.timed() || traj.empty()) throw InputError("interpolate_at: trajectory is not timed");
    const auto times = traj.times();
    if (t <= times.front()) return traj.point(0);
    if (t >= times.back()) return traj.point(traj.size() - 1);
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double a = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - a) * traj.point(lo) + a * traj.point(hi);
}

}  // namespace airsig
