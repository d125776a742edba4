#include "airsig/reconstruct.hpp"

#include "airsig/error.hpp"
#include "airsig/lognormal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace airsig::core {

SphericalAngles stroke_angles(double t, const LognormalStroke& stroke) {
    const double w = lognormal_area(t, stroke.t0, stroke.mu, stroke.sigma2);
    const double dtheta = wrap_angle(stroke.theta_e - stroke.theta_s);
    return {stroke.theta_s + dtheta * w, stroke.phi_s + (stroke.phi_e - stroke.phi_s) * w};
}

Vec3 stroke_velocity_vector(double t, const LognormalStroke& stroke) {
    const double speed = stroke.D * unit_lognormal(t, stroke.t0, stroke.mu, stroke.sigma2);
    if (speed == 0.0) return Vec3::Zero();
    const auto a = stroke_angles(t, stroke);
    return speed * direction_from_angles(a.azimuth, a.polar);
}

std::vector<Vec3> reconstruct_velocity(std::span<const LognormalStroke> strokes,
                                       std::span<const double> time_grid) {
    if (strokes.empty()) throw InputError("reconstruct_velocity: empty signature");
    for (std::size_t k = 1; k < time_grid.size(); ++k) {
        if (!(time_grid[k] > time_grid[k - 1])) throw InputError("reconstruct_velocity: time grid must increase");
    }
    for (const auto& s : strokes) s.validate();
    std::vector<Vec3> v(time_grid.size(), Vec3::Zero());
    for (std::size_t k = 0; k < time_grid.size(); ++k) {
        for (const auto& s : strokes) v[k] += stroke_velocity_vector(time_grid[k], s);
    }
    return v;
}

double reconstruction_end_time(std::span<const LognormalStroke> strokes) {
    double end = -std::numeric_limits<double>::infinity();
    for (const auto& s : strokes) end = std::max(end, lognormal_tail_time(s.t0, s.mu, s.sigma2, 5.0));
    return end;
}

Trajectory3D reconstruct_trajectory(std::span<const LognormalStroke> strokes, double f_m,
                                    const Vec3& origin) {
    if (!(f_m > 0.0)) throw DomainError("reconstruct_trajectory: f_m must be positive");
    if (strokes.empty()) throw InputError("reconstruct_trajectory: empty signature");
    const double end = reconstruction_end_time(strokes);
    if (!(end > 0.0)) return Trajectory3D({0.0}, {origin}, f_m);

    const auto n = static_cast<std::size_t>(std::ceil(end * f_m)) + 1;
    std::vector<double> times(n);
    for (std::size_t k = 0; k < n; ++k) times[k] = static_cast<double>(k) / f_m;
    const auto v = reconstruct_velocity(strokes, times);

    std::vector<Vec3> pts(n);
    pts[0] = origin;
    const double h = 1.0 / f_m;
    for (std::size_t k = 1; k < n; ++k) pts[k] = pts[k - 1] + 0.5 * h * (v[k - 1] + v[k]);
    return Trajectory3D(std::move(times), std::move(pts), f_m);
}

namespace {

void require_snr_inputs(const Trajectory3D& observed, const Trajectory3D& reconstructed) {
    if (observed.size() < 3) throw InputError("snr: observed trajectory needs at least 3 points");
    if (!observed.timed() || !reconstructed.timed()) throw InputError("snr: both trajectories must be timed");
}

double capped_db(double num, double den) {
    if (den <= 0.0 || num / den > std::pow(10.0, kSnrCapDb / 10.0)) return kSnrCapDb;
    if (num <= 0.0) return -kSnrCapDb;
    return std::max(-kSnrCapDb, 10.0 * std::log10(num / den));
}

std::vector<Vec3> resample(const Trajectory3D& traj, std::span<const double> times) {
    std::vector<Vec3> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(interpolate_at(traj, t));
    return out;
}

}  // namespace

double snr_v(const Trajectory3D& observed, const Trajectory3D& reconstructed) {
    require_snr_inputs(observed, reconstructed);
    const auto times = observed.times();
    const auto rec = resample(reconstructed, times);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double dt = times[i + 1] - times[i];
        const Vec3 vo = (observed.point(i + 1) - observed.point(i)) / dt;
        const Vec3 vr = (rec[i + 1] - rec[i]) / dt;
        num += vo.squaredNorm() * dt;
        den += (vo - vr).squaredNorm() * dt;
    }
    return capped_db(num, den);
}

double snr_t(const Trajectory3D& observed, const Trajectory3D& reconstructed) {
    require_snr_inputs(observed, reconstructed);
    const auto times = observed.times();
    const auto rec = resample(reconstructed, times);
    const std::size_t n = times.size();
    const auto pts = observed.points();
    if (std::all_of(pts.begin(), pts.end(), [&](const Vec3& p) { return p == pts.front(); })) {
        throw InputError("snr_t: observed trajectory is degenerate (all points equal)");
    }

    // Trapezoid weights so that the mean and both integrals share one quadrature.
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double half = 0.5 * (times[i + 1] - times[i]);
        w[i] += half;
        w[i + 1] += half;
    }
    const double span = times.back() - times.front();
    Vec3 mean = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) mean += w[i] * observed.point(i);
    mean /= span;

    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        num += w[i] * (observed.point(i) - mean).squaredNorm();
        den += w[i] * (observed.point(i) - rec[i]).squaredNorm();
    }
    return capped_db(num, den);
}

}  // namespace airsig::core
