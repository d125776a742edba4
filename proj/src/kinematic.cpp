#include "airsig/kinematic.hpp"

#include "airsig/error.hpp"
#include "airsig/lognormal.hpp"
#include "airsig/timing.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace airsig::ks {

Vec3 DensePath3D::position_at(double s) const {
    if (s <= cumulative_length.front()) return points.front();
    if (s >= cumulative_length.back()) return points.back();
    const auto it = std::upper_bound(cumulative_length.begin(), cumulative_length.end(), s);
    const auto hi = static_cast<std::size_t>(it - cumulative_length.begin());
    const auto lo = hi - 1;
    const double span = cumulative_length[hi] - cumulative_length[lo];
    const double a = span > 0.0 ? (s - cumulative_length[lo]) / span : 0.0;
    return (1.0 - a) * points[lo] + a * points[hi];
}

DensePath3D densify_path(const Trajectory3D& traj, double step) {
    if (!(step > 0.0)) throw InputError("densify_path: step must be positive");
    std::vector<Vec3> src;
    for (const auto& p : traj.points()) {
        if (src.empty() || p != src.back()) src.push_back(p);
    }
    if (src.size() < 2) throw InputError("densify_path: trajectory has zero length");
    std::vector<double> cum(src.size(), 0.0);
    for (std::size_t i = 1; i < src.size(); ++i) cum[i] = cum[i - 1] + (src[i] - src[i - 1]).norm();
    const double total = cum.back();
    if (!(total > 0.0)) throw InputError("densify_path: trajectory has zero length");

    // Sample arc lengths: k·step, with the final point snapped to Ls so that
    // spacing stays within [0.5, 1.5]·step.
    std::vector<double> stations;
    const auto n = static_cast<std::size_t>(std::floor(total / step));
    for (std::size_t k = 0; k <= n; ++k) stations.push_back(static_cast<double>(k) * step);
    if (n > 0 && total - stations.back() < 0.5 * step) {
        stations.back() = total;
    } else if (total > stations.back()) {
        stations.push_back(total);
    }

    DensePath3D path;
    path.step = step;
    path.points.reserve(stations.size());
    std::size_t seg = 0;
    for (double s : stations) {
        while (seg + 2 < src.size() && cum[seg + 1] < s) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double a = std::clamp((s - cum[seg]) / len, 0.0, 1.0);
        path.points.push_back((1.0 - a) * src[seg] + a * src[seg + 1]);
    }
    path.points.back() = src.back();
    path.cumulative_length = std::move(stations);
    return path;
}

namespace {

std::pair<int, int> plane_axes(Plane plane) {
    switch (plane) {
        case Plane::xy: return {0, 1};
        case Plane::xz: return {0, 2};
        case Plane::yz: return {1, 2};
    }
    return {0, 1};
}

constexpr double kDenominatorFloor = 1e-12;

}  // namespace

std::vector<double> plane_curvature(const DensePath3D& path, Plane plane, int scale) {
    const auto m = path.size();
    if (scale < 1) throw InputError("plane_curvature: scale must be at least 1");
    if (m <= 2 * static_cast<std::size_t>(scale)) {
        throw InputError("plane_curvature: path of " + std::to_string(m) + " points too short for scale " +
                         std::to_string(scale));
    }
    const auto [ax, ay] = plane_axes(plane);
    std::vector<double> kappa(m, 0.0);
    for (std::size_t i = 1; i + 1 < m; ++i) {
        const auto s = std::min<std::size_t>({static_cast<std::size_t>(scale), i, m - 1 - i});
        const Vec3& prev = path.points[i - s];
        const Vec3& cur = path.points[i];
        const Vec3& next = path.points[i + s];
        const double h = static_cast<double>(s);
        const double dx = (next[ax] - prev[ax]) / (2.0 * h);
        const double dy = (next[ay] - prev[ay]) / (2.0 * h);
        const double ddx = (next[ax] - 2.0 * cur[ax] + prev[ax]) / (h * h);
        const double ddy = (next[ay] - 2.0 * cur[ay] + prev[ay]) / (h * h);
        const double den = std::max(std::pow(dx * dx + dy * dy, 1.5), kDenominatorFloor);
        kappa[i] = std::abs(ddy * dx - ddx * dy) / den;
    }
    return kappa;
}

std::vector<int> curvature_scales(std::size_t path_size) {
    constexpr int kScales = 12;
    const double hi = static_cast<double>(path_size) / 2.0;
    std::set<int> scales;
    for (int k = 0; k < kScales; ++k) {
        const double s = 1.0 + (hi - 1.0) * k / (kScales - 1);
        // A scale must leave at least one point on each side of the centre.
        const int si = std::clamp(static_cast<int>(std::lround(s)), 1, static_cast<int>((path_size - 1) / 2));
        scales.insert(si);
    }
    return {scales.begin(), scales.end()};
}

std::vector<double> summed_curvature(const DensePath3D& path, Plane plane) {
    std::vector<double> c(path.size(), 0.0);
    for (int s : curvature_scales(path.size())) {
        const auto k = plane_curvature(path, plane, s);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += k[i];
    }
    return c;
}

std::vector<std::size_t> select_peaks(const std::vector<double>& c) {
    std::vector<std::size_t> peaks;
    if (c.size() < 3) return peaks;
    const auto [lo_it, hi_it] = std::minmax_element(c.begin(), c.end());
    const double range = *hi_it - *lo_it;
    if (!(range > 1e-9 * (1.0 + std::abs(*hi_it)))) return peaks;
    const double threshold = range / 45.0;
    const std::size_t n = c.size();

    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(c[i] > c[i - 1] && c[i] >= c[i + 1])) continue;
        // Prominence: drop to the higher of the two bases reached before a taller point.
        double left_min = c[i];
        for (std::size_t l = i; l-- > 0;) {
            if (c[l] > c[i]) break;
            left_min = std::min(left_min, c[l]);
        }
        double right_min = c[i];
        for (std::size_t r = i + 1; r < n; ++r) {
            if (c[r] > c[i]) break;
            right_min = std::min(right_min, c[r]);
        }
        const double prominence = c[i] - std::max(left_min, right_min);
        if (!(prominence > 0.0)) continue;

        // Full width at half prominence, with linear interpolation of the crossings.
        const double level = c[i] - 0.5 * prominence;
        double left = 0.0;
        for (std::size_t l = i; l-- > 0;) {
            if (c[l] < level) {
                left = static_cast<double>(l) + (level - c[l]) / (c[l + 1] - c[l]);
                break;
            }
        }
        double right = static_cast<double>(n - 1);
        for (std::size_t r = i + 1; r < n; ++r) {
            if (c[r] < level) {
                right = static_cast<double>(r) - (level - c[r]) / (c[r - 1] - c[r]);
                break;
            }
        }
        const double width = std::max(right - left, 1.0);
        if (prominence / width > threshold) peaks.push_back(i);
    }
    return peaks;
}

SalientPointSet detect_salient_points(const DensePath3D& path) {
    const auto m = path.size();
    if (m < 24) throw InputError("detect_salient_points: path needs at least 24 points");

    std::vector<std::uint8_t> tags(m, 0);
    const std::pair<Plane, std::uint8_t> planes[] = {{Plane::xy, kPlaneXY}, {Plane::xz, kPlaneXZ}, {Plane::yz, kPlaneYZ}};
    for (const auto& [plane, bit] : planes) {
        for (auto i : select_peaks(summed_curvature(path, plane))) tags[i] |= bit;
    }

    // Union of the planes; candidates within 2 steps of a kept point are merged into it.
    SalientPointSet out;
    out.indices.push_back(0);
    out.planes.push_back(0);
    constexpr std::size_t kMergeDistance = 2;
    for (std::size_t i = 1; i + 1 < m; ++i) {
        if (tags[i] == 0) continue;
        if (i - out.indices.back() <= kMergeDistance) {
            out.planes.back() |= tags[i];
            continue;
        }
        if (m - 1 - i <= kMergeDistance) break;
        out.indices.push_back(i);
        out.planes.push_back(tags[i]);
    }
    out.indices.push_back(m - 1);
    out.planes.push_back(0);
    out.planes.front() = 0;
    return out;
}

LognormalMoments moments_to_lognormal(double mean, double variance) {
    if (!(mean > 0.0) || !(variance > 0.0)) throw DomainError("moments_to_lognormal: mean and variance must be positive");
    return {std::log(mean * mean / std::sqrt(variance + mean * mean)), std::log(variance / (mean * mean) + 1.0)};
}

double VelocityProfile::speed(double t) const {
    double v = 0.0;
    for (const auto& s : strokes) v += s.D * core::unit_lognormal(t, s.t0, s.mu, s.sigma2);
    return omega * v;
}

double VelocityProfile::distance(double t) const {
    double d = 0.0;
    for (const auto& s : strokes) {
        d += s.D * (core::lognormal_area(t, s.t0, s.mu, s.sigma2) - core::lognormal_area(0.0, s.t0, s.mu, s.sigma2));
    }
    return omega * d;
}

VelocityProfile synthesize_velocity(const SalientPointSet& sps, const DensePath3D& path, std::uint64_t seed) {
    if (sps.size() < 2) throw InputError("synthesize_velocity: needs at least 2 salient points");
    Rng rng(seed);
    VelocityProfile vp;
    vp.timestamps = plan::rhythmic_timestamps(sps.size(), rng);

    for (std::size_t j = 1; j < sps.size(); ++j) {
        const double ts_prev = vp.timestamps[j - 1];
        const double ts_cur = vp.timestamps[j];
        LognormalStroke s;
        s.t0 = ts_prev - 0.5;
        // Moments in stroke-local time t − t0; ±2 sd covers the segment.
        const double mean = 0.5 * (ts_prev + ts_cur) - s.t0;
        const double sd = (ts_cur - ts_prev) / 4.0;
        const auto lm = moments_to_lognormal(mean, sd * sd);
        s.mu = lm.mu;
        s.sigma2 = lm.sigma2;
        s.D = path.cumulative_length[sps.indices[j]] - path.cumulative_length[sps.indices[j - 1]];
        vp.strokes.push_back(s);
    }

    double end = 0.0;
    for (const auto& s : vp.strokes) end = std::max(end, core::lognormal_tail_time(s.t0, s.mu, s.sigma2));
    vp.duration = end;
    vp.omega = 1.0;
    vp.omega = path.total_length() / vp.distance(end);
    return vp;
}

Trajectory3D resample_with_velocity(const DensePath3D& path, const VelocityProfile& vp, double f_m) {
    if (!(f_m > 0.0)) throw DomainError("resample_with_velocity: f_m must be positive");
    if (vp.strokes.empty() || !(vp.omega > 0.0)) throw InputError("resample_with_velocity: invalid profile");
    const double total = path.total_length();
    const auto last = static_cast<std::size_t>(std::floor(vp.duration * f_m));
    std::vector<double> times;
    std::vector<Vec3> pts;
    times.reserve(last + 1);
    pts.reserve(last + 1);
    for (std::size_t k = 0; k <= last; ++k) {
        const double t = static_cast<double>(k) / f_m;
        const double d = vp.distance(t);
        if (d > total * 1.005) throw InputError("resample_with_velocity: profile travels beyond the path end");
        times.push_back(t);
        pts.push_back(path.position_at(std::min(d, total)));
    }
    return Trajectory3D(std::move(times), std::move(pts), f_m);
}

double default_step(double path_length) {
    const double count = std::clamp(path_length, 200.0, 5000.0);
    return path_length / count;
}

KinematicResult synthesize_kinematics(const Trajectory3D& input, double f_m, std::uint64_t seed, double step) {
    KinematicResult out;
    out.path_length = input.path_length();
    const auto path = densify_path(input, step > 0.0 ? step : default_step(out.path_length));
    out.salient = detect_salient_points(path);
    out.profile = synthesize_velocity(out.salient, path, seed);
    out.trajectory = resample_with_velocity(path, out.profile, f_m);
    return out;
}

}  // namespace airsig::ks
