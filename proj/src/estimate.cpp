#include "airsig/estimate.hpp"

#include "airsig/error.hpp"
#include "airsig/reconstruct.hpp"

#include <algorithm>
#include <cmath>

namespace airsig::ks {

namespace {

double median_interval(std::span<const double> times) {
    std::vector<double> dt;
    for (std::size_t i = 1; i < times.size(); ++i) dt.push_back(times[i] - times[i - 1]);
    std::nth_element(dt.begin(), dt.begin() + static_cast<std::ptrdiff_t>(dt.size() / 2), dt.end());
    return dt[dt.size() / 2];
}

// Earliest observed time (relative to the first sample) at which arc length s is reached.
double time_at_length(const std::vector<double>& cum, std::span<const double> times, double s) {
    const auto it = std::lower_bound(cum.begin(), cum.end(), s);
    if (it == cum.begin()) return 0.0;
    if (it == cum.end()) return times.back() - times.front();
    const auto hi = static_cast<std::size_t>(it - cum.begin());
    const auto lo = hi - 1;
    const double a = (s - cum[lo]) / (cum[hi] - cum[lo]);
    return (1.0 - a) * times[lo] + a * times[hi] - times.front();
}

// Arc length travelled by absolute time t (linear between samples).
double interpolate_length(const std::vector<double>& cum, std::span<const double> times, double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0.0;
    if (it == times.end()) return cum.back();
    const auto hi = static_cast<std::size_t>(it - times.begin());
    const auto lo = hi - 1;
    const double a = (t - times[lo]) / (times[hi] - times[lo]);
    return (1.0 - a) * cum[lo] + a * cum[hi];
}

// Dense point between the segment ends farthest from their chord (chord midpoint if none).
Vec3 bulge_point(const DensePath3D& path, std::size_t from, std::size_t to) {
    const Vec3& a = path.points[from];
    const Vec3& b = path.points[to];
    const Vec3 axis = (b - a).normalized();
    Vec3 best = 0.5 * (a + b);
    double best_dist = 0.0;
    for (std::size_t i = from + 1; i < to; ++i) {
        const Vec3 rel = path.points[i] - a;
        const double dist = (rel - rel.dot(axis) * axis).norm();
        if (dist > best_dist) {
            best_dist = dist;
            best = path.points[i];
        }
    }
    return best;
}

}  // namespace

std::vector<double> speed_minimum_times(const Trajectory3D& traj, double depth) {
    std::vector<double> out;
    const auto times = traj.times();
    const std::size_t n = traj.size();
    if (n < 4) return out;
    std::vector<double> tm(n - 1);
    std::vector<double> v(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        tm[i] = 0.5 * (times[i] + times[i + 1]);
        v[i] = (traj.point(i + 1) - traj.point(i)).norm() / (times[i + 1] - times[i]);
    }
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (!(v[i] < v[i - 1] && v[i] <= v[i + 1])) continue;
        double left_peak = v[i];
        for (std::size_t l = i; l-- > 0;) {
            if (v[l] < left_peak && v[l] < v[l + 1]) break;
            left_peak = std::max(left_peak, v[l]);
        }
        double right_peak = v[i];
        for (std::size_t r = i + 1; r < v.size(); ++r) {
            if (v[r] < right_peak && v[r] < v[r - 1]) break;
            right_peak = std::max(right_peak, v[r]);
        }
        if (v[i] > depth * std::min(left_peak, right_peak)) continue;
        // Parabolic refinement on three (assumed evenly spaced) samples.
        const double den = v[i - 1] - 2.0 * v[i] + v[i + 1];
        double offset = den > 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / den : 0.0;
        offset = std::clamp(offset, -0.5, 0.5);
        const double h = offset >= 0.0 ? tm[i + 1] - tm[i] : tm[i] - tm[i - 1];
        out.push_back(tm[i] + offset * h);
    }
    return out;
}

Estimate estimate_parameters(const Trajectory3D& traj, EstimateOptions options) {
    if (!traj.timed()) throw InputError("estimate_parameters: trajectory has no timestamps");
    if (traj.size() < 3) throw InputError("estimate_parameters: trajectory needs at least 3 samples");

    const double length = traj.path_length();
    if (!(length > 0.0)) throw InputError("estimate_parameters: trajectory has zero length");
    const auto path = densify_path(traj, options.step > 0.0 ? options.step : default_step(length));
    Estimate est;
    const auto times = traj.times();
    const double span = times.back() - times.front();
    std::vector<double> cum(traj.size(), 0.0);
    for (std::size_t i = 1; i < traj.size(); ++i) cum[i] = cum[i - 1] + (traj.point(i) - traj.point(i - 1)).norm();

    std::vector<double> ts{0.0, span};
    if (options.segmentation != Segmentation::speed_minima) {
        est.salient = detect_salient_points(path);
        for (auto idx : est.salient.indices) ts.push_back(time_at_length(cum, times, path.cumulative_length[idx]));
    }
    if (options.segmentation != Segmentation::curvature) {
        for (double t : speed_minimum_times(traj, options.minimum_depth)) ts.push_back(t - times.front());
    }
    std::sort(ts.begin(), ts.end());
    // Merge near-coincident boundaries, keeping the endpoints.
    std::vector<double> merged{0.0};
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        if (ts[i] - merged.back() >= options.merge_time && span - ts[i] >= options.merge_time) merged.push_back(ts[i]);
    }
    merged.push_back(span);
    est.boundaries = merged;

    // Boundary positions on the dense path, by arc length travelled.
    std::vector<std::size_t> idx;
    for (double t : merged) {
        const double s = interpolate_length(cum, times, t + times.front());
        const auto it = std::lower_bound(path.cumulative_length.begin(), path.cumulative_length.end(), s);
        std::size_t k = static_cast<std::size_t>(it - path.cumulative_length.begin());
        k = std::min(k, path.points.size() - 1);
        if (k > 0 && s - path.cumulative_length[k - 1] < path.cumulative_length[k] - s) --k;
        idx.push_back(k);
    }
    idx.back() = path.points.size() - 1;
    std::vector<Vec3> targets;
    std::vector<Vec3> midpoints;
    std::vector<double> bt;
    std::vector<std::size_t> kept;
    std::size_t idx_prev = 0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (!targets.empty()) {
            const bool last = j + 1 == idx.size();
            if (idx[j] <= idx_prev) {
                if (!last) continue;
                // Final boundary collapsed onto the previous one: drop that one instead.
                if (targets.size() < 2) break;
                targets.pop_back();
                bt.pop_back();
                midpoints.pop_back();
                kept.pop_back();
                idx_prev = kept.back();
            }
            midpoints.push_back(bulge_point(path, idx_prev, idx[j]));
        }
        targets.push_back(path.points[idx[j]]);
        bt.push_back(merged[j]);
        kept.push_back(idx[j]);
        idx_prev = idx[j];
    }
    if (targets.size() < 2) throw InputError("estimate_parameters: fewer than 2 boundaries");
    if (options.segmentation == Segmentation::speed_minima) {
        est.salient.indices = kept;
        est.salient.planes.assign(kept.size(), 0);
    }
    auto plan = plan::build_plan(std::move(targets), std::move(midpoints), std::move(bt));

    SigmaLogSignature sig;
    if (options.fit == StrokeFit::timing_solvers) {
        sig = fs::plan_to_signature(plan);
    } else {
        sig.plan = plan;
        const double t_first = times.front();
        for (std::size_t j = 0; j < plan.links.size(); ++j) {
            const double ts_prev = plan.timestamps[j];
            const double ts_cur = plan.timestamps[j + 1];
            LognormalStroke s = fs::solve_stroke_timing(ts_prev, ts_cur);
            // Speed-weighted moments of the observed samples inside the segment.
            double mass = 0.0;
            double first = 0.0;
            double second = 0.0;
            double dt_sum = 0.0;
            for (std::size_t i = 0; i + 1 < traj.size(); ++i) {
                const double tm = 0.5 * (times[i] + times[i + 1]) - t_first;
                if (tm < ts_prev || tm >= ts_cur) continue;
                const double dt = times[i + 1] - times[i];
                const double w = (traj.point(i + 1) - traj.point(i)).norm();  // speed·dt
                const double x = tm - s.t0;
                mass += w;
                first += w * x;
                second += w * x * x;
                dt_sum += w * dt * dt;
            }
            if (mass > 0.0) {
                const double mean = first / mass;
                double var = second / mass - mean * mean;
                // Sheppard's correction for the sampling interval.
                const double corrected = var - dt_sum / mass / 12.0;
                if (corrected > 0.0) var = corrected;
                if (mean > 0.0 && var > 0.0) {
                    const auto lm = moments_to_lognormal(mean, var);
                    s.mu = lm.mu;
                    s.sigma2 = lm.sigma2;
                }
            }
            s.D = plan.links[j].length();
            fs::set_stroke_angles(s, plan.links[j]);
            sig.strokes.push_back(s);
        }
    }
    est.signature = std::move(sig);

    const double f_m = traj.sampling_rate().value_or(1.0 / median_interval(times));
    const auto rendered = fs::render_full_signature(est.signature, f_m);
    std::vector<double> shifted(rendered.trajectory.times().begin(), rendered.trajectory.times().end());
    for (auto& t : shifted) t += times.front();
    std::vector<Vec3> pts(rendered.trajectory.points().begin(), rendered.trajectory.points().end());
    est.reconstruction = Trajectory3D(std::move(shifted), std::move(pts), f_m);
    est.snr_v = core::snr_v(traj, est.reconstruction);
    est.snr_t = core::snr_t(traj, est.reconstruction);
    return est;
}

}  // namespace airsig::ks
