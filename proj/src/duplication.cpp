#include "airsig/duplication.hpp"

#include "airsig/error.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>

namespace airsig::ds {

namespace {

enum Stream : std::uint64_t { kPerturbStream = 1, kEditStream = 2, kAffineStream = 3 };

// Reach of an inserted point from the nearest end of its link, as a fraction of the link.
constexpr double kInsertReach = 0.05;
constexpr double kSigma2Floor = 1e-4;

void resort_onsets(std::vector<LognormalStroke>& strokes) {
    const auto by_onset = [](const LognormalStroke& a, const LognormalStroke& b) { return a.t0 < b.t0; };
    if (std::is_sorted(strokes.begin(), strokes.end(), by_onset)) return;
    std::vector<double> onsets;
    for (const auto& s : strokes) onsets.push_back(s.t0);
    std::sort(onsets.begin(), onsets.end());
    for (std::size_t j = 0; j < strokes.size(); ++j) strokes[j].t0 = onsets[j];
}

void transform_points(plan::ActionPlan& plan, const auto& f) {
    for (auto& p : plan.targets) p = f(p);
    for (auto& p : plan.midpoints) p = f(p);
}

}  // namespace

DuplicationConfig DuplicationConfig::for_kind(DuplicateKind kind, std::uint64_t seed) {
    DuplicationConfig cfg;
    cfg.kind = kind;
    cfg.m = kind == DuplicateKind::genuine ? kGenuineLevel : kForgeryLevel;
    cfg.seed = seed;
    return cfg;
}

void DuplicationConfig::validate() const {
    if (!(m >= 0.0 && m < 1.0)) throw DomainError("DuplicationConfig: m must be in [0, 1)");
    if (!(insert_remove_max_fraction >= 0.0 && insert_remove_max_fraction <= 0.05)) {
        throw DomainError("DuplicationConfig: insert_remove_max_fraction must be in [0, 0.05]");
    }
    if (!(rotation_scale >= 0.0)) throw DomainError("DuplicationConfig: rotation_scale must be nonnegative");
    if (!(displacement_range >= 0.0)) throw DomainError("DuplicationConfig: displacement_range must be nonnegative");
}

SigmaLogSignature perturb_parameters(const SigmaLogSignature& sig, const DuplicationConfig& cfg) {
    cfg.validate();
    SigmaLogSignature out = sig;
    if (cfg.m == 0.0) return out;
    Rng rng = make_rng(cfg.seed, {kPerturbStream});
    std::normal_distribution<double> normal;
    const double big = 0.01 * cfg.m;
    const double small = 0.001 * cfg.m;
    const bool has_plan = out.plan.link_count() == out.strokes.size() && !out.strokes.empty();

    for (std::size_t j = 0; j < out.strokes.size(); ++j) {
        auto& s = out.strokes[j];
        const LognormalStroke before = s;
        s.mu *= 1.0 + big * normal(rng);
        s.sigma2 = std::max(s.sigma2 * (1.0 + big * normal(rng)), kSigma2Floor);
        s.t0 *= 1.0 + small * normal(rng);
        s.theta_e *= 1.0 + small * normal(rng);
        s.theta_s *= 1.0 + small * normal(rng);
        s.phi_e *= 1.0 + small * normal(rng);
        s.phi_s *= 1.0 + small * normal(rng);
        if (!has_plan || (s.theta_s == before.theta_s && s.phi_s == before.phi_s)) continue;

        // Turn the link's start tangent by the rotation taking the old start direction to the new one.
        auto& arc = out.plan.links[j];
        const Eigen::Quaterniond turn = Eigen::Quaterniond::FromTwoVectors(
            direction_from_angles(before.theta_s, before.phi_s), direction_from_angles(s.theta_s, s.phi_s));
        arc = plan::fit_arc_from_tangent(arc.start, arc.end, turn * arc.tangent_at(0.0));
        out.plan.midpoints[j] = arc.midpoint();
        s.D = arc.length();
        fs::set_stroke_angles(s, arc);
    }
    resort_onsets(out.strokes);
    return out;
}

EditedPlan edit_target_points_mapped(const plan::ActionPlan& plan, const DuplicationConfig& cfg) {
    cfg.validate();
    EditedPlan out;
    out.plan = plan;
    out.source_link.resize(plan.link_count());
    for (std::size_t j = 0; j < plan.link_count(); ++j) out.source_link[j] = static_cast<int>(j);
    const std::size_t n = plan.targets.size();
    if (n < 3 || cfg.m == 0.0) return out;

    Rng rng = make_rng(cfg.seed, {kEditStream});
    const auto cap = static_cast<int>(std::floor(cfg.insert_remove_max_fraction * static_cast<double>(n)));
    const int removals = std::uniform_int_distribution<int>(0, cap)(rng);
    const int insertions = cfg.kind == DuplicateKind::genuine ? std::uniform_int_distribution<int>(0, cap)(rng)
                                                               : std::uniform_int_distribution<int>(1, cap + 1)(rng);

    auto& p = out.plan;
    auto& src = out.source_link;
    const bool timed = p.timed();

    for (int r = 0; r < removals; ++r) {
        std::size_t best = 0;
        double best_gap = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i + 1 < p.targets.size(); ++i) {
            if ((p.targets[i + 1] - p.targets[i - 1]).norm() < 1e-9) continue;  // would close a loop
            const double gap = std::min((p.targets[i] - p.targets[i - 1]).norm(), (p.targets[i + 1] - p.targets[i]).norm());
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best == 0) break;
        const auto at = static_cast<std::ptrdiff_t>(best);
        // The merged link passes through the removed point.
        const auto merged = plan::fit_planar_arc(p.targets[best - 1], p.targets[best + 1], p.targets[best]);
        p.links[best - 1] = merged;
        p.midpoints[best - 1] = merged.midpoint();
        src[best - 1] = -1;
        p.links.erase(p.links.begin() + at);
        p.midpoints.erase(p.midpoints.begin() + at);
        src.erase(src.begin() + at);
        p.targets.erase(p.targets.begin() + at);
        if (timed) p.timestamps.erase(p.timestamps.begin() + at);
    }

    std::uniform_real_distribution<double> unit;
    for (int k = 0; k < insertions; ++k) {
        const auto j = std::uniform_int_distribution<std::size_t>(0, p.link_count() - 1)(rng);
        const bool near_start = unit(rng) < 0.5;
        const double reach = kInsertReach * (1.0 - unit(rng));  // (0, kInsertReach]
        const auto arc = p.links[j];
        const double len = arc.length();
        const double s = near_start ? reach * len : (1.0 - reach) * len;
        const Vec3 point = arc.point_at(s);
        const auto first = plan::fit_planar_arc(arc.start, point, arc.point_at(0.5 * s));
        const auto second = plan::fit_planar_arc(point, arc.end, arc.point_at(0.5 * (s + len)));
        const auto at = static_cast<std::ptrdiff_t>(j);
        p.links[j] = second;
        p.midpoints[j] = second.midpoint();
        src[j] = -1;
        p.links.insert(p.links.begin() + at, first);
        p.midpoints.insert(p.midpoints.begin() + at, first.midpoint());
        src.insert(src.begin() + at, -1);
        p.targets.insert(p.targets.begin() + at + 1, point);
        if (timed) {
            const double t = p.timestamps[j] + (s / len) * (p.timestamps[j + 1] - p.timestamps[j]);
            p.timestamps.insert(p.timestamps.begin() + at + 1, t);
        }
    }
    p.validate();
    return out;
}

plan::ActionPlan edit_target_points(const plan::ActionPlan& plan, const DuplicationConfig& cfg) {
    return edit_target_points_mapped(plan, cfg).plan;
}

plan::ActionPlan sinusoidal_distortion(const plan::ActionPlan& plan, double m, bool extent_scaled_amplitude) {
    if (plan.targets.empty()) throw InputError("sinusoidal_distortion: empty plan");
    if (m == 0.0) return plan;
    Vec3 lo = plan.targets.front();
    Vec3 hi = lo;
    for (const auto& t : plan.targets) {
        lo = lo.cwiseMin(t);
        hi = hi.cwiseMax(t);
    }
    const Vec3 extent = hi - lo;
    const double periods = 3.0 * m;
    plan::ActionPlan out = plan;
    transform_points(out, [&](const Vec3& p) -> Vec3 {
        Vec3 q = p;
        for (int a = 0; a < 3; ++a) {
            if (extent[a] < 1e-9) continue;
            const double amplitude = extent_scaled_amplitude ? m / 50.0 * extent[a] : m / 50.0;
            q[a] = p[a] * (1.0 + amplitude * std::sin(kTwoPi * periods * p[a] / extent[a]));
        }
        return q;
    });
    plan::refit_links(out);
    return out;
}

plan::ActionPlan affine_transform(const plan::ActionPlan& plan, const DuplicationConfig& cfg) {
    if (plan.targets.empty()) throw InputError("affine_transform: empty plan");
    if (!cfg.affine_enabled) return plan;
    Rng rng = make_rng(cfg.seed, {kAffineStream});
    std::normal_distribution<double> normal;
    const double ax = cfg.rotation_scale * normal(rng);
    const double ay = cfg.rotation_scale * normal(rng);
    const double az = cfg.rotation_scale * normal(rng);
    const double r = std::uniform_real_distribution<double>(0.0, cfg.displacement_range)(rng);
    const Eigen::Matrix3d rot = (Eigen::AngleAxisd(az, Vec3::UnitZ()) * Eigen::AngleAxisd(ay, Vec3::UnitY()) *
                                 Eigen::AngleAxisd(ax, Vec3::UnitX()))
                                    .toRotationMatrix();
    Vec3 centroid = Vec3::Zero();
    for (const auto& t : plan.targets) centroid += t;
    centroid /= static_cast<double>(plan.targets.size());

    plan::ActionPlan out = plan;
    transform_points(out, [&](const Vec3& p) -> Vec3 { return rot * (p - centroid) + centroid; });
    Vec3 mean = Vec3::Zero();
    for (const auto& t : out.targets) mean += t;
    mean /= static_cast<double>(out.targets.size());
    const Vec3 shift = r * mean;
    transform_points(out, [&](const Vec3& p) -> Vec3 { return p + shift; });
    plan::refit_links(out);
    return out;
}

Duplicate duplicate_signature(const SigmaLogSignature& sig, const DuplicationConfig& cfg, double f_m) {
    cfg.validate();
    if (sig.plan.link_count() == 0) throw InputError("duplicate_signature: signature has no action plan");
    sig.validate();
    const auto perturbed = perturb_parameters(sig, cfg);
    auto edited = edit_target_points_mapped(perturbed.plan, cfg);
    auto plan = affine_transform(sinusoidal_distortion(edited.plan, cfg.m, cfg.extent_scaled_amplitude), cfg);
    const bool reshaped = cfg.m != 0.0 || cfg.affine_enabled;

    Duplicate out;
    out.signature.plan = std::move(plan);
    const auto& p = out.signature.plan;
    for (std::size_t j = 0; j < p.link_count(); ++j) {
        LognormalStroke s;
        if (edited.source_link[j] >= 0) {
            s = perturbed.strokes[static_cast<std::size_t>(edited.source_link[j])];
        } else {
            if (!p.timed()) throw InputError("duplicate_signature: editing targets needs a timed plan");
            s = fs::solve_stroke_timing(p.timestamps[j], p.timestamps[j + 1]);
        }
        if (reshaped) {
            s.D = p.links[j].length();
            fs::set_stroke_angles(s, p.links[j]);
        }
        out.signature.strokes.push_back(s);
    }
    resort_onsets(out.signature.strokes);
    out.signature.validate();
    out.rendered = fs::render_full_signature(out.signature, f_m);
    return out;
}

}  // namespace airsig::ds
