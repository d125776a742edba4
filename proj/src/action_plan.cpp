#include "airsig/action_plan.hpp"

#include "airsig/error.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <string>

namespace airsig::plan {

double PlanarArc::length() const {
    if (is_degenerate_segment) return (end - start).norm();
    return radius * (end_angle - start_angle);
}

Vec3 PlanarArc::point_at(double s) const {
    if (is_degenerate_segment) {
        const double len = (end - start).norm();
        return start + (s / len) * (end - start);
    }
    const double theta = start_angle + s / radius;
    return center + radius * (std::cos(theta) * u_axis + std::sin(theta) * w_axis);
}

Vec3 PlanarArc::tangent_at(double s) const {
    if (is_degenerate_segment) return (end - start).normalized();
    const double theta = start_angle + s / radius;
    return -std::sin(theta) * u_axis + std::cos(theta) * w_axis;
}

namespace {

PlanarArc straight_segment(const Vec3& p1, const Vec3& p2) {
    PlanarArc arc;
    arc.is_degenerate_segment = true;
    arc.start = p1;
    arc.end = p2;
    arc.center = 0.5 * (p1 + p2);
    arc.radius = std::numeric_limits<double>::infinity();
    const Vec3 dir = (p2 - p1).normalized();
    arc.u_axis = dir;
    // Any unit vector orthogonal to the segment serves as a nominal normal.
    const Vec3 helper = std::abs(dir.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    arc.plane_normal = dir.cross(helper).normalized();
    arc.w_axis = arc.plane_normal.cross(dir);
    arc.end_angle = 0.0;
    return arc;
}

// Completes an arc given centre, radius, normal and the start/end points.
PlanarArc finish_arc(const Vec3& p1, const Vec3& p2, const Vec3& center, double radius, const Vec3& normal) {
    PlanarArc arc;
    arc.center = center;
    arc.radius = radius;
    arc.plane_normal = normal;
    arc.u_axis = (p1 - center) / radius;
    arc.w_axis = normal.cross(arc.u_axis);
    arc.start = p1;
    arc.end = p2;
    const Vec3 rel = p2 - center;
    double end_angle = std::atan2(rel.dot(arc.w_axis), rel.dot(arc.u_axis));
    if (end_angle <= 0.0) end_angle += kTwoPi;
    arc.start_angle = 0.0;
    arc.end_angle = end_angle;
    return arc;
}

}  // namespace

PlanarArc fit_planar_arc(const Vec3& p1, const Vec3& p2, const Vec3& pm) {
    const Vec3 chord = p2 - p1;
    const double chord2 = chord.squaredNorm();
    if (chord2 == 0.0) throw InputError("fit_planar_arc: start and end points coincide");

    const Vec3 a = p1 - pm;
    const Vec3 b = p2 - pm;
    const Vec3 axb = a.cross(b);
    const double area = 0.5 * axb.norm();
    if (area < 1e-9 * chord2) return straight_segment(p1, p2);

    const Vec3 center = pm + (a.squaredNorm() * b - b.squaredNorm() * a).cross(axb) / (2.0 * axb.squaredNorm());
    const double radius = (p1 - center).norm();
    const Vec3 normal = (pm - p1).cross(chord).normalized();
    return finish_arc(p1, p2, center, radius, normal);
}

PlanarArc fit_arc_from_tangent(const Vec3& p1, const Vec3& p2, const Vec3& tangent) {
    const Vec3 chord = p2 - p1;
    if (chord.squaredNorm() == 0.0) throw InputError("fit_arc_from_tangent: start and end points coincide");
    const Vec3 t = tangent.normalized();
    const Vec3 perp = chord - chord.dot(t) * t;
    if (perp.norm() < 1e-9 * chord.norm()) return straight_segment(p1, p2);
    const Vec3 inward = perp.normalized();
    const double radius = chord.squaredNorm() / (2.0 * chord.dot(inward));
    const Vec3 center = p1 + radius * inward;
    return finish_arc(p1, p2, center, radius, t.cross(inward).normalized());
}

void ActionPlan::validate() const {
    if (targets.size() < 2) throw InputError("action plan: needs at least 2 targets");
    if (links.size() + 1 != targets.size() || midpoints.size() != links.size()) {
        throw InputError("action plan: link/midpoint counts must equal targets - 1");
    }
    if (!timestamps.empty()) {
        if (timestamps.size() != targets.size()) throw InputError("action plan: one timestamp per target required");
        for (std::size_t j = 1; j < timestamps.size(); ++j) {
            if (!(timestamps[j] > timestamps[j - 1])) throw InputError("action plan: timestamps must increase");
        }
    }
    for (std::size_t j = 0; j < links.size(); ++j) {
        const auto& arc = links[j];
        const double scale = 1.0 + targets[j].norm() + (targets[j + 1] - targets[j]).norm();
        const double tol = 1e-9 * scale;
        if ((arc.point_at(0.0) - targets[j]).norm() > tol ||
            (arc.point_at(arc.length()) - targets[j + 1]).norm() > tol) {
            throw InputError("action plan: link " + std::to_string(j) + " does not join its targets");
        }
    }
}

ActionPlan build_plan(std::vector<Vec3> targets, std::vector<Vec3> midpoints, std::vector<double> timestamps) {
    if (targets.size() < 2) throw InputError("build_plan: needs at least 2 targets");
    if (midpoints.size() + 1 != targets.size()) throw InputError("build_plan: one midpoint per link required");
    if (!timestamps.empty() && timestamps.size() != targets.size()) {
        throw InputError("build_plan: one timestamp per target required");
    }

    ActionPlan plan;
    plan.targets.push_back(targets[0]);
    if (!timestamps.empty()) plan.timestamps.push_back(timestamps[0]);
    std::size_t dropped = 0;
    for (std::size_t j = 0; j + 1 < targets.size(); ++j) {
        const Vec3& from = plan.targets.back();
        const Vec3& to = targets[j + 1];
        if ((to - from).norm() <= 1e-12 * (1.0 + from.norm())) {
            ++dropped;
            continue;
        }
        plan.midpoints.push_back(midpoints[j]);
        plan.links.push_back(fit_planar_arc(from, to, midpoints[j]));
        plan.targets.push_back(to);
        if (!timestamps.empty()) plan.timestamps.push_back(timestamps[j + 1]);
    }
    if (dropped > 0) std::clog << "airsig: dropped " << dropped << " zero-length link(s)\n";
    if (plan.targets.size() < 2) throw InputError("build_plan: all targets coincide");
    return plan;
}

void refit_links(ActionPlan& plan) {
    plan.links.clear();
    for (std::size_t j = 0; j + 1 < plan.targets.size(); ++j) {
        plan.links.push_back(fit_planar_arc(plan.targets[j], plan.targets[j + 1], plan.midpoints[j]));
    }
}

}  // namespace airsig::plan
