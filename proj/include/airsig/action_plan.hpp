#pragma once

#include "airsig/geometry.hpp"

#include <optional>
#include <vector>

namespace airsig::plan {

/// Circular arc in 3D, or a straight segment when the defining points are collinear.
///
/// Points on a proper arc are c + r·(cos θ·u + sin θ·w) with θ running from
/// start_angle (0) to end_angle (> 0). (u, w) is an orthonormal basis of the
/// arc plane with w = normal × u, so travel is counter-clockwise about the normal.
struct PlanarArc {
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
    Vec3 plane_normal = Vec3::UnitZ();
    Vec3 u_axis = Vec3::UnitX();
    Vec3 w_axis = Vec3::UnitY();
    double start_angle = 0.0;
    double end_angle = 0.0;
    bool is_degenerate_segment = false;
    Vec3 start = Vec3::Zero();
    Vec3 end = Vec3::Zero();

    double length() const;

    /// Position after travelling `s` along the arc from its start. Values of s
    /// outside [0, length] continue along the same circle (or line).
    Vec3 point_at(double s) const;

    /// Unit tangent at arc length s.
    Vec3 tangent_at(double s) const;

    Vec3 midpoint() const { return point_at(0.5 * length()); }
};

/// Circle through p1, pm, p2, travelled from p1 through pm to p2.
/// Collinear input (triangle area < 1e−9·chord²) yields a degenerate segment.
/// Throws InputError when p1 == p2.
PlanarArc fit_planar_arc(const Vec3& p1, const Vec3& p2, const Vec3& pm);

/// Arc from p1 to p2 leaving p1 along `tangent`. A tangent parallel to the
/// chord yields a straight segment.
PlanarArc fit_arc_from_tangent(const Vec3& p1, const Vec3& p2, const Vec3& tangent);

/// Ordered virtual target points linked by planar arcs, with optional timing.
struct ActionPlan {
    std::vector<Vec3> targets;
    std::vector<Vec3> midpoints;   // one per link
    std::vector<PlanarArc> links;  // links[j] joins targets[j] and targets[j+1]
    std::vector<double> timestamps;  // empty until timed; else one per target

    std::size_t link_count() const { return links.size(); }
    bool timed() const { return !timestamps.empty(); }

    /// Throws InputError when the count/arc invariants are violated.
    void validate() const;
};

/// Builds a plan from targets and midpoints, fitting one arc per link.
/// Links with coincident endpoints are dropped together with the repeated
/// target (a warning is written to std::clog). Timestamps, when given, must
/// have one entry per target and are carried along.
ActionPlan build_plan(std::vector<Vec3> targets, std::vector<Vec3> midpoints,
                      std::vector<double> timestamps = {});

/// Re-fits every link from the current targets and midpoints.
void refit_links(ActionPlan& plan);

}  // namespace airsig::plan
