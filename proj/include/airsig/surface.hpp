#pragma once

#include "airsig/geometry.hpp"

#include <span>
#include <vector>

namespace airsig::plan {

/// z = Ax·sin(wx·x + phx) + Ay·sin(wy·y + phy)
struct SurfaceConfig {
    double Ax = 7.5;
    double Ay = 7.5;
    double wx = kTwoPi / 100.0;
    double wy = kTwoPi / 100.0;
    double phx = 0.0;
    double phy = 0.0;

    /// Gentle depth modulation for a canvas of the given width: peak-to-peak z
    /// about 15% of the width, one spatial period across it, zero phases.
    static SurfaceConfig for_canvas(double canvas_size);

    void validate() const;
    double height(double x, double y) const;
};

std::vector<Vec3> project_to_surface(std::span<const Vec2> points, const SurfaceConfig& cfg);

}  // namespace airsig::plan
