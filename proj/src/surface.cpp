#include "airsig/surface.hpp"

#include "airsig/error.hpp"

#include <cmath>

namespace airsig::plan {

SurfaceConfig SurfaceConfig::for_canvas(double canvas_size) {
    SurfaceConfig cfg;
    cfg.Ax = cfg.Ay = 0.075 * canvas_size;
    cfg.wx = cfg.wy = kTwoPi / canvas_size;
    cfg.phx = cfg.phy = 0.0;
    return cfg;
}

void SurfaceConfig::validate() const {
    if (!(Ax >= 0.0) || !(Ay >= 0.0)) throw InputError("surface: amplitudes must be non-negative");
    if (!std::isfinite(wx) || !std::isfinite(wy) || !std::isfinite(phx) || !std::isfinite(phy)) {
        throw InputError("surface: frequencies and phases must be finite");
    }
}

double SurfaceConfig::height(double x, double y) const {
    return Ax * std::sin(wx * x + phx) + Ay * std::sin(wy * y + phy);
}

std::vector<Vec3> project_to_surface(std::span<const Vec2> points, const SurfaceConfig& cfg) {
    cfg.validate();
    std::vector<Vec3> out;
    out.reserve(points.size());
    for (const auto& p : points) out.emplace_back(p.x(), p.y(), cfg.height(p.x(), p.y()));
    return out;
}

}  // namespace airsig::plan
