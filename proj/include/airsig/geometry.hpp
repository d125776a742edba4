#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace airsig {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle difference to (−π, π].
inline double wrap_angle(double a) {
    while (a > kPi) a -= kTwoPi;
    while (a <= -kPi) a += kTwoPi;
    return a;
}

/// Unit vector from azimuth ϑ (about z, from +x) and polar angle φ (from +z).
inline Vec3 direction_from_angles(double azimuth, double polar) {
    return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

struct SphericalAngles {
    double azimuth;
    double polar;
};

inline SphericalAngles angles_from_direction(const Vec3& d) {
    const Vec3 u = d.normalized();
    return {std::atan2(u.y(), u.x()), std::acos(std::clamp(u.z(), -1.0, 1.0))};
}

}  // namespace airsig
