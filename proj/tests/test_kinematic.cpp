#include "airsig/error.hpp"
#include "airsig/estimate.hpp"
#include "airsig/full_synthesis.hpp"
#include "airsig/kinematic.hpp"
#include "airsig/lognormal.hpp"
#include "airsig/morphology.hpp"
#include "airsig/timing.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace airsig;
using namespace airsig::ks;

namespace {

Trajectory3D polyline(std::vector<Vec3> pts) { return Trajectory3D(std::move(pts)); }

Trajectory3D circle(double r, int n, double turns = 1.0) {
    std::vector<Vec3> p;
    for (int i = 0; i <= n; ++i) {
        const double a = turns * kTwoPi * i / n;
        p.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
    }
    return polyline(p);
}

Trajectory3D zigzag(int corners) {
    std::vector<Vec3> p;
    for (int i = 0; i <= corners + 1; ++i) p.emplace_back(20.0 * i, (i % 2) ? 30.0 : 0.0, 0.0);
    return polyline(p);
}

Trajectory3D fs_trajectory(std::uint64_t seed, double fm) {
    plan::MorphologyConfig cfg;
    const auto p = plan::lift_to_plan(plan::generate_morphology_2d(cfg, seed), plan::SurfaceConfig::for_canvas(100.0));
    return fs::render_full_signature(fs::plan_to_signature(plan::assign_timestamps(p, seed + 7)), fm).trajectory;
}

}  // namespace

TEST(Densify, StraightSegment) {
    const auto d = densify_path(polyline({{0, 0, 0}, {10, 0, 0}}), 1.0);
    ASSERT_EQ(d.size(), 11u);
    for (std::size_t i = 0; i < d.size(); ++i) EXPECT_NEAR(d.points[i].x(), static_cast<double>(i), 1e-12);
    EXPECT_NEAR(d.total_length(), 10.0, 1e-12);
    EXPECT_NEAR(d.position_at(2.5).x(), 2.5, 1e-12);
}

TEST(Densify, CircleLength) {
    const auto d = densify_path(circle(50.0, 720), 0.5);
    EXPECT_NEAR(d.total_length(), kTwoPi * 50.0, 0.005 * kTwoPi * 50.0);
    for (std::size_t i = 1; i + 1 < d.size(); ++i) EXPECT_NEAR((d.points[i] - d.points[i - 1]).norm(), 0.5, 1e-3);
}

TEST(Densify, ZeroLengthRejected) {
    EXPECT_THROW(densify_path(polyline({{1, 1, 1}, {1, 1, 1}}), 1.0), InputError);
    EXPECT_THROW(densify_path(polyline({{0, 0, 0}, {1, 0, 0}}), 0.0), InputError);
}

TEST(Curvature, CircleIsOneOverR) {
    const double r = 40.0;
    const auto d = densify_path(circle(r, 2000), 0.25);
    for (int scale : {1, 4, 16}) {
        const auto k = plane_curvature(d, Plane::xy, scale);
        for (std::size_t i = d.size() / 4; i < 3 * d.size() / 4; ++i) EXPECT_NEAR(std::abs(k[i]), 1.0 / r, 0.05 / r);
    }
}

TEST(Curvature, LineIsFlat) {
    const auto d = densify_path(polyline({{0, 0, 0}, {30, 40, 10}}), 0.5);
    for (auto plane : {Plane::xy, Plane::xz, Plane::yz}) {
        for (double v : plane_curvature(d, plane, 5)) EXPECT_LT(std::abs(v), 1e-6);
    }
}

TEST(Curvature, EdgeOnProjectionIsFlat) {
    // circle in the xy plane seen edge-on in xz
    const auto d = densify_path(circle(40.0, 2000), 0.25);
    for (double v : plane_curvature(d, Plane::xz, 3)) EXPECT_LT(std::abs(v), 1e-6);
}

TEST(Curvature, Scales) {
    const auto s = curvature_scales(1000);
    EXPECT_LE(s.size(), 12u);
    EXPECT_EQ(s.front(), 1);
    EXPECT_GE(s.back(), 499);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LT(s[i - 1], s[i]);
    // every scale leaves the path longer than its stencil
    for (std::size_t m : {6u, 25u, 1000u}) {
        for (int k : curvature_scales(m)) EXPECT_LT(2u * static_cast<std::size_t>(k), m);
    }
}

TEST(Peaks, SingleBump) {
    std::vector<double> c(101);
    for (int i = 0; i <= 100; ++i) c[i] = std::exp(-(i - 40.0) * (i - 40.0) / 20.0);
    const auto p = select_peaks(c);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_EQ(p[0], 40u);
}

TEST(Peaks, FlatHasNone) { EXPECT_TRUE(select_peaks(std::vector<double>(50, 1.0)).empty()); }

TEST(Salient, StraightLineOnlyEndpoints) {
    const auto d = densify_path(polyline({{0, 0, 0}, {100, 20, 5}}), 0.5);
    const auto s = detect_salient_points(d);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s.indices.front(), 0u);
    EXPECT_EQ(s.indices.back(), d.size() - 1);
}

TEST(Salient, VShapeHasItsCorner) {
    const auto d = densify_path(polyline({{0, 0, 0}, {50, 80, 0}, {100, 0, 0}}), 0.5);
    const auto s = detect_salient_points(d);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_NEAR(d.points[s.indices[1]].x(), 50.0, 2.0);
    EXPECT_NE(s.planes[1] & kPlaneXY, 0);
}

TEST(Salient, ZigzagCorners) {
    for (int k : {2, 4, 6}) {
        const auto d = densify_path(zigzag(k), 0.25);
        EXPECT_EQ(detect_salient_points(d).size(), static_cast<std::size_t>(k + 2)) << k;
    }
}

TEST(Salient, RotationInvariantCount) {
    const auto base = zigzag(4);
    const Eigen::Matrix3d rot = (Eigen::AngleAxisd(0.7, Vec3(1, 2, 3).normalized())).toRotationMatrix();
    std::vector<Vec3> pts;
    for (const auto& p : base.points()) pts.push_back(rot * p);
    EXPECT_EQ(detect_salient_points(densify_path(base, 0.25)).size(),
              detect_salient_points(densify_path(polyline(pts), 0.25)).size());
}

TEST(Salient, TooShortRejected) {
    EXPECT_THROW(detect_salient_points(densify_path(polyline({{0, 0, 0}, {5, 0, 0}}), 1.0)), InputError);
}

TEST(Moments, WorkedExample) {
    const auto m = moments_to_lognormal(1.0, 0.0625);
    EXPECT_NEAR(m.mu, -0.5 * std::log(1.0625), 1e-12);  // −0.0303123
    EXPECT_NEAR(m.sigma2, 0.060625, 1e-6);
    EXPECT_THROW(moments_to_lognormal(0.0, 1.0), DomainError);
    EXPECT_THROW(moments_to_lognormal(1.0, 0.0), DomainError);
}

TEST(MomentsProperty, LognormalMomentsAreRecovered) {
    Rng rng(4);
    std::uniform_real_distribution<double> mean(0.01, 3.0), cv(0.05, 2.0);
    for (int k = 0; k < 500; ++k) {
        const double m = mean(rng), v = std::pow(cv(rng) * m, 2);
        const auto l = moments_to_lognormal(m, v);
        const double m2 = std::exp(l.mu + l.sigma2 / 2);
        const double v2 = (std::exp(l.sigma2) - 1) * std::exp(2 * l.mu + l.sigma2);
        EXPECT_NEAR(m2 / m, 1.0, 1e-9);
        EXPECT_NEAR(v2 / v, 1.0, 1e-9);
    }
}

TEST(Velocity, AreaMatchesPathLength) {
    const auto d = densify_path(zigzag(4), 0.25);
    const auto s = detect_salient_points(d);
    const auto vp = synthesize_velocity(s, d, 3);
    EXPECT_EQ(vp.strokes.size(), s.size() - 1);
    EXPECT_EQ(vp.timestamps.size(), s.size());
    EXPECT_GT(vp.omega, 0.0);
    EXPECT_NEAR(vp.distance(vp.duration) / d.total_length(), 1.0, 1e-3);
    double max_end = 0.0;
    for (const auto& st : vp.strokes) max_end = std::max(max_end, st.t0 + std::exp(st.mu + 5 * st.sigma()));
    EXPECT_NEAR(vp.duration, max_end, 1e-9);
    EXPECT_GE(vp.speed(0.5 * vp.duration), 0.0);
}

TEST(Velocity, SingleSalientPointRejected) {
    const auto d = densify_path(zigzag(2), 0.25);
    SalientPointSet s;
    s.indices = {0};
    s.planes = {0};
    EXPECT_THROW(synthesize_velocity(s, d, 0), InputError);
}

TEST(Resample, UniformClockAndMonotonePath) {
    const auto d = densify_path(zigzag(3), 0.25);
    const auto vp = synthesize_velocity(detect_salient_points(d), d, 5);
    const auto t = resample_with_velocity(d, vp, 100.0);
    ASSERT_TRUE(t.timed());
    EXPECT_EQ(t.size(), static_cast<std::size_t>(std::floor(vp.duration * 100.0)) + 1);
    EXPECT_EQ(t.time(0), 0.0);
    EXPECT_NEAR(t.time(1), 0.01, 1e-12);
    EXPECT_NEAR((t.points().front() - d.points.front()).norm(), 0.0, 1e-9);
    EXPECT_NEAR((t.points().back() - d.points.back()).norm(), 0.0, 0.01 * d.total_length());
}

TEST(Kinematics, StraightLineTwoSalientPoints) {
    const auto r = synthesize_kinematics(polyline({{0, 0, 0}, {80, 0, 0}}), 60.0, 1);
    EXPECT_EQ(r.salient.size(), 2u);
    EXPECT_EQ(r.profile.strokes.size(), 1u);
    EXPECT_NEAR(r.path_length, 80.0, 1e-9);
}

TEST(Kinematics, DurationFollowsRhythm) {
    for (int k : {3, 5, 8}) {
        const auto r = synthesize_kinematics(zigzag(k), 60.0, 2);
        const double n = static_cast<double>(r.salient.size());
        EXPECT_NEAR(r.profile.duration, 0.1 * (n - 1), 0.2 * 0.1 * (n - 1) + 0.5) << k;
    }
}

TEST(Kinematics, DeterministicInSeed) {
    const auto a = synthesize_kinematics(zigzag(4), 60.0, 9);
    const auto b = synthesize_kinematics(zigzag(4), 60.0, 9);
    EXPECT_TRUE(a.trajectory == b.trajectory);
}

TEST(Kinematics, IgnoresInputTiming) {
    const auto fsr = fs_trajectory(3, 200.0);
    const auto a = synthesize_kinematics(fsr, 60.0, 1);
    const auto b = synthesize_kinematics(fsr.bare(), 60.0, 1);
    EXPECT_TRUE(a.trajectory == b.trajectory);
}

TEST(Estimate, FsSignatureIsRecovered) {
    const auto t = fs_trajectory(12, 100.0);
    const auto e = estimate_parameters(t);
    EXPECT_GE(e.snr_v, 15.0);
    EXPECT_GE(e.snr_t, 15.0);
    EXPECT_NO_THROW(e.signature.validate());
    EXPECT_EQ(e.reconstruction.size(), t.size());
}

TEST(Estimate, SpeedMinimaOfRhythmicStrokes) {
    const auto t = fs_trajectory(1, 200.0);
    const auto m = speed_minimum_times(t);
    EXPECT_FALSE(m.empty());
    for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LT(m[i - 1], m[i]);
}

TEST(Estimate, StraightLineIsOneStroke) {
    std::vector<double> ts;
    std::vector<Vec3> p;
    for (int i = 0; i <= 60; ++i) {
        const double u = i / 60.0;
        ts.push_back(u);
        p.emplace_back(100.0 * (u - std::sin(kTwoPi * u) / kTwoPi), 0.0, 0.0);
    }
    const auto e = estimate_parameters(Trajectory3D(ts, p));
    EXPECT_EQ(e.signature.size(), 1u);
    EXPECT_GT(e.snr_t, 15.0);
}

TEST(Estimate, Deterministic) {
    const auto t = fs_trajectory(5, 100.0);
    const auto a = estimate_parameters(t), b = estimate_parameters(t);
    ASSERT_EQ(a.signature.size(), b.signature.size());
    for (std::size_t j = 0; j < a.signature.size(); ++j) EXPECT_TRUE(a.signature.strokes[j] == b.signature.strokes[j]);
}

TEST(Estimate, UntimedRejected) {
    EXPECT_THROW(estimate_parameters(polyline({{0, 0, 0}, {1, 0, 0}})), InputError);
}
