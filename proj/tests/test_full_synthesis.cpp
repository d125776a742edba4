#include "airsig/error.hpp"
#include "airsig/full_synthesis.hpp"
#include "airsig/lognormal.hpp"
#include "airsig/morphology.hpp"
#include "airsig/timing.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace airsig;

namespace {

// Positive root of x² + b·x − c by the quadratic formula.
double quadratic_root(double b, double c) { return (-b + std::sqrt(b * b + 4.0 * c)) / 2.0; }

plan::ActionPlan timed_plan(std::uint64_t seed) {
    plan::MorphologyConfig cfg;
    const auto p = plan::lift_to_plan(plan::generate_morphology_2d(cfg, seed), plan::SurfaceConfig::for_canvas(100.0));
    return plan::assign_timestamps(p, seed + 1000);
}

}  // namespace

TEST(Solvers, OneSecondStroke) {
    EXPECT_NEAR(fs::solve_sigma(0.0, 1.0, -0.5), 0.093508, 1e-6);
    EXPECT_NEAR(fs::solve_sigma(0.0, 1.0, -0.5, {.fixed_log_ratio = true}), 0.093508, 1e-6);
}

TEST(Solvers, MatchQuadraticFormula) {
    for (double d : {0.02, 0.1, 0.4, 1.7}) {
        const double t0 = -0.5;
        const double expect = quadratic_root(3.0 * std::sqrt(2.0), std::log((d - t0) / (d / 2 - t0)));
        EXPECT_NEAR(fs::solve_sigma(0.0, d, t0), expect, 1e-12) << d;
        EXPECT_NEAR(fs::solve_mu(d, t0, expect), std::log(d - t0) - 3.0 * std::sqrt(2.0) * expect, 1e-15);
    }
}

TEST(Solvers, InvalidIntervalsRejected) {
    EXPECT_THROW(fs::solve_sigma(1.0, 1.0, 0.5), InputError);
    EXPECT_THROW(fs::solve_sigma(0.0, 1.0, 0.0), InputError);
}

TEST(SolversProperty, PeakAtCentreAndCompleteAtEnd) {
    Rng rng(17);
    std::uniform_real_distribution<double> dur(0.02, 2.0), start(0.0, 5.0);
    for (int k = 0; k < 500; ++k) {
        const double a = start(rng), b = a + dur(rng);
        const auto s = fs::solve_stroke_timing(a, b);
        EXPECT_NEAR(s.t0, a - fs::kOnsetLead, 1e-12);
        // mode at the centre; 3√2σ beyond μ reaches ts_cur
        EXPECT_NEAR(s.t0 + std::exp(s.mu - s.sigma2), 0.5 * (a + b), 1e-9);
        EXPECT_NEAR(s.t0 + std::exp(s.mu + 3 * std::sqrt(2.0) * s.sigma()), b, 1e-9);
        EXPECT_GT(core::lognormal_area(b, s.t0, s.mu, s.sigma2), 0.9999);
    }
}

TEST(PlanToSignature, OneStrokePerLinkWithArcLengths) {
    const auto p = timed_plan(4);
    const auto sig = fs::plan_to_signature(p);
    ASSERT_EQ(sig.size(), p.link_count());
    EXPECT_NO_THROW(sig.validate());
    for (std::size_t j = 0; j < sig.size(); ++j) {
        EXPECT_NEAR(sig.strokes[j].D, p.links[j].length(), 1e-12);
        const Vec3 d = direction_from_angles(sig.strokes[j].theta_s, sig.strokes[j].phi_s);
        EXPECT_NEAR((d - p.links[j].tangent_at(0.0)).norm(), 0.0, 1e-9);
    }
}

TEST(PlanToSignature, UntimedRejected) {
    auto p = timed_plan(4);
    p.timestamps.clear();
    EXPECT_THROW(fs::plan_to_signature(p), InputError);
}

TEST(Render, PassesThroughTargets) {
    const auto p = timed_plan(8);
    const auto sig = fs::plan_to_signature(p);
    const auto r = fs::render_full_signature(sig, 1000.0);
    const auto& traj = r.trajectory;
    ASSERT_TRUE(traj.timed());
    EXPECT_EQ(r.speed.size(), traj.size());
    EXPECT_NEAR((traj.points().front() - p.targets.front()).norm(), 0.0, 1e-3);
    EXPECT_NEAR((traj.points().back() - p.targets.back()).norm(), 0.0, 1e-3);
    for (std::size_t j = 1; j + 1 < p.targets.size(); ++j) {
        EXPECT_NEAR((interpolate_at(traj, p.timestamps[j]) - p.targets[j]).norm(), 0.0, 0.05 * p.links[j].length() + 1e-3) << j;
    }
    for (double v : r.speed) EXPECT_GE(v, 0.0);
}

TEST(Render, SampledAtRate) {
    const auto sig = fs::plan_to_signature(timed_plan(2));
    const auto r = fs::render_full_signature(sig, 60.0);
    EXPECT_EQ(r.trajectory.sampling_rate().value_or(0.0), 60.0);
    EXPECT_NEAR(r.trajectory.time(1) - r.trajectory.time(0), 1.0 / 60.0, 1e-12);
}
