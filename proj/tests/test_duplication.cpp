#include "airsig/duplication.hpp"
#include "airsig/error.hpp"
#include "airsig/morphology.hpp"
#include "airsig/timing.hpp"
#include "airsig/verification.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace airsig;
using namespace airsig::ds;

namespace {

SigmaLogSignature master(std::uint64_t seed) {
    plan::MorphologyConfig cfg;
    const auto p = plan::lift_to_plan(plan::generate_morphology_2d(cfg, seed), plan::SurfaceConfig::for_canvas(100.0));
    return fs::plan_to_signature(plan::assign_timestamps(p, seed + 100));
}

plan::ActionPlan plan_with(std::size_t n) {
    std::vector<Vec3> t, m;
    for (std::size_t i = 0; i < n; ++i) t.emplace_back(10.0 * i, (i % 2) ? 8.0 : 0.0, 0.5 * i);
    for (std::size_t i = 0; i + 1 < n; ++i) m.push_back(0.5 * (t[i] + t[i + 1]) + Vec3(0, 0, 1.5));
    std::vector<double> ts;
    for (std::size_t i = 0; i < n; ++i) ts.push_back(0.1 * i);
    return plan::build_plan(t, m, ts);
}

double sd(const std::vector<double>& v) {
    double m = 0.0, s = 0.0;
    for (double x : v) m += x / v.size();
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (v.size() - 1));
}

}  // namespace

TEST(DuplicationConfig, Validation) {
    auto c = DuplicationConfig::for_kind(DuplicateKind::forgery, 1);
    EXPECT_EQ(c.m, kForgeryLevel);
    EXPECT_NO_THROW(c.validate());
    c.m = 1.0;
    EXPECT_THROW(c.validate(), DomainError);
    c.m = -0.1;
    EXPECT_THROW(c.validate(), DomainError);
}

TEST(Perturb, ZeroLevelIsIdentity) {
    const auto s = master(1);
    DuplicationConfig c;
    c.m = 0.0;
    const auto p = perturb_parameters(s, c);
    ASSERT_EQ(p.size(), s.size());
    for (std::size_t j = 0; j < s.size(); ++j) EXPECT_TRUE(p.strokes[j] == s.strokes[j]);
}

TEST(Perturb, RelativeSpreadMatchesLevel) {
    // μ multiplied by 1 + 0.01·m·g: relative sd 0.005 at m = 0.5
    const auto s = master(2);
    std::vector<double> rel;
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        DuplicationConfig c;
        c.m = 0.5;
        c.seed = seed;
        const auto p = perturb_parameters(s, c);
        // onsets 0.1 s apart move by ~1e-4 s, so the stroke order is kept
        for (std::size_t j = 0; j < s.size(); ++j) rel.push_back(p.strokes[j].mu / s.strokes[j].mu - 1.0);
    }
    EXPECT_NEAR(sd(rel), 0.005, 0.0005);
}

TEST(Perturb, Sigma2Floor) {
    auto s = master(3);
    for (auto& st : s.strokes) st.sigma2 = 1e-5;
    DuplicationConfig c;
    c.m = 0.9;
    for (const auto& st : perturb_parameters(s, c).strokes) EXPECT_GE(st.sigma2, 1e-4);
}

TEST(Edit, SmallPlansUnchanged) {
    DuplicationConfig c;
    c.m = 0.5;
    const auto p = plan_with(2);
    EXPECT_EQ(edit_target_points(p, c).targets.size(), 2u);
}

TEST(Edit, CountsWithinBounds) {
    for (std::size_t n : {3u, 40u}) {
        const auto p = plan_with(n);
        const int k = static_cast<int>(std::floor(0.05 * n));
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            for (auto kind : {DuplicateKind::genuine, DuplicateKind::forgery}) {
                auto c = DuplicationConfig::for_kind(kind, seed);
                const auto e = edit_target_points_mapped(p, c);
                const int delta = static_cast<int>(e.plan.targets.size()) - static_cast<int>(n);
                const int ins_max = kind == DuplicateKind::forgery ? k + 1 : k;
                EXPECT_GE(delta, -k);
                EXPECT_LE(delta, ins_max);
                EXPECT_EQ(e.source_link.size(), e.plan.link_count());
                EXPECT_EQ(e.plan.targets.front(), p.targets.front());
                EXPECT_EQ(e.plan.targets.back(), p.targets.back());
                EXPECT_NO_THROW(e.plan.validate());
                for (std::size_t i = 1; i < e.plan.timestamps.size(); ++i) EXPECT_LT(e.plan.timestamps[i - 1], e.plan.timestamps[i]);
                for (std::size_t j = 0; j < e.plan.link_count(); ++j) {
                    const int s = e.source_link[j];
                    if (s < 0) continue;
                    EXPECT_EQ(e.plan.targets[j], p.targets[s]);
                    EXPECT_EQ(e.plan.targets[j + 1], p.targets[s + 1]);
                }
            }
        }
    }
}

TEST(Edit, ForgeryAlwaysInsertsOnLargePlans) {
    const auto p = plan_with(40);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto e = edit_target_points_mapped(p, DuplicationConfig::for_kind(DuplicateKind::forgery, seed));
        EXPECT_TRUE(std::count(e.source_link.begin(), e.source_link.end(), -1) > 0);
    }
}

TEST(Sinusoid, BoundedRelativeChange) {
    const auto p = plan_with(12);
    for (double m : {0.1, 0.5, 0.9}) {
        const auto q = sinusoidal_distortion(p, m);
        for (std::size_t i = 0; i < p.targets.size(); ++i) {
            for (int a = 0; a < 3; ++a) EXPECT_LE(std::abs(q.targets[i][a] - p.targets[i][a]), m / 50.0 * std::abs(p.targets[i][a]) + 1e-12);
        }
    }
    const auto q0 = sinusoidal_distortion(p, 0.0);
    for (std::size_t i = 0; i < p.targets.size(); ++i) EXPECT_EQ(q0.targets[i], p.targets[i]);
}

TEST(Sinusoid, FlatAxisUntouched) {
    std::vector<Vec3> t{{0, 0, 5}, {10, 3, 5}, {20, 0, 5}};
    std::vector<Vec3> m{{5, 3, 5}, {15, 3, 5}};
    const auto q = sinusoidal_distortion(plan::build_plan(t, m, {0.0, 0.1, 0.2}), 0.8);
    for (const auto& v : q.targets) EXPECT_EQ(v.z(), 5.0);
}

TEST(Affine, RotationIsAnIsometry) {
    const auto p = plan_with(10);
    DuplicationConfig c;
    c.m = 0.3;
    c.displacement_range = 0.0;
    c.rotation_scale = 0.5;
    c.seed = 8;
    const auto q = affine_transform(p, c);
    for (std::size_t i = 0; i < p.targets.size(); ++i) {
        for (std::size_t k = i + 1; k < p.targets.size(); ++k) {
            EXPECT_NEAR((q.targets[i] - q.targets[k]).norm(), (p.targets[i] - p.targets[k]).norm(), 1e-9);
        }
    }
}

TEST(Duplicate, ZeroLevelWithoutAffineIsExact) {
    const auto s = master(6);
    DuplicationConfig c;
    c.m = 0.0;
    c.affine_enabled = false;
    const auto d = duplicate_signature(s, c, 60.0);
    const auto r = fs::render_full_signature(s, 60.0);
    EXPECT_TRUE(d.rendered.trajectory == r.trajectory);
}

TEST(Duplicate, DeterministicInSeed) {
    const auto s = master(7);
    const auto c = DuplicationConfig::for_kind(DuplicateKind::genuine, 42);
    EXPECT_TRUE(duplicate_signature(s, c, 60.0).rendered.trajectory == duplicate_signature(s, c, 60.0).rendered.trajectory);
    auto c2 = c;
    c2.seed = 43;
    EXPECT_FALSE(duplicate_signature(s, c, 60.0).rendered.trajectory == duplicate_signature(s, c2, 60.0).rendered.trajectory);
}

TEST(Duplicate, ResultIsValid) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = master(seed);
        const auto d = duplicate_signature(s, DuplicationConfig::for_kind(DuplicateKind::forgery, seed), 60.0);
        EXPECT_NO_THROW(d.signature.validate());
        for (std::size_t j = 0; j < d.signature.size(); ++j) EXPECT_NEAR(d.signature.strokes[j].D, d.signature.plan.links[j].length(), 1e-9);
    }
}

TEST(Duplicate, ForgeriesDeviateMoreThanGenuines) {
    double g = 0.0, f = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = master(seed);
        const auto ref = verify::make_specimen(fs::render_full_signature(s, 60.0).trajectory);
        auto cg = DuplicationConfig::for_kind(DuplicateKind::genuine, seed);
        auto cf = DuplicationConfig::for_kind(DuplicateKind::forgery, seed);
        cg.affine_enabled = cf.affine_enabled = false;
        g += verify::specimen_distance(ref, verify::make_specimen(duplicate_signature(s, cg, 60.0).rendered.trajectory), verify::Verifier::dtw);
        f += verify::specimen_distance(ref, verify::make_specimen(duplicate_signature(s, cf, 60.0).rendered.trajectory), verify::Verifier::dtw);
    }
    EXPECT_LT(g, f);
}

TEST(Duplicate, StrokeOnlySignatureRejected) {
    SigmaLogSignature s;
    s.strokes.resize(2);
    EXPECT_THROW(duplicate_signature(s, DuplicationConfig{}, 60.0), InputError);
}
