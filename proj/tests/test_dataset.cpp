#include "airsig/dataset.hpp"
#include "airsig/error.hpp"
#include "airsig/full_synthesis.hpp"
#include "airsig/io.hpp"
#include "airsig/morphology.hpp"
#include "airsig/timing.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

using namespace airsig;
namespace fsys = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fsys::temp_directory_path() /
                ("airsig_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name() + "_" + std::to_string(counter++));
        fsys::remove_all(path_);
        fsys::create_directories(path_);
    }
    ~TempDir() { fsys::remove_all(path_); }
    const fsys::path& path() const { return path_; }

private:
    fsys::path path_;
};

SigmaLogSignature master(std::uint64_t seed) {
    plan::MorphologyConfig cfg;
    const auto p = plan::lift_to_plan(plan::generate_morphology_2d(cfg, seed), plan::SurfaceConfig::for_canvas(100.0));
    return fs::plan_to_signature(plan::assign_timestamps(p, seed + 100));
}

std::vector<std::string> tree(const fsys::path& root) {
    std::vector<std::string> out;
    for (const auto& e : fsys::recursive_directory_iterator(root)) {
        if (e.is_regular_file()) out.push_back(fsys::relative(e.path(), root).string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool same_tree(const fsys::path& a, const fsys::path& b) {
    const auto ta = tree(a), tb = tree(b);
    if (ta != tb) return false;
    for (const auto& f : ta) {
        if (io::read_file(a / f) != io::read_file(b / f)) return false;
    }
    return true;
}

dataset::GenerationConfig small_config() {
    dataset::GenerationConfig c;
    c.users = 3;
    c.genuine = 6;
    c.forgeries = 2;
    return c;
}

}  // namespace

TEST(Numbers, FormatAndParse) {
    EXPECT_EQ(io::format_number(0.1, 9), "0.1");
    EXPECT_EQ(io::parse_number(io::format_exact(0.1 + 0.2)), 0.1 + 0.2);
    EXPECT_THROW(io::parse_number("1.0x"), FormatError);
    EXPECT_THROW(io::parse_number(""), FormatError);
    EXPECT_EQ(io::parse_unsigned("42"), 42u);
    EXPECT_THROW(io::parse_unsigned("-1"), FormatError);
}

TEST(KeyValues, RoundTripAndErrors) {
    io::KeyValues kv;
    kv.set("a", "1");
    kv.set("name", "two words");
    EXPECT_EQ(io::KeyValues::parse(kv.format()), kv);
    EXPECT_EQ(io::KeyValues::parse("# c\n\n a = 1 \n").at("a"), "1");
    EXPECT_THROW(io::KeyValues::parse("a = 1\na = 2\n"), FormatError);
    EXPECT_THROW(io::KeyValues::parse("novalue\n"), FormatError);
    EXPECT_THROW(kv.at("missing"), FormatError);
}

TEST(SignatureFile, RoundTripIsExact) {
    const auto r = fs::render_full_signature(master(1), 60.0).trajectory;
    io::KeyValues h;
    h.set("user", "3");
    const auto text = io::format_signature(r, h);
    const auto back = io::parse_signature(text);
    EXPECT_EQ(back.header.at("user"), "3");
    EXPECT_EQ(back.trajectory.sampling_rate().value_or(0.0), 60.0);
    EXPECT_EQ(io::format_signature(back.trajectory, back.header), text);
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_NEAR((back.trajectory.point(i) - r.point(i)).norm(), 0.0, 1e-6);
}

TEST(SignatureFile, BarePath) {
    const Trajectory3D bare(std::vector<Vec3>{{0, 0, 0}, {1, 2, 3}, {4, 5, 6}});
    const auto back = io::parse_signature(io::format_signature(bare));
    EXPECT_FALSE(back.trajectory.timed());
    EXPECT_TRUE(back.trajectory == bare);
}

TEST(SignatureFile, MalformedRejected) {
    EXPECT_THROW(io::parse_signature("not a signature\n"), FormatError);
    EXPECT_THROW(io::parse_signature("#airsig v1\n#columns t x y z\n0 1 2\n"), FormatError);
    EXPECT_THROW(io::parse_signature("#airsig v1\n#columns t x y z\n0 1 2 3\n0 1 2 3\n"), Error);
}

TEST(ParameterFile, RoundTripAndRerender) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = master(seed);
        const auto text = io::format_parameters(s);
        const auto back = io::parse_parameters(text);
        EXPECT_EQ(io::format_parameters(back), text);
        ASSERT_EQ(back.size(), s.size());
        const auto a = fs::render_full_signature(s, 60.0).trajectory;
        const auto b = fs::render_full_signature(back, 60.0).trajectory;
        ASSERT_EQ(a.size(), b.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a.point(i) - b.point(i)).norm());
        EXPECT_LT(worst, 1e-9) << seed;
    }
}

TEST(FileFormats, FuzzedRoundTrip) {
    // 500 generated files of every kind parse back to the same text
    Rng rng(77);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int k = 0; k < 500; ++k) {
        const auto seed = static_cast<std::uint64_t>(k);
        switch (pick(rng)) {
            case 0: {
                const auto t = fs::render_full_signature(master(seed), 30.0 + k % 5 * 30.0).trajectory;
                const auto text = io::format_signature(t);
                EXPECT_EQ(io::format_signature(io::parse_signature(text).trajectory), text);
                break;
            }
            case 1: {
                const auto text = io::format_parameters(master(seed));
                EXPECT_EQ(io::format_parameters(io::parse_parameters(text)), text);
                break;
            }
            default: {
                dataset::DatabaseManifest m;
                m.seed = seed * 7919;
                m.config.users = 1 + k % 7;
                m.config.gap_mean = 0.05 + 0.001 * k;
                m.config.preset = k % 2 ? "mimic" : "default";
                const auto text = m.format();
                const auto back = dataset::DatabaseManifest::parse(text);
                EXPECT_EQ(back.format(), text);
                EXPECT_EQ(back.seed, m.seed);
                EXPECT_EQ(back.config.gap_mean, m.config.gap_mean);
            }
        }
    }
}

TEST(Config, PresetAndOverrides) {
    const auto c = dataset::GenerationConfig::from_key_values(io::KeyValues::parse("preset = mimic\nusers = 4\n"));
    EXPECT_EQ(c.rotation_scale, dataset::kMimicRotationScale);
    EXPECT_EQ(c.m_forgery, dataset::kMimicForgeryLevel);
    EXPECT_EQ(c.users, 4u);
    EXPECT_THROW(dataset::GenerationConfig::from_key_values(io::KeyValues::parse("bogus = 1\n")), FormatError);
    EXPECT_THROW(dataset::GenerationConfig::from_key_values(io::KeyValues::parse("users = 0\n")), Error);
    const auto back = dataset::GenerationConfig::from_key_values(c.to_key_values());
    EXPECT_EQ(back.to_key_values(), c.to_key_values());
}

TEST(SynthFull, CountsHeadersAndDeterminism) {
    TempDir a, b;
    auto cfg = small_config();
    dataset::synth_full(cfg, 5, a.path() / "db");
    const auto files = tree(a.path() / "db");
    EXPECT_EQ(files.size(), cfg.users * (cfg.genuine + cfg.forgeries) + cfg.users + 1);
    for (std::size_t u = 0; u < cfg.users; ++u) {
        EXPECT_TRUE(fsys::exists(dataset::master_path(a.path() / "db", u)));
        const auto s = io::read_signature(dataset::specimen_path(a.path() / "db", u, true, 0));
        EXPECT_EQ(s.trajectory.sampling_rate().value_or(0.0), 60.0);
    }
    dataset::synth_full(cfg, 5, b.path() / "db", 3);
    EXPECT_TRUE(same_tree(a.path() / "db", b.path() / "db"));
    const auto db = dataset::load_database(a.path() / "db");
    EXPECT_EQ(db.users.size(), cfg.users);
    EXPECT_EQ(db.users[0].forgery.size(), cfg.forgeries);
}

TEST(SynthFull, DifferentSeedsDiffer) {
    TempDir a;
    dataset::synth_full(small_config(), 1, a.path() / "x");
    dataset::synth_full(small_config(), 2, a.path() / "y");
    EXPECT_FALSE(same_tree(a.path() / "x", a.path() / "y"));
}

TEST(Regenerate, ByteIdentical) {
    TempDir a;
    dataset::synth_full(small_config(), 9, a.path() / "db");
    dataset::regenerate(a.path() / "db", a.path() / "again", 4);
    EXPECT_TRUE(same_tree(a.path() / "db", a.path() / "again"));
}

TEST(GestureDb, CountsAndLetters) {
    TempDir a;
    auto cfg = small_config();
    cfg.classes = 4;
    cfg.samples = 3;
    cfg.gesture_mode = "letters";
    dataset::gesture_db(cfg, 3, a.path() / "g");
    const auto classes = dataset::load_classes(a.path() / "g");
    ASSERT_EQ(classes.size(), 4u);
    for (const auto& c : classes) EXPECT_EQ(c.size(), 3u);
    dataset::regenerate(a.path() / "g", a.path() / "g2", 2);
    EXPECT_TRUE(same_tree(a.path() / "g", a.path() / "g2"));
}

TEST(Kinematics, ReportAndFailures) {
    TempDir a;
    io::write_signature(a.path() / "line.sig", Trajectory3D(std::vector<Vec3>{{0, 0, 0}, {80, 0, 0}}));
    io::write_file_atomic(a.path() / "broken.sig", "garbage\n");
    const auto rows = dataset::synth_kinematics({a.path() / "line.sig", a.path() / "broken.sig"}, a.path() / "out", 60.0, 1);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].ok);
    EXPECT_EQ(rows[0].salient, 2u);
    EXPECT_EQ(rows[0].strokes, 1u);
    EXPECT_FALSE(rows[1].ok);
    EXPECT_TRUE(fsys::exists(a.path() / "out" / "line.sig"));
    EXPECT_TRUE(fsys::exists(a.path() / "out" / "kinematics.report"));
    const auto first = io::read_file(a.path() / "out" / "line.sig");
    dataset::synth_kinematics({a.path() / "line.sig"}, a.path() / "out", 60.0, 1);
    EXPECT_EQ(io::read_file(a.path() / "out" / "line.sig"), first);
}

TEST(Duplicate, CountAndIdentity) {
    TempDir a;
    const auto s = master(4);
    io::write_parameters(a.path() / "m.params", s);
    dataset::DuplicateRequest req;
    req.input = a.path() / "m.params";
    req.count = 10;
    req.config.m = 0.0;
    req.config.affine_enabled = false;
    req.out = a.path() / "dups";
    const auto written = dataset::duplicate(req);
    ASSERT_EQ(written.size(), 10u);
    const auto ref = io::format_signature(fs::render_full_signature(io::read_parameters(a.path() / "m.params"), 60.0).trajectory);
    for (const auto& p : written) {
        const auto d = io::read_signature(p);
        EXPECT_EQ(io::format_signature(d.trajectory), ref);
        EXPECT_TRUE(d.header.contains("source"));
    }
}

TEST(Duplicate, FromEstimatedSignature) {
    TempDir a;
    io::write_signature(a.path() / "s.sig", fs::render_full_signature(master(2), 100.0).trajectory);
    dataset::DuplicateRequest req;
    req.input = a.path() / "s.sig";
    req.count = 3;
    req.out = a.path() / "dups";
    EXPECT_EQ(dataset::duplicate(req).size(), 3u);
}

TEST(Evaluation, WritesReports) {
    TempDir a;
    dataset::synth_full(small_config(), 2, a.path() / "db");
    verify::ExperimentProtocol p;
    p.repetitions = 2;
    const auto summary = dataset::run_evaluation(a.path() / "db", p, a.path() / "eval");
    EXPECT_FALSE(summary.empty());
    EXPECT_TRUE(fsys::exists(a.path() / "eval" / "summary.txt"));
    EXPECT_TRUE(fsys::exists(a.path() / "eval" / "det_random.txt"));
    EXPECT_TRUE(fsys::exists(a.path() / "eval" / "det_skilled.txt"));
    const auto cmc = dataset::run_classification(a.path() / "db", p, a.path() / "cmc");
    EXPECT_TRUE(fsys::exists(a.path() / "cmc" / "cmc.txt"));
}

TEST(Evaluation, MissingDatabase) {
    EXPECT_THROW(dataset::read_manifest("/nonexistent/airsig"), Error);
}
