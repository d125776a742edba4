// airsig: synthesis, duplication and verification of 3D on-air signatures.

#include "airsig/dataset.hpp"
#include "airsig/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using namespace airsig;
namespace fsys = std::filesystem;

dataset::GenerationConfig load_config(const std::string& path, std::optional<double> fm) {
    auto cfg = path.empty() ? dataset::GenerationConfig{} : dataset::GenerationConfig::load(path);
    if (fm) {
        cfg.f_m = *fm;
        cfg.validate();
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sigma-Lognormal synthesis and verification of 3D on-air signatures"};
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    std::optional<double> fm;
    unsigned jobs = 1;
    const auto common = [&](CLI::App* cmd, bool with_config) {
        if (with_config) cmd->add_option("--config", config, "key = value configuration file")->check(CLI::ExistingFile);
        cmd->add_option("--out", out, "output directory")->required();
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    };

    auto* full = app.add_subcommand("synth-full", "FS+DS database: masters, genuine duplicates, skilled forgeries");
    common(full, true);
    full->add_option("--fm", fm, "sampling rate in Hz (overrides the config)");

    auto* gesture = app.add_subcommand("gesture-db", "class-labelled gesture or air-writing database");
    common(gesture, true);
    gesture->add_option("--fm", fm, "sampling rate in Hz (overrides the config)");

    std::string db;
    auto* regen = app.add_subcommand("regenerate", "rebuild a database from its manifest");
    regen->add_option("--db", db, "database directory")->required()->check(CLI::ExistingDirectory);
    regen->add_option("--out", out, "output directory")->required();
    regen->add_option("--jobs", jobs, "worker threads (0 = all cores)");

    std::vector<std::string> inputs;
    double ks_fm = 60.0;
    auto* kin = app.add_subcommand("synth-kinematics", "velocity synthesis for bare trajectories");
    kin->add_option("inputs", inputs, "trajectory files")->required()->check(CLI::ExistingFile);
    common(kin, false);
    kin->add_option("--fm", ks_fm, "output sampling rate in Hz");

    std::string input;
    std::size_t count = 10;
    std::string kind = "genuine";
    std::optional<double> level;
    bool no_affine = false;
    double dup_fm = 60.0;
    auto* dup = app.add_subcommand("duplicate", "DS duplicates of a signature or parameter file");
    dup->add_option("--input", input, ".sig or .params file")->required()->check(CLI::ExistingFile);
    dup->add_option("--count", count, "number of duplicates");
    dup->add_option("--kind", kind, "genuine or forgery")->check(CLI::IsMember({"genuine", "forgery"}));
    dup->add_option("--m", level, "deformation level in [0, 1) (default by kind)");
    dup->add_flag("--no-affine", no_affine, "skip the random rotation and displacement");
    dup->add_option("--fm", dup_fm, "sampling rate for .params inputs");
    common(dup, false);

    std::string verifier = "dtw";
    verify::ExperimentProtocol protocol;
    bool classify = false;
    auto* eval = app.add_subcommand("evaluate", "verification (EER/DET) or identification (CMC) experiment");
    eval->add_option("--db", db, "database directory")->required()->check(CLI::ExistingDirectory);
    eval->add_option("--verifier", verifier, "dtw or man")->check(CLI::IsMember({"dtw", "man"}));
    eval->add_option("--train", protocol.train_genuine_count, "training genuines per user");
    eval->add_option("--reps", protocol.repetitions, "protocol repetitions");
    eval->add_option("--duplicates", protocol.duplicates_per_training, "DS duplicates per training sample (0 = off)");
    eval->add_option("--duplicate-m", protocol.duplicate_m, "deformation level of training duplicates");
    eval->add_flag("--classify", classify, "nearest-template identification instead of verification");
    common(eval, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*full) {
            dataset::synth_full(load_config(config, fm), seed, out, jobs);
        } else if (*gesture) {
            dataset::gesture_db(load_config(config, fm), seed, out, jobs);
        } else if (*regen) {
            dataset::regenerate(db, out, jobs);
        } else if (*kin) {
            std::vector<fsys::path> paths(inputs.begin(), inputs.end());
            const auto rows = dataset::synth_kinematics(paths, out, ks_fm, seed, jobs);
            int failed = 0;
            for (const auto& r : rows) {
                if (r.ok) continue;
                std::cerr << "airsig: " << r.file << ": " << r.error << "\n";
                ++failed;
            }
            std::cout << rows.size() - static_cast<std::size_t>(failed) << " of " << rows.size() << " converted\n";
            if (failed > 0) return 1;
        } else if (*dup) {
            dataset::DuplicateRequest req;
            req.input = input;
            req.count = count;
            const auto k = kind == "genuine" ? ds::DuplicateKind::genuine : ds::DuplicateKind::forgery;
            req.config = ds::DuplicationConfig::for_kind(k, seed);
            if (level) req.config.m = *level;
            req.config.affine_enabled = !no_affine;
            req.f_m = dup_fm;
            req.out = out;
            std::cout << dataset::duplicate(req).size() << " duplicates written\n";
        } else if (*eval) {
            protocol.verifier = verifier == "dtw" ? verify::Verifier::dtw : verify::Verifier::man;
            protocol.seed = seed;
            protocol.jobs = jobs;
            std::cout << (classify ? dataset::run_classification(db, protocol, out) : dataset::run_evaluation(db, protocol, out));
        }
    } catch (const std::exception& e) {
        std::cerr << "airsig: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
