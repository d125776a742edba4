#pragma once

#include "airsig/duplication.hpp"
#include "airsig/io.hpp"
#include "airsig/morphology.hpp"
#include "airsig/surface.hpp"
#include "airsig/verification.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace airsig::dataset {

/// "mimic" preset: orientation spread between takes large enough that random
/// forgeries are not trivially rejected, and forgeries pushed to a high
/// deformation level so they stay separable from genuines.
inline constexpr double kMimicRotationScale = 0.2;
inline constexpr double kMimicForgeryLevel = 0.9;

/// Everything that shapes a generated database. Read from and written to the
/// line-oriented `key = value` format; unknown keys are rejected.
struct GenerationConfig {
    std::string name = "airsig";
    std::string preset = "default";  // default | mimic
    std::size_t users = 10;
    std::size_t genuine = 10;
    std::size_t forgeries = 10;
    double f_m = 60.0;

    plan::MorphologyConfig morphology;
    plan::SurfaceConfig surface = plan::SurfaceConfig::for_canvas(100.0);
    double gap_mean = 0.1;
    double gap_sd = 0.005;

    double m_genuine = ds::kGenuineLevel;
    double m_forgery = ds::kForgeryLevel;
    double rotation_scale = kPi / 100;
    double displacement_range = 0.02;
    double insert_remove_max_fraction = 0.05;
    bool affine = true;

    std::string gesture_mode = "points";  // points | letters
    std::size_t classes = 10;
    std::size_t samples = 5;

    /// Throws InputError on inconsistent values.
    void validate() const;
    io::KeyValues to_key_values() const;
    /// Applies the preset first, then every other key. Throws FormatError on
    /// unknown keys or malformed values.
    static GenerationConfig from_key_values(const io::KeyValues& kv);
    static GenerationConfig load(const std::filesystem::path& path);

    ds::DuplicationConfig duplication(ds::DuplicateKind kind, std::uint64_t seed) const;
};

enum class Mode { fs_ds, gesture };

/// Root file of a generated database: generation mode, master seed and the
/// full configuration snapshot.
struct DatabaseManifest {
    Mode mode = Mode::fs_ds;
    std::uint64_t seed = 0;
    GenerationConfig config;

    std::string format() const;
    static DatabaseManifest parse(std::string_view text);
};

inline constexpr const char* kManifestName = "manifest";

/// `<db>/<user>/{genuine,forgery}/<n>.sig` for user index u and specimen n.
std::filesystem::path specimen_path(const std::filesystem::path& db, std::size_t user, bool genuine, std::size_t n);
std::filesystem::path master_path(const std::filesystem::path& db, std::size_t user);

/// FS master per user (`master.params`), genuine specimens as DS duplicates
/// with m_genuine and skilled forgeries with m_forgery, plus the manifest.
/// Output depends only on (config, seed), not on `jobs`.
void synth_full(const GenerationConfig& cfg, std::uint64_t seed, const std::filesystem::path& out, unsigned jobs = 1);

/// One master plan per class (random points in a cube, or a 2–4 letter word
/// when gesture_mode = letters) and `samples` DS duplicates of it.
void gesture_db(const GenerationConfig& cfg, std::uint64_t seed, const std::filesystem::path& out, unsigned jobs = 1);

/// Rebuilds the database described by `<db>/manifest` into `out`.
void regenerate(const std::filesystem::path& db, const std::filesystem::path& out, unsigned jobs = 1);

struct KinematicsRow {
    std::string file;
    bool ok = false;
    std::string error;
    std::size_t salient = 0;
    std::size_t strokes = 0;
    double omega = 0.0;
    double path_length = 0.0;
    double duration = 0.0;
};

/// KS conversion of each input (timing, if any, is discarded). Writes
/// `<out>/<stem>.sig` per input and `<out>/kinematics.report`; failures are
/// recorded and the batch continues.
std::vector<KinematicsRow> synth_kinematics(const std::vector<std::filesystem::path>& inputs,
                                            const std::filesystem::path& out, double f_m, std::uint64_t seed,
                                            unsigned jobs = 1);

struct DuplicateRequest {
    std::filesystem::path input;  // .sig (estimated first) or .params
    std::size_t count = 10;
    ds::DuplicationConfig config;  // seed of duplicate i is config.seed + i
    double f_m = 60.0;             // used for .params inputs without a rate
    std::filesystem::path out;
};

/// Writes `<out>/<stem>_dup<i>.sig`; returns the written paths.
std::vector<std::filesystem::path> duplicate(const DuplicateRequest& request);

DatabaseManifest read_manifest(const std::filesystem::path& db);
verify::Database load_database(const std::filesystem::path& db);
/// Class samples of a database (genuine specimens of each user).
std::vector<std::vector<Trajectory3D>> load_classes(const std::filesystem::path& db);

/// Runs the verification protocol and writes `summary.txt` and two-column DET
/// point files into `out`. With duplicates_per_training > 0 the baseline is
/// run as well and both are reported side by side.
std::string run_evaluation(const std::filesystem::path& db, const verify::ExperimentProtocol& protocol,
                           const std::filesystem::path& out);
/// Nearest-template identification; writes `summary.txt` and `cmc.txt`.
std::string run_classification(const std::filesystem::path& db, const verify::ExperimentProtocol& protocol,
                               const std::filesystem::path& out);

}  // namespace airsig::dataset
