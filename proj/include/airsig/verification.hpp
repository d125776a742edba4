#pragma once

#include "airsig/duplication.hpp"
#include "airsig/trajectory.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace airsig::verify {

/// Per-sample (x, y, z, ẋ, ẏ, ż, ẍ, ÿ, z̈), z-scored per dimension; one column per sample.
struct FeatureSequence {
    Eigen::Matrix<double, 9, Eigen::Dynamic> data;

    std::size_t size() const { return static_cast<std::size_t>(data.cols()); }
};

/// Central-difference derivatives (one-sided at the ends), in time units when
/// the trajectory is timed and per sample otherwise. Dimensions that are
/// constant up to rounding are set to zero. Throws InputError below 5 samples.
FeatureSequence extract_features(const Trajectory3D& traj);

/// DTW with Euclidean local cost and diagonal/up/left steps, divided by the
/// length of the optimal path. Ties between equal-cost paths go to the shorter
/// one, so the value does not depend on argument order.
double dtw_distance(const FeatureSequence& a, const FeatureSequence& b);

inline constexpr int kDefaultBins = 16;

/// Concatenated normalized histograms of speed, the three velocity components
/// (relative to mean speed), turning angle, azimuth and polar angle.
struct HistogramFeature {
    std::vector<double> values;
    int bins = kDefaultBins;
    int histograms = 0;
};

HistogramFeature extract_histograms(const Trajectory3D& traj, int bins = kDefaultBins);

/// Σ|a_i − b_i|. Throws InputError on a dimension mismatch.
double man_distance(const HistogramFeature& a, const HistogramFeature& b);

enum class Verifier { dtw, man };

/// Features of one specimen for either verifier.
struct Specimen {
    FeatureSequence sequence;
    HistogramFeature histogram;
};

Specimen make_specimen(const Trajectory3D& traj);

double specimen_distance(const Specimen& a, const Specimen& b, Verifier verifier);

/// Min distance over the references (DTW) or mean distance (MAN); lower is
/// more genuine. Throws InputError without references.
double score_probe(const std::vector<const Specimen*>& references, const Specimen& probe, Verifier verifier);

// ---- error rates ---------------------------------------------------------

struct DetPoint {
    double far;
    double frr;
};

/// Accept when score ≤ threshold. The sweep starts below every score (FAR 0,
/// FRR 1) and steps through each distinct score.
std::vector<DetPoint> det_curve(const std::vector<double>& genuine, const std::vector<double>& impostor);

/// FAR = FRR crossing, linearly interpolated between the straddling samples. In [0, 1].
double equal_error_rate(const std::vector<DetPoint>& det);

/// Area under the ROC (FAR, 1 − FRR), trapezoid rule.
double area_under_curve(const std::vector<DetPoint>& det);

/// FRR at each FAR of `grid`, interpolated along the curve.
std::vector<double> frr_at(const std::vector<DetPoint>& det, const std::vector<double>& grid);

// ---- experiments ---------------------------------------------------------

struct UserSpecimens {
    std::vector<Trajectory3D> genuine;
    std::vector<Trajectory3D> forgery;
};

struct Database {
    std::vector<UserSpecimens> users;
    double f_m = 60.0;
};

enum class TrialLabel { genuine, random_forgery, skilled_forgery };

struct Trial {
    std::size_t user;   // claimed identity
    std::size_t probe;  // specimen id (see evaluate)
    TrialLabel label;
    double score;
};

struct ExperimentProtocol {
    std::size_t train_genuine_count = 5;
    std::size_t repetitions = 10;
    std::size_t duplicates_per_training = 0;  // DS duplicates per training genuine
    double duplicate_m = ds::kGenuineLevel;
    Verifier verifier = Verifier::dtw;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
};

struct ErrorSummary {
    double eer = 0.0;  // fraction
    double auc = 0.0;
    std::vector<DetPoint> det;
};

struct Repetition {
    std::vector<std::vector<std::size_t>> training;  // per user, indices into its genuines
    std::vector<Trial> trials;
    ErrorSummary random;
    ErrorSummary skilled;
};

struct VerificationReport {
    std::vector<Repetition> repetitions;
    double random_eer = 0.0;  // mean over repetitions, fraction
    double skilled_eer = 0.0;
    double random_auc = 0.0;
    double skilled_auc = 0.0;
    std::vector<double> far_grid;
    std::vector<double> random_frr;  // mean FRR on far_grid
    std::vector<double> skilled_frr;
};

/// Each repetition trains every user with train_genuine_count random genuine
/// specimens (plus DS duplicates of them when requested) and scores: the
/// remaining genuines, all of the user's forgeries, and one random genuine of
/// every other user. Specimen ids in trials number the genuines of all users
/// first, then the forgeries, user by user. Throws InputError when a user has
/// too few genuines.
VerificationReport evaluate(const Database& db, const ExperimentProtocol& protocol);

struct CmcReport {
    std::vector<double> rank_accuracy;  // rank_accuracy[k-1] = rank-k accuracy, mean over repetitions
};

/// Nearest-template DTW identification: per repetition, train_genuine_count
/// (capped at samples − 1) random templates per class, the rest are probes.
/// Throws InputError with fewer than 2 classes or 2 samples in a class.
CmcReport classify_cmc(const std::vector<std::vector<Trajectory3D>>& classes, const ExperimentProtocol& protocol);

}  // namespace airsig::verify
