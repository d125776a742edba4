#include "airsig/verification.hpp"

#include "airsig/error.hpp"
#include "airsig/estimate.hpp"
#include "airsig/parallel.hpp"
#include "airsig/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace airsig::verify {

namespace {

using Block = Eigen::Matrix<double, 3, Eigen::Dynamic>;

// Central differences against `t` (one-sided at the ends).
Block derivative(const Block& x, const std::vector<double>& t) {
    const Eigen::Index n = x.cols();
    Block d(3, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index lo = i == 0 ? 0 : i - 1;
        const Eigen::Index hi = i + 1 == n ? i : i + 1;
        d.col(i) = (x.col(hi) - x.col(lo)) / (t[static_cast<std::size_t>(hi)] - t[static_cast<std::size_t>(lo)]);
    }
    return d;
}

std::vector<double> time_axis(const Trajectory3D& traj) {
    if (traj.timed()) return {traj.times().begin(), traj.times().end()};
    std::vector<double> t(traj.size());
    std::iota(t.begin(), t.end(), 0.0);
    return t;
}

Block positions(const Trajectory3D& traj) {
    Block x(3, static_cast<Eigen::Index>(traj.size()));
    for (std::size_t i = 0; i < traj.size(); ++i) x.col(static_cast<Eigen::Index>(i)) = traj.point(i);
    return x;
}

void require_samples(const Trajectory3D& traj, const char* who) {
    if (traj.size() < 5) throw InputError(std::string(who) + ": need at least 5 samples");
}

}  // namespace

FeatureSequence extract_features(const Trajectory3D& traj) {
    require_samples(traj, "extract_features");
    const auto t = time_axis(traj);
    const double duration = t.back() - t.front();
    Block blocks[3];
    blocks[0] = positions(traj);
    blocks[1] = derivative(blocks[0], t);
    blocks[2] = derivative(blocks[1], t);

    FeatureSequence f;
    f.data.resize(9, blocks[0].cols());
    double scale = 0.0;
    for (int k = 0; k < 3; ++k) {
        // A dimension counts as constant when its spread is rounding-level next to
        // the magnitude of its own order or of the order below.
        scale = std::max(blocks[k].cwiseAbs().maxCoeff(), k == 0 ? 0.0 : scale / duration);
        for (int a = 0; a < 3; ++a) {
            const auto row = blocks[k].row(a);
            const double mean = row.mean();
            const double sd = std::sqrt((row.array() - mean).square().mean());
            auto out = f.data.row(3 * k + a);
            if (!(sd > 1e-9 * scale)) {
                out.setZero();
            } else {
                out = (row.array() - mean) / sd;
            }
        }
    }
    return f;
}

double dtw_distance(const FeatureSequence& a, const FeatureSequence& b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0 || m == 0) throw InputError("dtw_distance: empty sequence");
    constexpr double inf = std::numeric_limits<double>::infinity();
    // Rolling rows of (accumulated cost, path length); the lexicographic minimum
    // makes the recursion symmetric in its arguments.
    std::vector<double> cost_prev(m + 1, inf), cost_cur(m + 1, inf);
    std::vector<std::size_t> len_prev(m + 1, 0), len_cur(m + 1, 0);
    cost_prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        cost_cur[0] = inf;
        const auto ai = a.data.col(static_cast<Eigen::Index>(i - 1));
        for (std::size_t j = 1; j <= m; ++j) {
            double best = cost_prev[j - 1];
            std::size_t len = len_prev[j - 1];
            const auto consider = [&](double c, std::size_t l) {
                if (c < best || (c == best && l < len)) {
                    best = c;
                    len = l;
                }
            };
            consider(cost_prev[j], len_prev[j]);
            consider(cost_cur[j - 1], len_cur[j - 1]);
            cost_cur[j] = best + (ai - b.data.col(static_cast<Eigen::Index>(j - 1))).norm();
            len_cur[j] = len + 1;
        }
        std::swap(cost_prev, cost_cur);
        std::swap(len_prev, len_cur);
    }
    return cost_prev[m] / static_cast<double>(len_prev[m]);
}

HistogramFeature extract_histograms(const Trajectory3D& traj, int bins) {
    require_samples(traj, "extract_histograms");
    if (bins < 1) throw DomainError("extract_histograms: bins must be positive");
    const auto t = time_axis(traj);
    const Block v = derivative(positions(traj), t);
    const Eigen::Index n = v.cols();
    const Eigen::VectorXd speed = v.colwise().norm().transpose();
    const double mean_speed = speed.mean();
    const double ref = mean_speed > 0.0 ? mean_speed : 1.0;

    HistogramFeature h;
    h.bins = bins;
    h.histograms = 7;
    h.values.assign(static_cast<std::size_t>(h.histograms * bins), 0.0);
    const auto add = [&](int which, double x, double lo, double hi) {
        const int b = std::clamp(static_cast<int>(std::floor((x - lo) / (hi - lo) * bins)), 0, bins - 1);
        h.values[static_cast<std::size_t>(which * bins + b)] += 1.0;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        add(0, speed[i] / ref, 0.0, 3.0);
        for (int a = 0; a < 3; ++a) add(1 + a, v(a, i) / ref, -2.0, 2.0);
        if (speed[i] <= 0.0) continue;
        const Vec3 dir = v.col(i) / speed[i];
        add(5, std::atan2(dir.y(), dir.x()), -kPi, kPi);
        add(6, std::acos(std::clamp(dir.z(), -1.0, 1.0)), 0.0, kPi);
        if (i + 1 < n && speed[i + 1] > 0.0) {
            const Vec3 next = v.col(i + 1) / speed[i + 1];
            add(4, std::acos(std::clamp(dir.dot(next), -1.0, 1.0)), 0.0, kPi);
        }
    }
    for (int k = 0; k < h.histograms; ++k) {
        const auto first = h.values.begin() + k * bins;
        const double total = std::accumulate(first, first + bins, 0.0);
        if (total > 0.0) {
            std::for_each(first, first + bins, [&](double& x) { x /= total; });
        } else {
            std::fill(first, first + bins, 1.0 / bins);
        }
    }
    return h;
}

double man_distance(const HistogramFeature& a, const HistogramFeature& b) {
    if (a.values.size() != b.values.size()) throw InputError("man_distance: dimension mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) d += std::abs(a.values[i] - b.values[i]);
    return d;
}

Specimen make_specimen(const Trajectory3D& traj) { return {extract_features(traj), extract_histograms(traj)}; }

double specimen_distance(const Specimen& a, const Specimen& b, Verifier verifier) {
    return verifier == Verifier::dtw ? dtw_distance(a.sequence, b.sequence) : man_distance(a.histogram, b.histogram);
}

namespace {

double fuse(const std::vector<double>& distances, Verifier verifier) {
    if (distances.empty()) throw InputError("score_probe: no references");
    if (verifier == Verifier::dtw) return *std::min_element(distances.begin(), distances.end());
    return std::accumulate(distances.begin(), distances.end(), 0.0) / static_cast<double>(distances.size());
}

}  // namespace

double score_probe(const std::vector<const Specimen*>& references, const Specimen& probe, Verifier verifier) {
    std::vector<double> d;
    for (const auto* r : references) d.push_back(specimen_distance(*r, probe, verifier));
    return fuse(d, verifier);
}

std::vector<DetPoint> det_curve(const std::vector<double>& genuine, const std::vector<double>& impostor) {
    if (genuine.empty() || impostor.empty()) throw InputError("det_curve: both score sets must be nonempty");
    std::vector<double> g = genuine;
    std::vector<double> im = impostor;
    std::sort(g.begin(), g.end());
    std::sort(im.begin(), im.end());
    std::vector<double> thresholds = g;
    thresholds.insert(thresholds.end(), im.begin(), im.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<DetPoint> det{{0.0, 1.0}};
    const auto ng = static_cast<double>(g.size());
    const auto ni = static_cast<double>(im.size());
    for (double th : thresholds) {
        const auto accepted_g = std::upper_bound(g.begin(), g.end(), th) - g.begin();
        const auto accepted_i = std::upper_bound(im.begin(), im.end(), th) - im.begin();
        det.push_back({static_cast<double>(accepted_i) / ni, 1.0 - static_cast<double>(accepted_g) / ng});
    }
    return det;
}

double equal_error_rate(const std::vector<DetPoint>& det) {
    if (det.empty()) throw InputError("equal_error_rate: empty curve");
    for (std::size_t k = 0; k < det.size(); ++k) {
        const double d1 = det[k].far - det[k].frr;
        if (d1 < 0.0) continue;
        if (k == 0 || d1 == 0.0) return 0.5 * (det[k].far + det[k].frr);
        const double d0 = det[k - 1].far - det[k - 1].frr;
        const double a = -d0 / (d1 - d0);
        const double far = det[k - 1].far + a * (det[k].far - det[k - 1].far);
        const double frr = det[k - 1].frr + a * (det[k].frr - det[k - 1].frr);
        return 0.5 * (far + frr);
    }
    return 0.5 * (det.back().far + det.back().frr);
}

double area_under_curve(const std::vector<DetPoint>& det) {
    double area = 0.0;
    for (std::size_t k = 1; k < det.size(); ++k) {
        const double tpr0 = 1.0 - det[k - 1].frr;
        const double tpr1 = 1.0 - det[k].frr;
        area += 0.5 * (tpr0 + tpr1) * (det[k].far - det[k - 1].far);
    }
    // The sweep ends with everything accepted: (1, 1) on the ROC.
    if (!det.empty()) area += (1.0 - det.back().far) * 0.5 * (2.0 - det.back().frr);
    return area;
}

std::vector<double> frr_at(const std::vector<DetPoint>& det, const std::vector<double>& grid) {
    std::vector<double> out;
    for (double far : grid) {
        // Lowest FRR reached at or below this FAR, interpolating across FAR jumps.
        double frr = 1.0;
        for (std::size_t k = 0; k < det.size(); ++k) {
            if (det[k].far <= far) {
                frr = det[k].frr;
                continue;
            }
            if (k > 0 && det[k].far > det[k - 1].far) {
                const double a = (far - det[k - 1].far) / (det[k].far - det[k - 1].far);
                frr = det[k - 1].frr + a * (det[k].frr - det[k - 1].frr);
            }
            break;
        }
        out.push_back(frr);
    }
    return out;
}

namespace {

ErrorSummary summarize(const std::vector<double>& genuine, const std::vector<double>& impostor) {
    ErrorSummary s;
    s.det = det_curve(genuine, impostor);
    s.eer = equal_error_rate(s.det);
    s.auc = area_under_curve(s.det);
    return s;
}

std::vector<double> default_far_grid() {
    std::vector<double> grid;
    for (int k = 0; k <= 100; ++k) grid.push_back(k / 100.0);
    return grid;
}

// Memoized pairwise distances between specimen ids.
class DistanceCache {
public:
    DistanceCache(Verifier verifier, unsigned jobs) : verifier_(verifier), jobs_(jobs) {}

    void fill(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
              const std::vector<const Specimen*>& specimens) {
        std::set<std::pair<std::size_t, std::size_t>> unique;
        for (auto p : pairs) {
            if (!cache_.contains(p)) unique.insert(p);
        }
        const std::vector<std::pair<std::size_t, std::size_t>> missing(unique.begin(), unique.end());
        std::vector<double> values(missing.size());
        parallel_for(missing.size(), jobs_, [&](std::size_t i) {
            values[i] = specimen_distance(*specimens[missing[i].first], *specimens[missing[i].second], verifier_);
        });
        for (std::size_t i = 0; i < missing.size(); ++i) cache_[missing[i]] = values[i];
    }

    double at(std::size_t a, std::size_t b) const { return cache_.at({a, b}); }

private:
    Verifier verifier_;
    unsigned jobs_;
    std::map<std::pair<std::size_t, std::size_t>, double> cache_;
};

}  // namespace

VerificationReport evaluate(const Database& db, const ExperimentProtocol& protocol) {
    const std::size_t users = db.users.size();
    if (users < 2) throw InputError("evaluate: need at least 2 users");
    if (protocol.train_genuine_count == 0 || protocol.repetitions == 0) {
        throw InputError("evaluate: train_genuine_count and repetitions must be positive");
    }
    std::vector<std::size_t> genuine_base(users), forgery_base(users);
    std::size_t total = 0;
    for (std::size_t u = 0; u < users; ++u) {
        if (db.users[u].genuine.size() <= protocol.train_genuine_count) {
            throw InputError("evaluate: user " + std::to_string(u) + " has too few genuine specimens");
        }
        genuine_base[u] = total;
        total += db.users[u].genuine.size();
    }
    for (std::size_t u = 0; u < users; ++u) {
        forgery_base[u] = total;
        total += db.users[u].forgery.size();
    }
    std::vector<const Trajectory3D*> trajectories(total);
    for (std::size_t u = 0; u < users; ++u) {
        for (std::size_t i = 0; i < db.users[u].genuine.size(); ++i) trajectories[genuine_base[u] + i] = &db.users[u].genuine[i];
        for (std::size_t i = 0; i < db.users[u].forgery.size(); ++i) trajectories[forgery_base[u] + i] = &db.users[u].forgery[i];
    }
    std::vector<Specimen> specimens(total);
    parallel_for(total, protocol.jobs, [&](std::size_t i) { specimens[i] = make_specimen(*trajectories[i]); });

    // Duplicate ids follow the real specimens: total + genuine id·count + k.
    const std::size_t dups = protocol.duplicates_per_training;
    const std::size_t genuine_total = forgery_base[0];
    std::vector<Specimen> duplicates(genuine_total * dups);
    std::vector<bool> duplicated(genuine_total, false);
    std::vector<const Specimen*> all(total + duplicates.size());
    for (std::size_t i = 0; i < total; ++i) all[i] = &specimens[i];
    for (std::size_t i = 0; i < duplicates.size(); ++i) all[total + i] = &duplicates[i];

    DistanceCache cache(protocol.verifier, protocol.jobs);
    VerificationReport report;
    report.far_grid = default_far_grid();
    report.random_frr.assign(report.far_grid.size(), 0.0);
    report.skilled_frr.assign(report.far_grid.size(), 0.0);

    for (std::size_t rep = 0; rep < protocol.repetitions; ++rep) {
        Rng rng = make_rng(protocol.seed, {rep});
        Repetition r;
        std::vector<std::vector<std::size_t>> references(users);
        for (std::size_t u = 0; u < users; ++u) {
            std::vector<std::size_t> order(db.users[u].genuine.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            std::vector<std::size_t> train(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(protocol.train_genuine_count));
            std::sort(train.begin(), train.end());
            for (std::size_t i : train) references[u].push_back(genuine_base[u] + i);
            for (std::size_t i = protocol.train_genuine_count; i < order.size(); ++i) {
                r.trials.push_back({u, genuine_base[u] + order[i], TrialLabel::genuine, 0.0});
            }
            for (std::size_t i = 0; i < db.users[u].forgery.size(); ++i) {
                r.trials.push_back({u, forgery_base[u] + i, TrialLabel::skilled_forgery, 0.0});
            }
            r.training.push_back(std::move(train));
        }
        for (std::size_t u = 0; u < users; ++u) {
            for (std::size_t v = 0; v < users; ++v) {
                if (v == u) continue;
                const auto pick = std::uniform_int_distribution<std::size_t>(0, db.users[v].genuine.size() - 1)(rng);
                r.trials.push_back({u, genuine_base[v] + pick, TrialLabel::random_forgery, 0.0});
            }
        }

        if (dups > 0) {
            std::vector<std::size_t> pending;
            for (const auto& refs : references) {
                for (std::size_t g : refs) {
                    if (!duplicated[g]) pending.push_back(g);
                }
            }
            parallel_for(pending.size(), protocol.jobs, [&](std::size_t k) {
                const std::size_t g = pending[k];
                const auto est = ks::estimate_parameters(*trajectories[g]);
                for (std::size_t d = 0; d < dups; ++d) {
                    auto cfg = ds::DuplicationConfig::for_kind(ds::DuplicateKind::genuine, derive_seed(protocol.seed, {g, d}));
                    cfg.m = protocol.duplicate_m;
                    const auto dup = ds::duplicate_signature(est.signature, cfg, db.f_m);
                    duplicates[g * dups + d] = make_specimen(dup.rendered.trajectory);
                }
            });
            for (std::size_t g : pending) duplicated[g] = true;
            for (auto& refs : references) {
                const std::size_t real = refs.size();
                for (std::size_t k = 0; k < real; ++k) {
                    for (std::size_t d = 0; d < dups; ++d) refs.push_back(total + refs[k] * dups + d);
                }
            }
        }

        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& t : r.trials) {
            for (std::size_t ref : references[t.user]) pairs.emplace_back(t.probe, ref);
        }
        cache.fill(pairs, all);

        std::vector<double> genuine_scores, random_scores, skilled_scores;
        for (auto& t : r.trials) {
            std::vector<double> d;
            for (std::size_t ref : references[t.user]) d.push_back(cache.at(t.probe, ref));
            t.score = fuse(d, protocol.verifier);
            auto& bucket = t.label == TrialLabel::genuine          ? genuine_scores
                           : t.label == TrialLabel::random_forgery ? random_scores
                                                                   : skilled_scores;
            bucket.push_back(t.score);
        }
        r.random = summarize(genuine_scores, random_scores);
        if (!skilled_scores.empty()) r.skilled = summarize(genuine_scores, skilled_scores);
        const auto rf = frr_at(r.random.det, report.far_grid);
        const auto sf = skilled_scores.empty() ? std::vector<double>(report.far_grid.size(), 0.0)
                                               : frr_at(r.skilled.det, report.far_grid);
        for (std::size_t k = 0; k < report.far_grid.size(); ++k) {
            report.random_frr[k] += rf[k];
            report.skilled_frr[k] += sf[k];
        }
        report.random_eer += r.random.eer;
        report.skilled_eer += r.skilled.eer;
        report.random_auc += r.random.auc;
        report.skilled_auc += r.skilled.auc;
        report.repetitions.push_back(std::move(r));
    }
    const auto reps = static_cast<double>(protocol.repetitions);
    report.random_eer /= reps;
    report.skilled_eer /= reps;
    report.random_auc /= reps;
    report.skilled_auc /= reps;
    for (auto& x : report.random_frr) x /= reps;
    for (auto& x : report.skilled_frr) x /= reps;
    return report;
}

CmcReport classify_cmc(const std::vector<std::vector<Trajectory3D>>& classes, const ExperimentProtocol& protocol) {
    const std::size_t c = classes.size();
    if (c < 2) throw InputError("classify_cmc: need at least 2 classes");
    std::vector<std::size_t> base(c);
    std::size_t total = 0;
    for (std::size_t k = 0; k < c; ++k) {
        if (classes[k].size() < 2) throw InputError("classify_cmc: every class needs at least 2 samples");
        base[k] = total;
        total += classes[k].size();
    }
    std::vector<Specimen> specimens(total);
    parallel_for(total, protocol.jobs, [&](std::size_t i) {
        std::size_t k = static_cast<std::size_t>(std::upper_bound(base.begin(), base.end(), i) - base.begin()) - 1;
        specimens[i] = make_specimen(classes[k][i - base[k]]);
    });
    std::vector<const Specimen*> all;
    for (const auto& s : specimens) all.push_back(&s);

    DistanceCache cache(Verifier::dtw, protocol.jobs);
    CmcReport report;
    report.rank_accuracy.assign(c, 0.0);
    for (std::size_t rep = 0; rep < protocol.repetitions; ++rep) {
        Rng rng = make_rng(protocol.seed, {rep});
        std::vector<std::vector<std::size_t>> templates(c);
        std::vector<std::pair<std::size_t, std::size_t>> probes;  // (class, id)
        for (std::size_t k = 0; k < c; ++k) {
            std::vector<std::size_t> order(classes[k].size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);
            const std::size_t n_train = std::min(protocol.train_genuine_count, order.size() - 1);
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (i < n_train) {
                    templates[k].push_back(base[k] + order[i]);
                } else {
                    probes.emplace_back(k, base[k] + order[i]);
                }
            }
        }
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& [k, id] : probes) {
            for (const auto& tk : templates) {
                for (std::size_t t : tk) pairs.emplace_back(id, t);
            }
        }
        cache.fill(pairs, all);
        std::vector<double> hits(c, 0.0);
        for (const auto& [k, id] : probes) {
            std::vector<double> class_score(c);
            for (std::size_t j = 0; j < c; ++j) {
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t t : templates[j]) best = std::min(best, cache.at(id, t));
                class_score[j] = best;
            }
            // Rank of the true class; ties count against it.
            std::size_t rank = 0;
            for (std::size_t j = 0; j < c; ++j) {
                if (j != k && class_score[j] <= class_score[k]) ++rank;
            }
            for (std::size_t r = rank; r < c; ++r) hits[r] += 1.0;
        }
        for (std::size_t r = 0; r < c; ++r) report.rank_accuracy[r] += hits[r] / static_cast<double>(probes.size());
    }
    for (auto& x : report.rank_accuracy) x /= static_cast<double>(protocol.repetitions);
    return report;
}

}  // namespace airsig::verify
