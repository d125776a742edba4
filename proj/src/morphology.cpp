#include "airsig/morphology.hpp"

#include "airsig/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>

namespace airsig::plan {

DiscreteDistribution DiscreteDistribution::uniform(int lo, int hi) {
    DiscreteDistribution d;
    if (hi < lo) return d;
    const double p = 1.0 / static_cast<double>(hi - lo + 1);
    for (int v = lo; v <= hi; ++v) d.entries.emplace_back(v, p);
    return d;
}

void DiscreteDistribution::validate() const {
    if (entries.empty()) throw InputError("distribution is empty");
    double total = 0.0;
    for (const auto& [value, p] : entries) {
        if (!(p >= 0.0)) throw InputError("distribution has a negative probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("distribution probabilities must sum to 1");
}

int DiscreteDistribution::sample(Rng& rng) const {
    std::vector<double> weights;
    weights.reserve(entries.size());
    for (const auto& e : entries) weights.push_back(e.second);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    return entries[pick(rng)].first;
}

int DiscreteDistribution::min_value() const {
    int v = entries.front().first;
    for (const auto& e : entries) v = std::min(v, e.first);
    return v;
}

int DiscreteDistribution::max_value() const {
    int v = entries.front().first;
    for (const auto& e : entries) v = std::max(v, e.first);
    return v;
}

void MorphologyConfig::validate() const {
    word_count.validate();
    letters_per_word.validate();
    points_per_letter.validate();
    if (word_count.min_value() < 0) throw InputError("morphology: word counts must be non-negative");
    if (letters_per_word.min_value() < 1) throw InputError("morphology: words need at least one letter");
    if (!(flourish_probability >= 0.0 && flourish_probability <= 1.0)) {
        throw InputError("morphology: flourish probability must lie in [0, 1]");
    }
    if (!(canvas_size > 0.0)) throw InputError("morphology: canvas size must be positive");
    const auto& g = gesture;
    if (!(g.cube_size > 0.0)) throw InputError("gesture: cube size must be positive");
    if (g.min_points < 2 || g.max_points < g.min_points) throw InputError("gesture: invalid point-count range");
    if (!(g.sagitta_min > 0.0) || g.sagitta_max < g.sagitta_min) throw InputError("gesture: invalid sagitta range");
    if (g.min_letters < 1 || g.max_letters < g.min_letters) throw InputError("gesture: invalid letter range");
}

namespace {

using Template = std::vector<Vec2>;

const std::array<Template, 26>& templates() {
    static const std::array<Template, 26> table = {{
        {{0, 0}, {0.3, 1}, {0.6, 0}, {0.45, 0.45}, {0.15, 0.45}},                 // A
        {{0, 0}, {0, 1}, {0.45, 0.8}, {0, 0.5}, {0.5, 0.25}, {0, 0}},            // B
        {{0.6, 0.85}, {0.3, 1}, {0, 0.5}, {0.3, 0}, {0.6, 0.15}},                 // C
        {{0, 0}, {0, 1}, {0.55, 0.6}, {0.4, 0.1}, {0, 0}},                        // D
        {{0.6, 1}, {0, 1}, {0.05, 0.5}, {0, 0}, {0.6, 0}},                        // E
        {{0.6, 1}, {0, 1}, {0, 0}, {0, 0.5}, {0.4, 0.5}},                         // F
        {{0.6, 0.85}, {0.3, 1}, {0, 0.5}, {0.3, 0}, {0.6, 0.4}, {0.35, 0.4}},    // G
        {{0, 1}, {0, 0}, {0, 0.5}, {0.6, 0.5}, {0.6, 1}, {0.6, 0}},              // H
        {{0.2, 1}, {0.3, 0.5}, {0.3, 0}},                                          // I
        {{0.6, 1}, {0.55, 0.2}, {0.3, 0}, {0, 0.25}},                             // J
        {{0, 1}, {0, 0}, {0, 0.45}, {0.6, 1}, {0.15, 0.55}, {0.6, 0}},           // K
        {{0, 1}, {0, 0}, {0.6, 0}},                                                // L
        {{0, 0}, {0.1, 1}, {0.3, 0.4}, {0.5, 1}, {0.6, 0}},                       // M
        {{0, 0}, {0, 1}, {0.6, 0}, {0.6, 1}},                                      // N
        {{0.3, 1}, {0, 0.5}, {0.3, 0}, {0.6, 0.5}, {0.3, 1}},                     // O
        {{0, 0}, {0, 1}, {0.55, 0.8}, {0, 0.5}},                                   // P
        {{0.3, 1}, {0, 0.5}, {0.3, 0}, {0.6, 0.5}, {0.35, 0.95}, {0.6, 0}},      // Q
        {{0, 0}, {0, 1}, {0.55, 0.8}, {0, 0.5}, {0.6, 0}},                        // R
        {{0.6, 0.9}, {0.3, 1}, {0.05, 0.75}, {0.55, 0.3}, {0.3, 0}, {0, 0.1}},   // S
        {{0, 1}, {0.6, 1}, {0.3, 1}, {0.3, 0}},                                    // T
        {{0, 1}, {0.05, 0.2}, {0.3, 0}, {0.55, 0.2}, {0.6, 1}},                   // U
        {{0, 1}, {0.3, 0}, {0.6, 1}},                                              // V
        {{0, 1}, {0.15, 0}, {0.3, 0.6}, {0.45, 0}, {0.6, 1}},                     // W
        {{0, 1}, {0.6, 0}, {0.3, 0.5}, {0.6, 1}, {0, 0}},                         // X
        {{0, 1}, {0.3, 0.5}, {0.6, 1}, {0.3, 0.5}, {0.3, 0}},                     // Y
        {{0, 1}, {0.6, 1}, {0, 0}, {0.6, 0}},                                      // Z
    }};
    return table;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Chord midpoint pushed sideways by `bulge` chord lengths (signed).
Vec2 bulged_midpoint(const Vec2& a, const Vec2& b, double bulge) {
    const Vec2 chord = b - a;
    const Vec2 normal(-chord.y(), chord.x());
    return 0.5 * (a + b) + bulge * normal;
}

class LayoutBuilder {
public:
    LayoutBuilder(double letter_height, Rng& rng) : height_(letter_height), rng_(rng) {
        slant_ = uniform(rng_, -0.15, 0.3);
    }

    void add_letter(char letter) {
        const auto tpl = letter_template(letter);
        const double scale = height_ * uniform(rng_, 0.9, 1.1);
        const double jitter = 0.02 * height_;
        double max_x = 0.0;
        for (const auto& p : tpl) {
            const Vec2 local(p.x() * scale + slant_ * p.y() * scale, p.y() * scale);
            const Vec2 q(cursor_x_ + local.x() + uniform(rng_, -jitter, jitter),
                         baseline_ + local.y() + uniform(rng_, -jitter, jitter));
            append(q, uniform(rng_, -0.2, 0.2));
            max_x = std::max(max_x, local.x());
        }
        cursor_x_ += max_x + 0.15 * height_;
        ++letters_;
    }

    void end_word() { cursor_x_ += 0.5 * height_; }

    /// Closed loop of 6–10 links around an ellipse; starts (and ends near) the
    /// current pen position, or a random point when nothing has been drawn.
    void add_flourish(double canvas) {
        Vec2 center;
        double rx;
        double ry;
        double start_angle;
        if (layout_.targets.empty()) {
            rx = uniform(rng_, 0.25, 0.4) * canvas;
            ry = uniform(rng_, 0.12, 0.22) * canvas;
            center = Vec2(0.5 * canvas, 0.5 * canvas);
            start_angle = uniform(rng_, 0.0, kTwoPi);
        } else {
            double min_x = layout_.targets.front().x();
            double max_x = min_x;
            for (const auto& p : layout_.targets) {
                min_x = std::min(min_x, p.x());
                max_x = std::max(max_x, p.x());
            }
            rx = std::max(0.5 * (max_x - min_x), height_) * uniform(rng_, 0.8, 1.1);
            ry = height_ * uniform(rng_, 0.35, 0.6);
            const Vec2 pen = layout_.targets.back();
            start_angle = uniform(rng_, -0.25 * kPi, 0.25 * kPi);
            center = pen - Vec2(rx * std::cos(start_angle), ry * std::sin(start_angle));
        }
        const int links = std::uniform_int_distribution<int>(6, 10)(rng_);
        const double dir = std::bernoulli_distribution(0.5)(rng_) ? 1.0 : -1.0;
        auto on_loop = [&](double a, double r) -> Vec2 { return center + r * Vec2(rx * std::cos(a), ry * std::sin(a)); };
        if (layout_.targets.empty()) layout_.targets.push_back(on_loop(start_angle, 1.0));
        for (int k = 1; k <= links; ++k) {
            const double a0 = start_angle + dir * kTwoPi * (k - 1) / links;
            const double a1 = start_angle + dir * kTwoPi * k / links;
            const double r = k == links ? uniform(rng_, 0.97, 1.03) : uniform(rng_, 0.85, 1.15);
            const Vec2 next = on_loop(a1, r);
            layout_.midpoints.push_back(on_loop(0.5 * (a0 + a1), uniform(rng_, 0.95, 1.05)));
            layout_.targets.push_back(next);
        }
    }

    int letters() const { return letters_; }
    Morphology2D take() { return std::move(layout_); }

private:
    void append(const Vec2& q, double bulge) {
        if (!layout_.targets.empty()) layout_.midpoints.push_back(bulged_midpoint(layout_.targets.back(), q, bulge));
        layout_.targets.push_back(q);
    }

    double height_;
    Rng& rng_;
    double slant_ = 0.0;
    double cursor_x_ = 0.0;
    double baseline_ = 0.0;
    int letters_ = 0;
    Morphology2D layout_;
};

// Letter whose template has `count` points (nearest available count otherwise).
char pick_letter(int count, Rng& rng) {
    std::map<int, std::vector<char>> by_count;
    for (char c = 'A'; c <= 'Z'; ++c) by_count[static_cast<int>(letter_template(c).size())].push_back(c);
    auto it = by_count.lower_bound(count);
    if (it == by_count.end()) it = std::prev(by_count.end());
    const auto& letters = it->second;
    return letters[std::uniform_int_distribution<std::size_t>(0, letters.size() - 1)(rng)];
}

}  // namespace

std::span<const Vec2> letter_template(char letter) {
    const int c = std::toupper(static_cast<unsigned char>(letter));
    if (c < 'A' || c > 'Z') throw InputError(std::string("no template for character '") + letter + "'");
    return templates()[static_cast<std::size_t>(c - 'A')];
}

Morphology2D generate_morphology_2d(const MorphologyConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    Rng rng(seed);
    LayoutBuilder builder(0.25 * cfg.canvas_size, rng);
    const int words = cfg.word_count.sample(rng);
    for (int w = 0; w < words; ++w) {
        const int letters = cfg.letters_per_word.sample(rng);
        for (int l = 0; l < letters; ++l) builder.add_letter(pick_letter(cfg.points_per_letter.sample(rng), rng));
        builder.end_word();
    }
    const bool flourish = std::bernoulli_distribution(cfg.flourish_probability)(rng);
    if (flourish || builder.letters() == 0) builder.add_flourish(cfg.canvas_size);
    return builder.take();
}

Morphology2D text_morphology_2d(std::string_view text, const MorphologyConfig& cfg, std::uint64_t seed) {
    if (!(cfg.canvas_size > 0.0)) throw InputError("morphology: canvas size must be positive");
    Rng rng(seed);
    LayoutBuilder builder(0.25 * cfg.canvas_size, rng);
    for (char c : text) {
        if (c == ' ') {
            builder.end_word();
            continue;
        }
        builder.add_letter(c);
    }
    auto layout = builder.take();
    if (layout.targets.size() < 2) throw InputError("text_morphology_2d: text yields fewer than 2 targets");
    return layout;
}

ActionPlan lift_to_plan(const Morphology2D& layout, const SurfaceConfig& surface) {
    return build_plan(project_to_surface(layout.targets, surface), project_to_surface(layout.midpoints, surface));
}

ActionPlan generate_gesture_plan(const MorphologyConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const auto& g = cfg.gesture;
    Rng rng(seed);
    const int n = std::uniform_int_distribution<int>(g.min_points, g.max_points)(rng);
    std::uniform_real_distribution<double> coord(0.0, g.cube_size);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<Vec3> targets;
    std::vector<Vec3> midpoints;
    while (static_cast<int>(targets.size()) < n) {
        const Vec3 p(coord(rng), coord(rng), coord(rng));
        if (!targets.empty() && (p - targets.back()).norm() < 1e-6 * g.cube_size) continue;
        targets.push_back(p);
    }
    for (std::size_t j = 0; j + 1 < targets.size(); ++j) {
        const Vec3 chord = targets[j + 1] - targets[j];
        const double d = chord.norm();
        const Vec3 axis = chord / d;
        Vec3 side;
        do {
            const Vec3 g3(normal(rng), normal(rng), normal(rng));
            side = g3 - g3.dot(axis) * axis;
        } while (side.norm() < 1e-6);
        side.normalize();
        const double h = std::uniform_real_distribution<double>(g.sagitta_min * d, g.sagitta_max * d)(rng);
        midpoints.push_back(0.5 * (targets[j] + targets[j + 1]) + h * side);
    }
    return build_plan(std::move(targets), std::move(midpoints));
}

std::string random_word(const MorphologyConfig& cfg, Rng& rng) {
    const int n = std::uniform_int_distribution<int>(cfg.gesture.min_letters, cfg.gesture.max_letters)(rng);
    std::string word;
    std::uniform_int_distribution<int> letter(0, 25);
    for (int i = 0; i < n; ++i) word.push_back(static_cast<char>('A' + letter(rng)));
    return word;
}

}  // namespace airsig::plan
