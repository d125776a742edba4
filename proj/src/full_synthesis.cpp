#include "airsig/full_synthesis.hpp"

#include "airsig/error.hpp"
#include "airsig/lognormal.hpp"
#include "airsig/reconstruct.hpp"

#include <cmath>
#include <numbers>

namespace airsig::fs {

namespace {
constexpr double kThreeRootTwo = 3.0 * std::numbers::sqrt2;
}

double solve_sigma(double ts_prev, double ts_cur, double t0, SolverOptions options) {
    if (!(ts_cur > ts_prev)) throw InputError("solve_sigma: zero-duration stroke");
    if (!(ts_prev > t0)) throw InputError("solve_sigma: onset must precede the stroke start");
    const double mid = 0.5 * (ts_prev + ts_cur);
    const double c = options.fixed_log_ratio ? std::log(1.5) : std::log((ts_cur - t0) / (mid - t0));
    // Positive root of σ² + 3√2σ − c = 0; c > 0 because mid < ts_cur.
    return 0.5 * (-kThreeRootTwo + std::sqrt(kThreeRootTwo * kThreeRootTwo + 4.0 * c));
}

double solve_mu(double ts_cur, double t0, double sigma) {
    if (!(ts_cur > t0)) throw InputError("solve_mu: ts_cur must follow t0");
    if (!(sigma >= 0.0)) throw DomainError("solve_mu: sigma must be non-negative");
    return std::log(ts_cur - t0) - kThreeRootTwo * sigma;
}

LognormalStroke solve_stroke_timing(double ts_prev, double ts_cur, SolverOptions options) {
    LognormalStroke s;
    s.t0 = ts_prev - kOnsetLead;
    const double sigma = solve_sigma(ts_prev, ts_cur, s.t0, options);
    s.sigma2 = sigma * sigma;
    s.mu = solve_mu(ts_cur, s.t0, sigma);
    return s;
}

void set_stroke_angles(LognormalStroke& stroke, const plan::PlanarArc& arc) {
    const auto start = angles_from_direction(arc.tangent_at(0.0));
    const auto end = angles_from_direction(arc.tangent_at(arc.length()));
    stroke.theta_s = start.azimuth;
    stroke.phi_s = start.polar;
    stroke.theta_e = end.azimuth;
    stroke.phi_e = end.polar;
}

SigmaLogSignature plan_to_signature(const plan::ActionPlan& plan, SolverOptions options) {
    if (!plan.timed()) throw InputError("plan_to_signature: plan has no timestamps");
    plan.validate();
    SigmaLogSignature sig;
    sig.plan = plan;
    sig.strokes.reserve(plan.links.size());
    for (std::size_t j = 0; j < plan.links.size(); ++j) {
        LognormalStroke s = solve_stroke_timing(plan.timestamps[j], plan.timestamps[j + 1], options);
        s.D = plan.links[j].length();
        set_stroke_angles(s, plan.links[j]);
        sig.strokes.push_back(s);
    }
    return sig;
}

RenderedSignature render_full_signature(const SigmaLogSignature& sig, double f_m) {
    if (!(f_m > 0.0)) throw DomainError("render_full_signature: f_m must be positive");
    sig.validate();
    const auto& links = sig.plan.links;
    if (links.empty() || links.size() != sig.strokes.size()) {
        throw InputError("render_full_signature: signature needs one arc per stroke");
    }
    const double end = core::reconstruction_end_time(sig.strokes);
    const auto n = static_cast<std::size_t>(std::ceil(std::max(end, 0.0) * f_m)) + 1;

    std::vector<double> times(n);
    std::vector<Vec3> pts(n);
    std::vector<double> speed(n);
    const Vec3 origin = sig.plan.targets.front();
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / f_m;
        Vec3 p = origin;
        Vec3 v = Vec3::Zero();
        for (std::size_t j = 0; j < links.size(); ++j) {
            const auto& s = sig.strokes[j];
            const double w = core::lognormal_area(t, s.t0, s.mu, s.sigma2);
            if (w == 0.0) continue;
            const double travelled = s.D * w;
            p += links[j].point_at(travelled) - links[j].start;
            v += s.D * core::unit_lognormal(t, s.t0, s.mu, s.sigma2) * links[j].tangent_at(travelled);
        }
        times[k] = t;
        pts[k] = p;
        speed[k] = v.norm();
    }
    return {Trajectory3D(std::move(times), std::move(pts), f_m), std::move(speed)};
}

}  // namespace airsig::fs
