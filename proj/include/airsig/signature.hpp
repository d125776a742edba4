#pragma once

#include "airsig/action_plan.hpp"
#include "airsig/geometry.hpp"

#include <vector>

namespace airsig {

/// Parameters of one Sigma-Lognormal stroke.
struct LognormalStroke {
    double D = 1.0;       // amplitude, path length units
    double t0 = 0.0;      // onset, seconds
    double mu = 0.0;      // log-time delay
    double sigma2 = 1.0;  // log response time
    double theta_s = 0.0;  // azimuth at start / end
    double theta_e = 0.0;
    double phi_s = kPi / 2;  // polar angle at start / end
    double phi_e = kPi / 2;

    double sigma() const { return std::sqrt(sigma2); }

    /// Throws DomainError unless D > 0 and sigma2 > 0.
    void validate() const;

    friend bool operator==(const LognormalStroke&, const LognormalStroke&) = default;
};

/// An action plan plus one stroke per link: the generative description of a movement.
struct SigmaLogSignature {
    plan::ActionPlan plan;
    std::vector<LognormalStroke> strokes;

    std::size_t size() const { return strokes.size(); }

    /// Checks stroke validity, the one-stroke-per-link rule and nondecreasing onsets.
    /// A signature with no plan links is accepted as stroke-only (velocity models).
    void validate() const;
};

}  // namespace airsig
