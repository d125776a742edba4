#include "airsig/lognormal.hpp"

#include "airsig/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace airsig::core {

namespace {

void require_positive_sigma2(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw DomainError("lognormal sigma2 must be positive, got " + std::to_string(sigma2));
    }
}

}  // namespace

double unit_lognormal(double t, double t0, double mu, double sigma2) {
    require_positive_sigma2(sigma2);
    const double dt = t - t0;
    if (dt <= 0.0) return 0.0;
    const double z = std::log(dt) - mu;
    const double sigma = std::sqrt(sigma2);
    return std::exp(-z * z / (2.0 * sigma2)) / (sigma * std::sqrt(2.0 * std::numbers::pi) * dt);
}

double lognormal_area(double t, double t0, double mu, double sigma2) {
    require_positive_sigma2(sigma2);
    const double dt = t - t0;
    if (dt <= 0.0) return 0.0;
    return 0.5 * std::erfc(-(std::log(dt) - mu) / (std::sqrt(2.0 * sigma2)));
}

double lognormal_peak_time(double t0, double mu, double sigma2) {
    require_positive_sigma2(sigma2);
    return t0 + std::exp(mu - sigma2);
}

double lognormal_tail_time(double t0, double mu, double sigma2, double k_sigma) {
    require_positive_sigma2(sigma2);
    return t0 + std::exp(mu + k_sigma * std::sqrt(sigma2));
}

}  // namespace airsig::core
