#pragma once

// Scalar lognormal primitives of the Sigma-Lognormal model.

namespace airsig::core {

/// Unit-area lognormal Λ(t; t0, μ, σ²). Zero for t ≤ t0.
/// Throws DomainError when sigma2 ≤ 0.
double unit_lognormal(double t, double t0, double mu, double sigma2);

/// Fraction of lognormal area elapsed by time t: W(t) = ∫_{t0}^{t} Λ(τ) dτ.
double lognormal_area(double t, double t0, double mu, double sigma2);

/// Time of the Λ maximum, t0 + e^{μ−σ²}.
double lognormal_peak_time(double t0, double mu, double sigma2);

/// Time by which the lognormal has essentially decayed: t0 + e^{μ + k·σ}.
double lognormal_tail_time(double t0, double mu, double sigma2, double k_sigma = 5.0);

}  // namespace airsig::core
