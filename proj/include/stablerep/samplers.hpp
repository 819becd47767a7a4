#pragma once

#include <vector>

#include "stablerep/rng.hpp"

namespace stablerep {

struct VmfParams {
    std::vector<double> mu;  // unit mean direction
    double kappa = 0.0;      // concentration, >= 0

    VmfParams(std::vector<double> mean, double concentration);
};

// Uniform draw from the unit sphere S^{d-1}, d >= 2.
std::vector<double> sample_sphere_uniform(int d, RandomStream& rs);

// von Mises–Fisher draw via the Ulrich–Wood rejection construction: sample
// the cosine w against mu by rejection, a uniform tangent direction, and
// combine as w·mu + sqrt(1-w²)·t.
std::vector<double> sample_vmf(const VmfParams& p, RandomStream& rs);

// N(mu, sigma²) conditioned on [lo, hi]. Rejection sampling, switching to
// inverse-CDF when the acceptance probability drops below 1%.
double sample_truncnorm(double mu, double sigma, double lo, double hi, RandomStream& rs);

// Standard normal CDF and its inverse (Acklam's approximation polished with
// one Halley step); used by the truncated-normal inverse-CDF path.
double normal_cdf(double x);
double normal_quantile(double p);

// Gamma(alpha, 1) via Marsaglia–Tsang (boosted for alpha < 1).
double sample_gamma(double alpha, RandomStream& rs);

}  // namespace stablerep
