#include "stablerep/samplers.hpp"

#include <cmath>

#include "stablerep/error.hpp"
#include "stablerep/kernels.hpp"

namespace stablerep {

namespace {

double vec_norm(const std::vector<double>& v) {
    return std::sqrt(kern::active().sumsq(int(v.size()), v.data()));
}

}  // namespace

VmfParams::VmfParams(std::vector<double> mean, double concentration)
    : mu(std::move(mean)), kappa(concentration) {
    if (mu.size() < 2) throw ContractError("vMF: dimension must be >= 2");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw ContractError("vMF: kappa must be finite and >= 0");
    const double n = vec_norm(mu);
    if (std::abs(n - 1.0) > 1e-9) throw ContractError("vMF: mu must be a unit vector");
}

std::vector<double> sample_sphere_uniform(int d, RandomStream& rs) {
    if (d < 2) throw ContractError("sample_sphere_uniform: d must be >= 2");
    std::vector<double> v(d);
    for (;;) {
        for (int i = 0; i < d; ++i) v[i] = rs.normal();
        const double n = vec_norm(v);
        if (n > 1e-12) {
            for (int i = 0; i < d; ++i) v[i] /= n;
            return v;
        }
    }
}

double sample_gamma(double alpha, RandomStream& rs) {
    if (alpha <= 0.0) throw ContractError("sample_gamma: alpha must be > 0");
    if (alpha < 1.0) {
        // Gamma(a) = Gamma(a+1) * U^{1/a}
        const double u = rs.uniform();
        return sample_gamma(alpha + 1.0, rs) * std::pow(u > 0 ? u : 1e-300, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = rs.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = rs.uniform();
        if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
        if (u > 0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

namespace {

double sample_beta_symmetric(double a, RandomStream& rs) {
    const double x = sample_gamma(a, rs);
    const double y = sample_gamma(a, rs);
    return x / (x + y);
}

}  // namespace

std::vector<double> sample_vmf(const VmfParams& p, RandomStream& rs) {
    const int d = int(p.mu.size());
    if (p.kappa < 1e-12) return sample_sphere_uniform(d, rs);

    // Ulrich–Wood envelope for the cosine w.
    const double kappa = p.kappa;
    const double dm1 = double(d - 1);
    const double b = (-2.0 * kappa + std::sqrt(4.0 * kappa * kappa + dm1 * dm1)) / dm1;
    const double x0 = (1.0 - b) / (1.0 + b);
    const double c = kappa * x0 + dm1 * std::log(1.0 - x0 * x0);

    double w;
    for (;;) {
        const double z = sample_beta_symmetric(dm1 / 2.0, rs);
        w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        const double u = rs.uniform();
        if (kappa * w + dm1 * std::log(1.0 - x0 * w) - c >= std::log(u > 0 ? u : 1e-300)) break;
    }

    // Uniform tangent direction: project a uniform sphere draw off mu.
    std::vector<double> t(d);
    for (;;) {
        std::vector<double> v = sample_sphere_uniform(d, rs);
        const double proj = kern::active().dot(d, v.data(), p.mu.data());
        for (int i = 0; i < d; ++i) t[i] = v[i] - proj * p.mu[i];
        const double n = vec_norm(t);
        if (n > 1e-9) {
            for (int i = 0; i < d; ++i) t[i] /= n;
            break;
        }
    }

    const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
    std::vector<double> out(d);
    for (int i = 0; i < d; ++i) out[i] = w * p.mu[i] + s * t[i];
    // Renormalize to guard the unit-norm invariant against rounding.
    const double n = vec_norm(out);
    for (int i = 0; i < d; ++i) out[i] /= n;
    return out;
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * 0.7071067811865475244);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ContractError("normal_quantile: p must be in (0,1)");
    // Acklam's rational approximation.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01,  -1.328068155288572e+01};
    static const double cc[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double dd[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((cc[0] * q + cc[1]) * q + cc[2]) * q + cc[3]) * q + cc[4]) * q + cc[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((cc[0] * q + cc[1]) * q + cc[2]) * q + cc[3]) * q + cc[4]) * q + cc[5]) /
            ((((dd[0] * q + dd[1]) * q + dd[2]) * q + dd[3]) * q + 1.0);
    }
    // One Halley refinement against the exact CDF.
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

double sample_truncnorm(double mu, double sigma, double lo, double hi, RandomStream& rs) {
    if (!(lo < hi)) throw ContractError("sample_truncnorm: empty interval");
    if (!(sigma > 0.0)) throw ContractError("sample_truncnorm: sigma must be > 0");

    const double plo = normal_cdf((lo - mu) / sigma);
    const double phi = normal_cdf((hi - mu) / sigma);
    const double accept = phi - plo;

    if (accept >= 0.01) {
        for (;;) {
            const double x = rs.normal(mu, sigma);
            if (x >= lo && x <= hi) return x;
        }
    }
    // Inverse-CDF fallback for thin slices.
    double p = plo + accept * rs.uniform();
    p = std::min(std::max(p, 1e-300), 1.0 - 1e-16);
    const double x = mu + sigma * normal_quantile(p);
    return std::min(std::max(x, lo), hi);
}

}  // namespace stablerep
