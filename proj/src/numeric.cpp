#include "poislrt/numeric.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "poislrt/errors.hpp"

namespace poislrt {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

std::uint64_t splitmix_mix(std::uint64_t z) {
    z += kGolden;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double lgamma_threadsafe(double x) {
#if defined(__GLIBC__)
    int sign = 0;
    return lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

}  // namespace

RngState::RngState(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix_mix(splitmix_mix(seed) ^ splitmix_mix(stream ^ kGolden))) {}

double RngState::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double detail::normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
    // Acklam's rational approximation, |rel err| < 1.15e-9 before refinement.
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double x;
    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        double q = p - 0.5;
        double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // One Halley step against the erfc-based CDF.
    const double sqrt2 = 1.4142135623730950488;
    const double sqrt2pi = 2.5066282746310005024;
    double e = 0.5 * std::erfc(-x / sqrt2) - p;
    double u = e * sqrt2pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

double chi2_1_upper_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("chi2_1_upper_quantile: p must lie in (0,1)");
    double z = detail::normal_quantile(1.0 - 0.5 * p);
    double q = z * z;
    // Newton polish on the upper-tail function keeps the round trip tight.
    for (int it = 0; it < 2; ++it) {
        double f = chi2_1_upper_tail(q) - p;
        double pdf = std::exp(-0.5 * q) / std::sqrt(2.0 * M_PI * q);
        if (!(pdf > 0.0)) break;
        q += f / pdf;
        if (q <= 0.0) q = z * z;  // fall back if a step overshoots
    }
    return q;
}

double chi2_1_upper_tail(double q) {
    if (q < 0.0) throw DomainError("chi2_1_upper_tail: q must be nonnegative");
    return std::erfc(std::sqrt(0.5 * q));
}

double log_factorial(long k) {
    if (k < 0) throw DomainError("log_factorial: negative argument");
    static const std::vector<double> table = [] {
        std::vector<double> t(1025);
        // Exact integer factorials fit in uint64 through 20!.
        unsigned long long f = 1;
        t[0] = 0.0;
        for (int i = 1; i <= 20; ++i) {
            f *= static_cast<unsigned long long>(i);
            t[i] = std::log(static_cast<double>(f));
        }
        for (int i = 21; i <= 1024; ++i) t[i] = lgamma_threadsafe(i + 1.0);
        return t;
    }();
    if (k <= 1024) return table[static_cast<std::size_t>(k)];
    return lgamma_threadsafe(static_cast<double>(k) + 1.0);
}

namespace {

long poisson_inversion(RngState& rng, double mean) {
    double u = rng.uniform01();
    double p = std::exp(-mean);
    double cum = p;
    long k = 0;
    while (u > cum) {
        ++k;
        p *= mean / static_cast<double>(k);
        cum += p;
        if (k > 10000) break;  // unreachable for mean < 10; hard stop for safety
    }
    return k;
}

// Hormann's PTRS transformed-rejection sampler, valid for mean >= 10.
long poisson_ptrs(RngState& rng, double mean) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double u = rng.uniform01() - 0.5;
        double v = rng.uniform01();
        double us = 0.5 - std::fabs(u);
        double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<long>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        long k = static_cast<long>(kf);
        double lhs = std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b);
        double rhs = kf * loglam - mean - log_factorial(k);
        if (lhs <= rhs) return k;
    }
}

}  // namespace

long poisson_draw(RngState& rng, double mean) {
    if (mean < 0.0) throw DomainError("poisson_draw: mean must be nonnegative");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_inversion(rng, mean);
    return poisson_ptrs(rng, mean);
}

}  // namespace poislrt
