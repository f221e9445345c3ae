#ifndef POISLRT_NUMERIC_HPP
#define POISLRT_NUMERIC_HPP

#include <cstdint>
#include <random>

namespace poislrt {

// Deterministic random stream addressed by (seed, stream). The same pair
// always reproduces the same draw sequence on every platform; distinct
// streams are decorrelated by a splitmix-style hash of both words before
// seeding the (fully bit-specified) mt19937_64 engine.
class RngState {
public:
    RngState(std::uint64_t seed, std::uint64_t stream);

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Upper-p quantile of chi-square with one degree of freedom:
// returns q with P(chi2_1 > q) = p. Absolute accuracy better than 1e-9.
double chi2_1_upper_quantile(double p);

// P(chi2_1 > q) for q >= 0, via erfc(sqrt(q/2)).
double chi2_1_upper_tail(double q);

// log(k!) with relative error <= 1e-13. Table-backed for k <= 1024,
// log-gamma continuation above.
double log_factorial(long k);

// One Poisson(mean) variate. Inversion by sequential search for mean < 10,
// transformed rejection for larger means. mean == 0 returns 0.
long poisson_draw(RngState& rng, double mean);

namespace detail {
// Lower-tail standard normal quantile (rational approximation plus one
// Halley refinement); exposed for tests.
double normal_quantile(double p);
}  // namespace detail

}  // namespace poislrt

#endif
