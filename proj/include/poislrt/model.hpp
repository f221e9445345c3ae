#ifndef POISLRT_MODEL_HPP
#define POISLRT_MODEL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "poislrt/numeric.hpp"

namespace poislrt {

// Rates of the common-shock Poisson model Y_j = U + X_j with
// U ~ Poisson(lambda) shared across coordinates and X_j ~ Poisson(mu_j).
struct ModelParams {
    double lambda = 0.0;
    std::vector<double> mu;

    int dim() const { return static_cast<int>(mu.size()); }
    // Throws DomainError unless lambda >= 0, every mu[j] > 0 and m >= 2.
    void validate() const;
};

// n observations of m nonnegative counts, stored row-major.
class CountMatrix {
public:
    CountMatrix() = default;
    CountMatrix(int n, int m) : n_(n), m_(m), values_(static_cast<std::size_t>(n) * m, 0) {}

    int n() const { return n_; }
    int m() const { return m_; }
    std::span<const int> row(int i) const {
        return {values_.data() + static_cast<std::size_t>(i) * m_, static_cast<std::size_t>(m_)};
    }
    int& at(int i, int j) { return values_[static_cast<std::size_t>(i) * m_ + j]; }
    int at(int i, int j) const { return values_[static_cast<std::size_t>(i) * m_ + j]; }

    // Throws DomainError unless n >= 1, m >= 2 and all entries >= 0.
    void validate() const;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<int> values_;
};

// Aggregates consumed by the likelihood, the MLE screen and the plug-in
// correction factor.
struct SufficientStats {
    std::vector<double> col_means;  // per-column sample means
    std::vector<int> row_min;       // per-row minimum count
    double mixed_moment = 0.0;      // mean over rows of the row product
    double mean_product = 0.0;      // product of the column means
    double log_factorial_sum = 0.0; // sum of log(y_ij!) over all entries
};

// Draws an n-row sample from the model. Deterministic in (params, n, seed):
// row i consumes one shock draw then one draw per coordinate, in order.
CountMatrix sample_dataset(const ModelParams& params, int n, std::uint64_t seed);

// Same, driven by an externally owned stream (one stream per replication).
CountMatrix sample_dataset(const ModelParams& params, int n, RngState& rng);

// Row products for mixed_moment use exact integers while they fit in 64
// bits, then fall back to double (relative error ~1e-12, immaterial for the
// positivity screen). A product overflowing double raises
// NumericOverflowError; the log-space likelihood path never needs it.
SufficientStats sufficient_stats(const CountMatrix& data);

}  // namespace poislrt

#endif
