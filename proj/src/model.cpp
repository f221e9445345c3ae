#include "poislrt/model.hpp"

#include <cmath>
#include <limits>

#include "poislrt/errors.hpp"

namespace poislrt {

void ModelParams::validate() const {
    if (mu.size() < 2) throw DomainError("ModelParams: need m >= 2 rates");
    if (!(lambda >= 0.0)) throw DomainError("ModelParams: lambda must be nonnegative");
    for (double m : mu)
        if (!(m > 0.0)) throw DomainError("ModelParams: every mu must be strictly positive");
}

void CountMatrix::validate() const {
    if (n_ < 1) throw DomainError("CountMatrix: need at least one row");
    if (m_ < 2) throw DomainError("CountMatrix: need at least two columns");
    for (int v : values_)
        if (v < 0) throw DomainError("CountMatrix: counts must be nonnegative");
}

CountMatrix sample_dataset(const ModelParams& params, int n, RngState& rng) {
    params.validate();
    if (n < 1) throw DomainError("sample_dataset: n must be positive");
    const int m = params.dim();
    CountMatrix out(n, m);
    for (int i = 0; i < n; ++i) {
        long shock = poisson_draw(rng, params.lambda);
        for (int j = 0; j < m; ++j)
            out.at(i, j) = static_cast<int>(shock + poisson_draw(rng, params.mu[j]));
    }
    return out;
}

CountMatrix sample_dataset(const ModelParams& params, int n, std::uint64_t seed) {
    RngState rng(seed, 0);
    return sample_dataset(params, n, rng);
}

SufficientStats sufficient_stats(const CountMatrix& data) {
    data.validate();
    const int n = data.n();
    const int m = data.m();
    SufficientStats st;
    st.col_means.assign(m, 0.0);
    st.row_min.resize(n);

    long double product_sum = 0.0L;
    double lf_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        auto row = data.row(i);
        int mn = row[0];
        unsigned long long iprod = 1;
        bool exact = true;
        double fprod = 1.0;
        for (int j = 0; j < m; ++j) {
            int y = row[j];
            if (y < mn) mn = y;
            st.col_means[j] += y;
            lf_sum += log_factorial(y);
            if (exact) {
                unsigned long long next;
                if (__builtin_mul_overflow(iprod, static_cast<unsigned long long>(y), &next)) {
                    exact = false;
                    fprod = static_cast<double>(iprod) * static_cast<double>(y);
                } else {
                    iprod = next;
                }
            } else {
                fprod *= static_cast<double>(y);
            }
        }
        double rowprod = exact ? static_cast<double>(iprod) : fprod;
        if (!std::isfinite(rowprod))
            throw NumericOverflowError("sufficient_stats: row product exceeds double range");
        product_sum += rowprod;
        st.row_min[i] = mn;
    }
    for (int j = 0; j < m; ++j) st.col_means[j] /= n;
    st.mixed_moment = static_cast<double>(product_sum / n);
    st.mean_product = 1.0;
    for (int j = 0; j < m; ++j) st.mean_product *= st.col_means[j];
    st.log_factorial_sum = lf_sum;
    return st;
}

}  // namespace poislrt
