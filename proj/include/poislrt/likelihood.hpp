#ifndef POISLRT_LIKELIHOOD_HPP
#define POISLRT_LIKELIHOOD_HPP

#include <span>
#include <vector>

#include "poislrt/model.hpp"

namespace poislrt {

// Evaluation context for the profile log-likelihood in lambda. Holds the
// sufficient statistics plus per-row log-factorial coefficient tables so
// repeated evaluations (root finding) do not touch the raw counts again.
//
// The lambda domain is [0, lambda_upper) with lambda_upper = min_j col_mean;
// lambda = 0 is always admissible, even when lambda_upper = 0.
class LikelihoodContext {
public:
    explicit LikelihoodContext(const CountMatrix& data);
    LikelihoodContext(const CountMatrix& data, SufficientStats stats);

    const SufficientStats& stats() const { return stats_; }
    double lambda_upper() const { return lambda_upper_; }
    int n() const { return n_; }
    int m() const { return m_; }

    // log S_i(lambda) for row i; coefficients precomputed at construction.
    double log_S(int i, double log_xi, bool lambda_is_zero) const;
    // Same for the unit-shifted row (all counts minus one); requires
    // row_min[i] > 0.
    double log_S_shifted(int i, double log_xi, bool lambda_is_zero) const;

private:
    void build_tables(const CountMatrix& data);

    SufficientStats stats_;
    double lambda_upper_ = 0.0;
    int n_ = 0;
    int m_ = 0;
    // Flattened per-row tables: base_[off + u] = -log u! - sum_j log(y_ij-u)!
    // for u = 0..row_min; shift_ holds the same for the shifted row.
    std::vector<double> base_;
    std::vector<double> shift_;
    std::vector<std::size_t> offset_;
};

// xi(lambda) = lambda / prod_j (col_mean_j - lambda).
// Throws DomainError unless 0 <= lambda < min_j col_mean (lambda = 0 allowed).
double xi(double lambda, std::span<const double> col_means);

// log S_i(lambda) for a single row, summed fully over u = 0..min(row) in log
// space. At lambda = 0 this is -sum_j log(y_ij!).
double log_S_row(double lambda, std::span<const int> row, std::span<const double> col_means);

// Profile log-likelihood l(lambda); the 0*log(0) = 0 convention applies to
// empty columns.
double loglik(double lambda, const LikelihoodContext& ctx);

// l'(lambda) in the factored form
//   {1 + lambda * sum_j (col_mean_j - lambda)^-1}
//   * {-n + prod_j (col_mean_j - lambda)^-1 * sum_i ratio_i},
// where ratio_i = S_i(lambda; row-1)/S_i(lambda; row) for rows with a
// positive minimum, computed as a difference of log sums.
double dloglik(double lambda, const LikelihoodContext& ctx);

// Maximized log-likelihood under independence (lambda = 0).
double loglik_null(const CountMatrix& data);

}  // namespace poislrt

#endif
