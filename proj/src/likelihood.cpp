#include "poislrt/likelihood.hpp"

#include <cmath>
#include <limits>

#include "poislrt/errors.hpp"
#include "poislrt/numeric.hpp"

namespace poislrt {

namespace {

// log sum_u exp(u*log_xi + coeff[u]) by max shift; exact for a single term.
double log_sum_exp_series(double log_xi, const double* coeff, std::size_t len) {
    double tmax = -std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < len; ++u) {
        double t = static_cast<double>(u) * log_xi + coeff[u];
        if (t > tmax) tmax = t;
    }
    double acc = 0.0;
    for (std::size_t u = 0; u < len; ++u)
        acc += std::exp(static_cast<double>(u) * log_xi + coeff[u] - tmax);
    return tmax + std::log(acc);
}

void check_lambda_domain(double lambda, std::span<const double> col_means) {
    if (!(lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
    if (lambda == 0.0) return;
    for (double ybar : col_means)
        if (!(lambda < ybar)) throw DomainError("lambda must stay below every column mean");
}

}  // namespace

LikelihoodContext::LikelihoodContext(const CountMatrix& data)
    : LikelihoodContext(data, sufficient_stats(data)) {}

LikelihoodContext::LikelihoodContext(const CountMatrix& data, SufficientStats stats)
    : stats_(std::move(stats)), n_(data.n()), m_(data.m()) {
    lambda_upper_ = stats_.col_means[0];
    for (double v : stats_.col_means)
        if (v < lambda_upper_) lambda_upper_ = v;
    build_tables(data);
}

void LikelihoodContext::build_tables(const CountMatrix& data) {
    offset_.resize(n_ + 1);
    std::size_t total = 0;
    for (int i = 0; i < n_; ++i) {
        offset_[i] = total;
        total += static_cast<std::size_t>(stats_.row_min[i]) + 1;
    }
    offset_[n_] = total;
    base_.resize(total);
    shift_.resize(total);
    for (int i = 0; i < n_; ++i) {
        auto row = data.row(i);
        const int ymin = stats_.row_min[i];
        double* b = base_.data() + offset_[i];
        double* s = shift_.data() + offset_[i];
        for (int u = 0; u <= ymin; ++u) {
            double acc = -log_factorial(u);
            for (int j = 0; j < m_; ++j) acc -= log_factorial(row[j] - u);
            b[u] = acc;
        }
        for (int u = 0; u + 1 <= ymin; ++u) {
            double acc = -log_factorial(u);
            for (int j = 0; j < m_; ++j) acc -= log_factorial(row[j] - 1 - u);
            s[u] = acc;
        }
    }
}

double LikelihoodContext::log_S(int i, double log_xi, bool lambda_is_zero) const {
    const double* b = base_.data() + offset_[i];
    if (lambda_is_zero) return b[0];
    return log_sum_exp_series(log_xi, b, offset_[i + 1] - offset_[i]);
}

double LikelihoodContext::log_S_shifted(int i, double log_xi, bool lambda_is_zero) const {
    const double* s = shift_.data() + offset_[i];
    if (lambda_is_zero) return s[0];
    return log_sum_exp_series(log_xi, s, offset_[i + 1] - offset_[i] - 1);
}

double xi(double lambda, std::span<const double> col_means) {
    check_lambda_domain(lambda, col_means);
    if (lambda == 0.0) return 0.0;
    double denom = 1.0;
    for (double ybar : col_means) denom *= ybar - lambda;
    return lambda / denom;
}

double log_S_row(double lambda, std::span<const int> row, std::span<const double> col_means) {
    check_lambda_domain(lambda, col_means);
    int ymin = row[0];
    for (int v : row)
        if (v < ymin) ymin = v;
    if (lambda == 0.0) {
        double acc = 0.0;
        for (int v : row) acc -= log_factorial(v);
        return acc;
    }
    double log_xi = std::log(lambda);
    for (double ybar : col_means) log_xi -= std::log(ybar - lambda);
    std::vector<double> coeff(static_cast<std::size_t>(ymin) + 1);
    for (int u = 0; u <= ymin; ++u) {
        double acc = -log_factorial(u);
        for (int v : row) acc -= log_factorial(v - u);
        coeff[u] = acc;
    }
    return log_sum_exp_series(log_xi, coeff.data(), coeff.size());
}

double loglik(double lambda, const LikelihoodContext& ctx) {
    const auto& ybar = ctx.stats().col_means;
    check_lambda_domain(lambda, ybar);
    const int n = ctx.n();
    const int m = ctx.m();
    double col_sum = 0.0;
    double log_term = 0.0;
    for (double v : ybar) {
        col_sum += v;
        if (v > 0.0) log_term += v * std::log(v - lambda);  // 0*log(0) = 0 for empty columns
    }
    double value = n * ((m - 1) * lambda - col_sum) + n * log_term;
    const bool zero = (lambda == 0.0);
    double log_xi = 0.0;
    if (!zero) {
        log_xi = std::log(lambda);
        for (double v : ybar) log_xi -= std::log(v - lambda);
    }
    for (int i = 0; i < n; ++i) value += ctx.log_S(i, log_xi, zero);
    return value;
}

double dloglik(double lambda, const LikelihoodContext& ctx) {
    const auto& ybar = ctx.stats().col_means;
    check_lambda_domain(lambda, ybar);
    const int n = ctx.n();
    double inv_sum = 0.0;
    double log_prod = 0.0;
    for (double v : ybar) {
        inv_sum += 1.0 / (v - lambda);
        log_prod += std::log(v - lambda);
    }
    const bool zero = (lambda == 0.0);
    const double log_xi = zero ? 0.0 : std::log(lambda) - log_prod;
    double ratio_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        if (ctx.stats().row_min[i] <= 0) continue;
        double ls = ctx.log_S(i, log_xi, zero);
        double lss = ctx.log_S_shifted(i, log_xi, zero);
        ratio_sum += std::exp(lss - ls);
    }
    double lead = 1.0 + lambda * inv_sum;
    return lead * (-n + std::exp(-log_prod) * ratio_sum);
}

double loglik_null(const CountMatrix& data) {
    data.validate();
    const int n = data.n();
    const int m = data.m();
    std::vector<double> ybar(m, 0.0);
    double lf_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        auto row = data.row(i);
        for (int j = 0; j < m; ++j) {
            ybar[j] += row[j];
            lf_sum += log_factorial(row[j]);
        }
    }
    double value = 0.0;
    for (int j = 0; j < m; ++j) {
        ybar[j] /= n;
        value += -n * ybar[j];
        if (ybar[j] > 0.0) value += n * ybar[j] * std::log(ybar[j]);
    }
    return value - lf_sum;
}

}  // namespace poislrt
