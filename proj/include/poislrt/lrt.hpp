#ifndef POISLRT_LRT_HPP
#define POISLRT_LRT_HPP

#include <optional>
#include <string>
#include <vector>

#include "poislrt/mle.hpp"
#include "poislrt/model.hpp"

namespace poislrt {

struct LrtResult {
    double q_n = 0.0;        // 2(log L1 - log L0), clamped at 0
    double lambda_hat = 0.0;
    int n = 0;
    int m = 0;
};

enum class SchemeKind { Asymptotic, BartlettPlugin, BartlettTrue, BartlettTruePi };

// Critical-value schemes, from crudest to sharpest:
//   Asymptotic      chi2_1(2 alpha)
//   BartlettPlugin  (1 + R_corr_hat / n) chi2_1(2 alpha), plug-in at the means
//   BartlettTrue    (1 + R_corr(mu) / n) chi2_1(2 alpha), known rates
//   BartlettTruePi  (1 + R_corr(mu) / n) chi2_1(alpha / pi)
struct CriticalValueScheme {
    SchemeKind kind = SchemeKind::BartlettPlugin;
    double alpha = 0.05;
    double pi = 0.5;               // used by BartlettTruePi only
    std::vector<double> true_mu;   // required by BartlettTrue / BartlettTruePi
};

struct TestDecision {
    bool reject = false;
    double q_n = 0.0;
    double critical = 0.0;
    double p_value = 1.0;
    double lambda_hat = 0.0;
    // Set when a zero column mean forced the asymptotic critical value in
    // place of a Bartlett plug-in.
    bool asymptotic_fallback = false;
};

const char* scheme_name(SchemeKind kind);
std::optional<SchemeKind> scheme_from_name(const std::string& name);

// Q_n = 2(loglik(lambda_hat) - loglik_null), zero whenever lambda_hat = 0.
// Values in (-1e-8, 0) clamp to zero; anything more negative signals an
// internal error and throws.
LrtResult lr_statistic(const CountMatrix& data);
LrtResult lr_statistic(const LikelihoodContext& ctx);

// stats is needed by BartlettPlugin only (pass the dataset's statistics).
double critical_value(const CriticalValueScheme& scheme, int n,
                      const SufficientStats* stats = nullptr);

// Full decision record. The p-value inverts the plug-in corrected mixture
// null: p = 1 when q_n = 0, else 0.5 * P(chi2_1 > q_n / (1 + R_corr_hat/n)).
// Ties (q_n == critical) do not reject.
TestDecision run_test(const CountMatrix& data, const CriticalValueScheme& scheme);

}  // namespace poislrt

#endif
