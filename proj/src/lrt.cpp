#include "poislrt/lrt.hpp"

#include <cmath>
#include <stdexcept>

#include "poislrt/bartlett.hpp"
#include "poislrt/errors.hpp"
#include "poislrt/numeric.hpp"

namespace poislrt {

namespace {
constexpr double kNoiseFloor = -1e-8;
}

const char* scheme_name(SchemeKind kind) {
    switch (kind) {
        case SchemeKind::Asymptotic: return "asymptotic";
        case SchemeKind::BartlettPlugin: return "bartlett";
        case SchemeKind::BartlettTrue: return "bartlett-true";
        case SchemeKind::BartlettTruePi: return "bartlett-true-pi";
    }
    return "?";
}

std::optional<SchemeKind> scheme_from_name(const std::string& name) {
    if (name == "asymptotic") return SchemeKind::Asymptotic;
    if (name == "bartlett") return SchemeKind::BartlettPlugin;
    if (name == "bartlett-true") return SchemeKind::BartlettTrue;
    if (name == "bartlett-true-pi") return SchemeKind::BartlettTruePi;
    return std::nullopt;
}

LrtResult lr_statistic(const LikelihoodContext& ctx) {
    LrtResult res;
    res.n = ctx.n();
    res.m = ctx.m();
    MleResult fit = fit_lambda(ctx);
    res.lambda_hat = fit.lambda_hat;
    if (fit.at_boundary) {
        res.q_n = 0.0;
        return res;
    }
    double q = 2.0 * (fit.loglik_at_hat - loglik(0.0, ctx));
    if (q < 0.0) {
        if (q < kNoiseFloor)
            throw std::logic_error("lr_statistic: Q_n below the solver noise floor");
        q = 0.0;
    }
    res.q_n = q;
    return res;
}

LrtResult lr_statistic(const CountMatrix& data) {
    LikelihoodContext ctx(data);
    return lr_statistic(ctx);
}

double critical_value(const CriticalValueScheme& scheme, int n, const SufficientStats* stats) {
    if (!(scheme.alpha > 0.0 && scheme.alpha < 1.0))
        throw DomainError("critical_value: alpha must lie in (0,1)");
    if (n < 1) throw DomainError("critical_value: n must be positive");
    switch (scheme.kind) {
        case SchemeKind::Asymptotic:
            return chi2_1_upper_quantile(2.0 * scheme.alpha);
        case SchemeKind::BartlettPlugin: {
            if (stats == nullptr)
                throw DomainError("critical_value: plug-in scheme needs sufficient statistics");
            double rc = R_hat(*stats).R_corr;
            return (1.0 + rc / n) * chi2_1_upper_quantile(2.0 * scheme.alpha);
        }
        case SchemeKind::BartlettTrue: {
            double rc = R_general(scheme.true_mu).R_corr;
            return (1.0 + rc / n) * chi2_1_upper_quantile(2.0 * scheme.alpha);
        }
        case SchemeKind::BartlettTruePi: {
            if (!(scheme.pi > 0.0 && scheme.pi <= 1.0))
                throw DomainError("critical_value: pi must lie in (0,1]");
            double tail = scheme.alpha / scheme.pi;
            if (!(tail < 1.0)) throw DomainError("critical_value: alpha/pi must stay below 1");
            double rc = R_general(scheme.true_mu).R_corr;
            return (1.0 + rc / n) * chi2_1_upper_quantile(tail);
        }
    }
    throw DomainError("critical_value: unknown scheme");
}

TestDecision run_test(const CountMatrix& data, const CriticalValueScheme& scheme) {
    LikelihoodContext ctx(data);
    const SufficientStats& stats = ctx.stats();
    TestDecision dec;
    LrtResult lr = lr_statistic(ctx);
    dec.q_n = lr.q_n;
    dec.lambda_hat = lr.lambda_hat;

    // The plug-in factor is unavailable for degenerate data and meaningless
    // when 1 + R_corr/n turns nonpositive (strongly negative corrections at
    // tiny n); both cases fall back to the uncorrected scale.
    bool have_plugin = true;
    for (double v : stats.col_means)
        if (!(v > 0.0)) have_plugin = false;
    double plugin_factor = 1.0;
    if (have_plugin) {
        plugin_factor = 1.0 + R_hat(stats).R_corr / lr.n;
        if (!(plugin_factor > 0.0)) {
            have_plugin = false;
            plugin_factor = 1.0;
        }
    }

    CriticalValueScheme effective = scheme;
    if (scheme.kind == SchemeKind::BartlettPlugin && !have_plugin) {
        effective.kind = SchemeKind::Asymptotic;
        dec.asymptotic_fallback = true;
    }
    if (effective.kind == SchemeKind::BartlettTrue ||
        effective.kind == SchemeKind::BartlettTruePi) {
        if (!(1.0 + R_general(effective.true_mu).R_corr / lr.n > 0.0)) {
            effective.kind = SchemeKind::Asymptotic;
            dec.asymptotic_fallback = true;
        }
    }
    dec.critical = critical_value(effective, lr.n, have_plugin ? &stats : nullptr);
    dec.reject = dec.q_n > dec.critical;

    if (dec.q_n == 0.0) {
        dec.p_value = 1.0;
    } else {
        dec.p_value = 0.5 * chi2_1_upper_tail(dec.q_n / plugin_factor);
    }
    return dec;
}

}  // namespace poislrt
