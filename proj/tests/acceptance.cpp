// Acceptance suite: one test case per release criterion, each printing a
// single PASS/FAIL line. Run the whole binary or filter with
// --test-case="criterion N*".

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "poislrt/bartlett.hpp"
#include "poislrt/lrt.hpp"
#include "poislrt/mle.hpp"
#include "poislrt/montecarlo.hpp"
#include "poislrt/numeric.hpp"

using namespace poislrt;

namespace {

void report(int criterion, const char* label, bool pass) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, label);
    std::fflush(stdout);
}

std::vector<double> random_mu(RngState& rng, int m, double lo = 0.5, double hi = 20.0) {
    std::vector<double> mu(m);
    for (int j = 0; j < m; ++j) mu[j] = lo + (hi - lo) * rng.uniform01();
    return mu;
}

// One-sample Kolmogorov-Smirnov distance against the chi2_1 CDF.
double ks_distance_chi21(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double cdf = 1.0 - chi2_1_upper_tail(values[i]);
        double lo = static_cast<double>(i) / n;
        double hi = static_cast<double>(i + 1) / n;
        d = std::max(d, std::max(std::fabs(cdf - lo), std::fabs(hi - cdf)));
    }
    return d;
}

}  // namespace

TEST_CASE("criterion 1: m=2 formula agreement") {
    bool pass = true;

    auto ctx = NotationContext::make({1.0, 1.0});
    auto k = k_blocks(ctx);
    pass &= std::fabs(k.total - (-68.0)) <= 1e-9;
    pass &= std::fabs(ctx.d10 - 1.0) <= 1e-12;
    pass &= std::fabs(R_general({1.0, 1.0}).R - 17.0 / 6.0) <= 1e-9;
    pass &= std::fabs(R_m2(1.0, 1.0).R - 17.0 / 6.0) <= 1e-12;

    RngState rng(10101, 0);
    for (int i = 0; i < 100; ++i) {
        auto mu = random_mu(rng, 2);
        double a = R_general(mu).R;
        double b = R_m2(mu[0], mu[1]).R;
        pass &= std::fabs(a - b) <= 1e-9 * std::fabs(b);
    }
    report(1, "m=2 formula agreement (R_general vs closed form, K=-68 at unit rates)", pass);
    CHECK(pass);
}

TEST_CASE("criterion 2: rho-chain oracle certifies the K transcription") {
    bool pass = true;
    RngState rng(20202, 0);
    for (int m : {2, 3, 4}) {
        for (int i = 0; i < 200; ++i) {
            auto mu = random_mu(rng, m);
            double a = R_general(mu).R;
            double b = R_via_rho_chain(mu).R;
            if (std::fabs(a - b) > 1e-8 * std::max(1.0, std::fabs(a))) pass = false;
        }
    }
    report(2, "rho-chain equals K formula to 1e-8 for m in {2,3,4}, 200 draws each", pass);
    CHECK(pass);
}

TEST_CASE("criterion 3: null asymptotics at mu=(20,20), n=140") {
    ExperimentConfig cfg;
    cfg.case_id = "c3";
    cfg.mu = {20.0, 20.0};
    cfg.lambda = 0.0;
    cfg.n_grid = {140};
    cfg.replications = 100000;
    cfg.alpha = 0.05;
    cfg.seed = 303;
    cfg.schemes = {};
    auto result = run_null_experiment(cfg);
    const auto& row = result.rows[0];

    bool pass_pi = row.pi_hat >= 0.49 && row.pi_hat <= 0.51;
    bool pass_mean = row.two_e_q >= 0.95 && row.two_e_q <= 1.05;
    bool pass_var = row.var_q >= 1.15 && row.var_q <= 1.35;

    // KS of the positive part over the first 1e4 replications
    std::vector<double> positive;
    for (long r = 0; r < 10000; ++r) {
        RngState rng(cfg.seed, detail::replication_stream(0, r));
        auto out = detail::simulate_replication(ModelParams{0.0, cfg.mu}, 140, rng);
        if (!out.failed && out.q_n > 0.0) positive.push_back(out.q_n);
    }
    double d = ks_distance_chi21(positive);
    double ks_crit = 1.9494746035 / std::sqrt(static_cast<double>(positive.size()));
    bool pass_ks = d <= ks_crit;

    std::printf("  pi_hat=%.4f  2E(Q)=%.4f  Var(Q)=%.4f  KS=%.4f (crit %.4f, N=%zu)\n",
                row.pi_hat, row.two_e_q, row.var_q, d, ks_crit, positive.size());
    bool pass = pass_pi && pass_mean && pass_var && pass_ks;
    report(3, "pi in [.49,.51], 2E(Q) in [.95,1.05], Var(Q) in [1.15,1.35], KS at 0.001", pass);
    CHECK(pass_pi);
    CHECK(pass_mean);
    CHECK(pass_var);
    CHECK(pass_ks);
}

TEST_CASE("criterion 4: small-sample size ordering at mu=(1,1), n=20") {
    ExperimentConfig cfg;
    cfg.case_id = "c4";
    cfg.mu = {1.0, 1.0};
    cfg.lambda = 0.0;
    cfg.n_grid = {20};
    cfg.replications = 100000;
    cfg.alpha = 0.05;
    cfg.seed = 404;
    cfg.schemes = {SchemeKind::Asymptotic, SchemeKind::BartlettPlugin, SchemeKind::BartlettTrue};
    auto result = run_null_experiment(cfg);
    const auto& row = result.rows[0];
    double erp_asym = row.schemes[0].erp;
    double erp_plugin = row.schemes[1].erp;
    double erp_true = row.schemes[2].erp;
    double se = row.schemes[0].erp_stderr;

    bool pass_asym = erp_asym > 0.05;
    bool pass_plugin = erp_plugin < 0.05;
    bool pass_order = std::fabs(erp_true - 0.05) <= std::fabs(erp_asym - 0.05) + 3.0 * se;
    std::printf("  erp: asymptotic=%.4f  plug-in=%.4f  true=%.4f  (stderr %.4f)\n", erp_asym,
                erp_plugin, erp_true, se);
    bool pass = pass_asym && pass_plugin && pass_order;
    report(4, "erp(asym) > 5%, erp(plug-in) < 5%, |erp(true)-5%| within ordering band", pass);
    CHECK(pass_asym);
    CHECK(pass_plugin);
    CHECK(pass_order);
}

TEST_CASE("criterion 5: dimension-3 positive fraction stays below one half") {
    ExperimentConfig cfg;
    cfg.case_id = "c5";
    cfg.mu = {1.0, 1.0, 1.0};
    cfg.lambda = 0.0;
    cfg.n_grid = {60};
    cfg.replications = 100000;
    cfg.alpha = 0.05;
    cfg.seed = 505;
    cfg.schemes = {};
    auto result = run_null_experiment(cfg);
    double pi_hat = result.rows[0].pi_hat;
    std::printf("  pi_hat=%.4f\n", pi_hat);
    bool pass = pi_hat < 0.49;
    report(5, "pi_hat < 0.49 at m=3, mu=(1,1,1), n=60", pass);
    CHECK(pass);
}

TEST_CASE("criterion 6: MLE boundary law and derivative consistency") {
    bool pass_screen = true;
    bool pass_grid = true;
    bool pass_deriv = true;
    int rejected_ties = 0;
    int multimodal_events = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        RngState rng(606, static_cast<std::uint64_t>(rep));
        ModelParams params{rng.uniform01() < 0.5 ? 0.0 : 0.6 * rng.uniform01(),
                           {0.5 + 2.5 * rng.uniform01(), 0.5 + 2.5 * rng.uniform01()}};
        int n = 10 + static_cast<int>(rng.uniform01() * 40);
        CountMatrix data = sample_dataset(params, n, rng);
        LikelihoodContext ctx(data);
        auto res = fit_lambda(ctx);
        bool screen = positivity_screen(ctx.stats());
        if ((res.lambda_hat > 0.0) != screen) pass_screen = false;

        double up = ctx.lambda_upper();
        double base = loglik(0.0, ctx);
        double best = base;
        double best_lam = 0.0;
        if (up > 0.0) {
            for (int g = 1; g < 1024; ++g) {
                double lam = up * g / 1024.0 * (1.0 - 1e-9);
                double v = loglik(lam, ctx);
                if (v > best) {
                    best = v;
                    best_lam = lam;
                }
            }
        }
        if (std::fabs(best - base) < 1e-9 && best_lam > 0.0) {
            ++rejected_ties;
        } else if ((best_lam > 0.0) != screen) {
            // The boundary rule follows the sign of l'(0). When l' is
            // negative at the origin yet the scan still finds a higher value,
            // the origin is a local maximum and the surface is genuinely
            // multimodal; the rule and the global argmax then disagree by
            // construction. Count such datasets separately and keep a tight
            // cap so an actual boundary-logic bug still fails here.
            bool origin_is_local_max = !screen && dloglik(0.0, ctx) <= 0.0;
            if (origin_is_local_max && best - base >= 1e-9)
                ++multimodal_events;
            else
                pass_grid = false;
        }

        if (up > 0.0) {
            double lam = 0.5 * up;
            double h = 1e-6 * up;
            double num = (loglik(lam + h, ctx) - loglik(lam - h, ctx)) / (2.0 * h);
            double ana = dloglik(lam, ctx);
            if (std::fabs(ana - num) > 1e-6 * (1.0 + std::fabs(ana))) pass_deriv = false;
        }
    }
    std::printf("  ties excluded: %d, multimodal datasets excluded: %d of 1000\n", rejected_ties,
                multimodal_events);
    bool pass_rate = multimodal_events <= 10;
    bool pass = pass_screen && pass_grid && pass_deriv && pass_rate;
    report(6, "lambda_hat > 0 iff moment screen, grid-scan agreement, FD derivative check", pass);
    CHECK(pass_screen);
    CHECK(pass_grid);
    CHECK(pass_deriv);
    CHECK(pass_rate);
}

TEST_CASE("criterion 7: numeric kernels") {
    bool pass_quantile = std::fabs(chi2_1_upper_quantile(0.10) - 2.705543) <= 1e-6 &&
                         std::fabs(chi2_1_upper_quantile(0.05) - 3.841459) <= 1e-6;
    bool pass_roundtrip = true;
    for (double p : {0.001, 0.01, 0.05, 0.1, 0.5, 0.9})
        if (std::fabs(chi2_1_upper_tail(chi2_1_upper_quantile(p)) - p) > 1e-9)
            pass_roundtrip = false;

    // Goodness of fit with cells pooled below an expected count of 10 per
    // million draws; critical values frozen from reference chi-square tables.
    struct GofCase {
        double mean;
        int df;
        double crit_001;
    };
    const GofCase cases[] = {{0.5, 7, 24.321886}, {1.0, 8, 26.124482},
                             {5.0, 18, 42.312396}, {20.0, 39, 72.054663}};
    bool pass_gof = true;
    for (const auto& c : cases) {
        // deterministic binning from the model pmf
        std::vector<double> pmf;
        int k = 0;
        for (;;) {
            double lp = k * std::log(c.mean) - c.mean - log_factorial(k);
            pmf.push_back(std::exp(lp));
            if (k > c.mean && pmf.back() < 1e-9) break;
            ++k;
        }
        int lo = -1, hi = -1;
        for (int i = 0; i < static_cast<int>(pmf.size()); ++i)
            if (pmf[i] >= 1e-5) {
                if (lo < 0) lo = i;
                hi = i;
            }
        const int nbins = (hi - lo + 1) + (lo > 0 ? 1 : 0) + 1;
        REQUIRE(nbins - 1 == c.df);
        std::vector<double> expected(nbins, 0.0);
        std::vector<long> observed(nbins, 0);
        const long draws = 1000000;
        auto bin_of = [&](int value) {
            if (value < lo) return 0;
            if (value > hi) return nbins - 1;
            return value - lo + (lo > 0 ? 1 : 0);
        };
        for (int i = 0; i < static_cast<int>(pmf.size()); ++i)
            expected[bin_of(i)] += pmf[i] * draws;
        // right-tail remainder beyond the computed pmf range
        double tail = draws;
        for (double p : pmf) tail -= p * draws;
        expected[nbins - 1] += std::max(0.0, tail);

        RngState rng(707, static_cast<std::uint64_t>(c.mean * 100));
        for (long i = 0; i < draws; ++i)
            ++observed[bin_of(static_cast<int>(poisson_draw(rng, c.mean)))];
        double stat = 0.0;
        for (int b = 0; b < nbins; ++b) {
            double d = observed[b] - expected[b];
            stat += d * d / expected[b];
        }
        std::printf("  gof mean=%-5g df=%-3d stat=%8.3f crit=%.3f\n", c.mean, c.df, stat,
                    c.crit_001);
        if (!(stat <= c.crit_001)) pass_gof = false;
    }
    bool pass = pass_quantile && pass_roundtrip && pass_gof;
    report(7, "chi2 quantiles, round trip to 1e-9, Poisson sampler GOF at 0.001", pass);
    CHECK(pass_quantile);
    CHECK(pass_roundtrip);
    CHECK(pass_gof);
}

TEST_CASE("criterion 8: experiment reproducibility across worker counts") {
#ifndef POISLRT_CLI_PATH
    report(8, "cli binary path missing", false);
    CHECK(false);
#else
    auto tmp = [](const std::string& name) {
        return std::string(std::getenv("TMPDIR") ? std::getenv("TMPDIR") : "/tmp") + "/" + name;
    };
    std::string cfg_path = tmp("accept_exp.cfg");
    {
        std::ofstream cfg(cfg_path);
        cfg << "case_id = c8\nmu = 1,1\nlambda = 0\nn_grid = 20,40\nreplications = 5000\n"
               "alpha = 0.05\nseed = 808\nschemes = asymptotic,bartlett,bartlett-true,"
               "bartlett-true-pi\n";
    }
    std::string out1 = tmp("accept_exp1.csv");
    std::string out2 = tmp("accept_exp2.csv");
    std::string cli = POISLRT_CLI_PATH;
    int rc1 = std::system(
        (cli + " experiment --config " + cfg_path + " --out " + out1 + " --threads 1").c_str());
    int rc2 = std::system(
        (cli + " experiment --config " + cfg_path + " --out " + out2 + " --threads 2").c_str());
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string a = slurp(out1);
    bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == slurp(out2);
    report(8, "byte-identical experiment CSV for 1 and 2 worker threads", pass);
    CHECK(pass);
#endif
}
