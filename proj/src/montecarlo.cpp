#include "poislrt/montecarlo.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "poislrt/bartlett.hpp"
#include "poislrt/errors.hpp"
#include "poislrt/numeric.hpp"

namespace poislrt {

void ExperimentConfig::validate() const {
    ModelParams params{lambda, mu};
    params.validate();
    if (n_grid.empty()) throw DomainError("ExperimentConfig: n_grid must be nonempty");
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (n_grid[i] < 1) throw DomainError("ExperimentConfig: sample sizes must be positive");
        if (i > 0 && n_grid[i] <= n_grid[i - 1])
            throw DomainError("ExperimentConfig: n_grid must be strictly ascending");
    }
    if (replications < 100) throw DomainError("ExperimentConfig: need at least 100 replications");
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("ExperimentConfig: alpha must lie in (0,1)");
}

namespace detail {

std::uint64_t replication_stream(int n_index, long r) {
    return (static_cast<std::uint64_t>(n_index) << 40) ^ static_cast<std::uint64_t>(r);
}

ReplicationOutcome simulate_replication(const ModelParams& params, int n, RngState rng) {
    ReplicationOutcome out;
    try {
        CountMatrix data = sample_dataset(params, n, rng);
        LikelihoodContext ctx(data);
        LrtResult lr = lr_statistic(ctx);
        out.q_n = lr.q_n;
        out.positive = lr.lambda_hat > 0.0;
        bool plugin = true;
        for (double v : ctx.stats().col_means)
            if (!(v > 0.0)) plugin = false;
        if (plugin) {
            out.r_corr_hat = R_hat(ctx.stats()).R_corr;
            out.plugin_ok = true;
        }
    } catch (const std::exception&) {
        out.failed = true;
    }
    return out;
}

}  // namespace detail

namespace {

ExperimentRow aggregate_rows(const ExperimentConfig& config, int n,
                             const std::vector<detail::ReplicationOutcome>& reps) {
    ExperimentRow row;
    row.n = n;
    long ok = 0;
    long positives = 0;
    double q_sum = 0.0;
    for (const auto& rep : reps) {
        if (rep.failed) {
            ++row.failures;
            continue;
        }
        ++ok;
        q_sum += rep.q_n;
        if (rep.positive) ++positives;
    }
    const long total = static_cast<long>(reps.size());
    if (row.failures * 1000 > total)
        throw ConvergenceError("run_null_experiment: more than 0.1% replication failures",
                               static_cast<double>(row.failures), static_cast<double>(total));
    const double mean_q = q_sum / ok;
    double m2 = 0.0, m4 = 0.0;
    for (const auto& rep : reps) {
        if (rep.failed) continue;
        double d = rep.q_n - mean_q;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    const double var_q = m2 / (ok - 1);
    row.two_e_q = 2.0 * mean_q;
    row.two_e_q_stderr = 2.0 * std::sqrt(var_q / ok);
    row.var_q = var_q;
    row.var_q_stderr = std::sqrt(std::max(0.0, m4 / ok - var_q * var_q) / ok);
    row.pi_hat = static_cast<double>(positives) / ok;
    row.pi_hat_stderr = std::sqrt(row.pi_hat * (1.0 - row.pi_hat) / ok);

    const double chi_2a = chi2_1_upper_quantile(2.0 * config.alpha);
    double r_corr_true = 0.0;
    bool need_true = false;
    for (SchemeKind s : config.schemes)
        if (s == SchemeKind::BartlettTrue || s == SchemeKind::BartlettTruePi) need_true = true;
    if (need_true) r_corr_true = R_general(config.mu).R_corr;

    for (SchemeKind scheme : config.schemes) {
        double critical = 0.0;
        bool per_rep_critical = false;
        switch (scheme) {
            case SchemeKind::Asymptotic:
                critical = chi_2a;
                break;
            case SchemeKind::BartlettPlugin:
                per_rep_critical = true;
                break;
            case SchemeKind::BartlettTrue:
                critical = (1.0 + r_corr_true / n) * chi_2a;
                break;
            case SchemeKind::BartlettTruePi: {
                double tail = config.alpha / row.pi_hat;
                if (!(tail < 1.0))
                    throw DomainError("run_null_experiment: alpha/pi_hat reached 1");
                critical = (1.0 + r_corr_true / n) * chi2_1_upper_quantile(tail);
                break;
            }
        }
        long rejections = 0;
        for (const auto& rep : reps) {
            if (rep.failed) continue;
            double crit = critical;
            if (per_rep_critical)
                crit = rep.plugin_ok ? (1.0 + rep.r_corr_hat / n) * chi_2a : chi_2a;
            if (rep.q_n > crit) ++rejections;
        }
        SchemeEstimate est;
        est.scheme = scheme;
        est.erp = static_cast<double>(rejections) / ok;
        est.erp_stderr = std::sqrt(est.erp * (1.0 - est.erp) / ok);
        row.schemes.push_back(est);
    }
    return row;
}

ExperimentResult run_impl(const ExperimentConfig& config, int threads, bool parallel) {
    config.validate();
    ExperimentResult result;
    result.config = config;
    const ModelParams params{config.lambda, config.mu};
    const long reps = config.replications;

    for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
        const int n = config.n_grid[ni];
        std::vector<detail::ReplicationOutcome> outcomes(reps);
        if (parallel) {
#ifdef _OPENMP
            if (threads > 0) omp_set_num_threads(threads);
#pragma omp parallel for schedule(static)
#endif
            for (long r = 0; r < reps; ++r) {
                RngState rng(config.seed, detail::replication_stream(static_cast<int>(ni), r));
                outcomes[r] = detail::simulate_replication(params, n, rng);
            }
        } else {
            for (long r = 0; r < reps; ++r) {
                RngState rng(config.seed, detail::replication_stream(static_cast<int>(ni), r));
                outcomes[r] = detail::simulate_replication(params, n, rng);
            }
        }
        result.rows.push_back(aggregate_rows(config, n, outcomes));
    }
    return result;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

ExperimentResult run_null_experiment(const ExperimentConfig& config, int threads) {
    return run_impl(config, threads, true);
}

ExperimentResult run_null_experiment_serial(const ExperimentConfig& config) {
    return run_impl(config, 1, false);
}

void summarize_to_csv(const ExperimentResult& result, std::ostream& out) {
    out << "case_id,m,mu_list,lambda,n,scheme,replications,two_e_q,var_q,pi_hat,"
           "erp,erp_stderr,failures\n";
    const auto& cfg = result.config;
    std::string mu_list;
    for (std::size_t j = 0; j < cfg.mu.size(); ++j) {
        if (j) mu_list += ';';
        mu_list += format_double(cfg.mu[j]);
    }
    for (const auto& row : result.rows) {
        for (const auto& est : row.schemes) {
            out << cfg.case_id << ',' << cfg.mu.size() << ',' << mu_list << ','
                << format_double(cfg.lambda) << ',' << row.n << ',' << scheme_name(est.scheme)
                << ',' << cfg.replications << ',' << format_double(row.two_e_q) << ','
                << format_double(row.var_q) << ',' << format_double(row.pi_hat) << ','
                << format_double(est.erp) << ',' << format_double(est.erp_stderr) << ','
                << row.failures << '\n';
        }
    }
}

void summarize_to_csv(const ExperimentResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot open output file: " + path, 0);
    summarize_to_csv(result, out);
    out.flush();
    if (!out) throw CsvError("write failed: " + path, 0);
}

}  // namespace poislrt
