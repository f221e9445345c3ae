#ifndef POISLRT_MONTECARLO_HPP
#define POISLRT_MONTECARLO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "poislrt/lrt.hpp"
#include "poislrt/model.hpp"

namespace poislrt {

struct ExperimentConfig {
    std::string case_id = "case0";
    std::vector<double> mu;
    double lambda = 0.0;        // 0 for size studies
    std::vector<int> n_grid;    // nonempty, ascending
    long replications = 100000; // >= 100
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::vector<SchemeKind> schemes;

    void validate() const;
};

struct SchemeEstimate {
    SchemeKind scheme;
    double erp = 0.0;
    double erp_stderr = 0.0;
};

struct ExperimentRow {
    int n = 0;
    double two_e_q = 0.0;       // 2 * mean(Q_n)
    double two_e_q_stderr = 0.0;
    double var_q = 0.0;
    double var_q_stderr = 0.0;
    double pi_hat = 0.0;        // fraction of replications with lambda_hat > 0
    double pi_hat_stderr = 0.0;
    long failures = 0;
    std::vector<SchemeEstimate> schemes;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<ExperimentRow> rows;
};

namespace detail {
// Outcome of one simulated replication; the Monte Carlo estimands are pure
// functions of these per-index records, so aggregation order is fixed no
// matter how the loop was scheduled.
struct ReplicationOutcome {
    double q_n = 0.0;
    bool positive = false;       // lambda_hat > 0
    double r_corr_hat = 0.0;     // plug-in correction, 0 when unavailable
    bool plugin_ok = false;
    bool failed = false;
};

ReplicationOutcome simulate_replication(const ModelParams& params, int n, RngState rng);

// Stream index for replication r of the grid entry with index n_index.
std::uint64_t replication_stream(int n_index, long r);
}  // namespace detail

// Simulates the null-distribution summaries and empirical rejection
// probabilities over the n grid. Replications run in parallel (OpenMP when
// available); identical (config) input yields identical output for any
// thread count. Aborts with ConvergenceError when more than 0.1% of the
// replications fail.
ExperimentResult run_null_experiment(const ExperimentConfig& config, int threads = 0);

// Single-threaded reference implementation kept for equivalence testing and
// benchmarking against the parallel kernel.
ExperimentResult run_null_experiment_serial(const ExperimentConfig& config);

// One CSV row per (n, scheme); byte-identical output for identical results.
// Columns: case_id, m, mu_list, lambda, n, scheme, replications, two_e_q,
// var_q, pi_hat, erp, erp_stderr, failures.
void summarize_to_csv(const ExperimentResult& result, std::ostream& out);
void summarize_to_csv(const ExperimentResult& result, const std::string& path);

}  // namespace poislrt

#endif
