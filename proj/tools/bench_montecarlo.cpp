// Benchmark: serial reference vs OpenMP replication kernel on the same
// experiment, verifying identical estimates along the way.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "poislrt/montecarlo.hpp"

using namespace poislrt;

namespace {

double wall_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

bool rows_equal(const ExperimentResult& a, const ExperimentResult& b) {
    if (a.rows.size() != b.rows.size()) return false;
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        const auto& x = a.rows[i];
        const auto& y = b.rows[i];
        if (x.two_e_q != y.two_e_q || x.var_q != y.var_q || x.pi_hat != y.pi_hat) return false;
        for (std::size_t s = 0; s < x.schemes.size(); ++s)
            if (x.schemes[s].erp != y.schemes[s].erp) return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    long reps = 20000;
    if (argc > 1) reps = std::stol(argv[1]);

    ExperimentConfig cfg;
    cfg.case_id = "bench";
    cfg.mu = {1.0, 1.0};
    cfg.lambda = 0.0;
    cfg.n_grid = {60};
    cfg.replications = reps;
    cfg.alpha = 0.05;
    cfg.seed = 20240901;
    cfg.schemes = {SchemeKind::Asymptotic, SchemeKind::BartlettPlugin};

    std::printf("replications: %ld, n = %d, mu = (1,1)\n", reps, cfg.n_grid[0]);

    double t0 = wall_seconds();
    ExperimentResult serial = run_null_experiment_serial(cfg);
    double t_serial = wall_seconds() - t0;
    std::printf("%-22s %8.3f s\n", "serial reference", t_serial);

    int max_threads = 1;
#ifdef _OPENMP
    max_threads = omp_get_max_threads();
#endif
    for (int threads = 1; threads <= max_threads; ++threads) {
        t0 = wall_seconds();
        ExperimentResult parallel = run_null_experiment(cfg, threads);
        double t_par = wall_seconds() - t0;
        std::printf("omp threads = %-8d %8.3f s   speedup %.2fx   results %s\n", threads, t_par,
                    t_serial / t_par, rows_equal(serial, parallel) ? "identical" : "DIFFER");
        if (!rows_equal(serial, parallel)) return 1;
    }
    return 0;
}
