// Command-line front end: run the independence test on CSV count data,
// evaluate correction factors, simulate datasets, and drive experiments.
//
// Exit codes: 0 success, 2 usage or data error, 1 internal error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "poislrt/bartlett.hpp"
#include "poislrt/csv.hpp"
#include "poislrt/errors.hpp"
#include "poislrt/lrt.hpp"
#include "poislrt/montecarlo.hpp"

using nlohmann::json;
using namespace poislrt;

namespace {

std::vector<double> parse_mu_list(const std::string& text) {
    std::vector<double> mu;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
            mu.push_back(v);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--mu", "cannot parse rate '" + tok + "'");
        }
    }
    return mu;
}

int cmd_test(const std::string& input, double alpha, const std::string& scheme_str,
             const std::vector<double>& true_mu, double pi, bool as_json) {
    CountMatrix data = read_count_matrix_file(input);
    auto kind = scheme_from_name(scheme_str);
    if (!kind) {
        std::cerr << "error: unknown scheme '" << scheme_str << "'\n";
        return 2;
    }
    CriticalValueScheme scheme;
    scheme.kind = *kind;
    scheme.alpha = alpha;
    scheme.pi = pi;
    scheme.true_mu = true_mu;
    if ((scheme.kind == SchemeKind::BartlettTrue || scheme.kind == SchemeKind::BartlettTruePi)) {
        if (static_cast<int>(true_mu.size()) != data.m()) {
            std::cerr << "error: scheme '" << scheme_str << "' needs --mu with " << data.m()
                      << " rates\n";
            return 2;
        }
    }
    TestDecision dec = run_test(data, scheme);
    if (dec.asymptotic_fallback)
        std::cerr << "warning: correction unavailable for this data, falling back to the "
                     "asymptotic critical value\n";
    if (as_json) {
        json j{{"n", data.n()},
               {"m", data.m()},
               {"lambda_hat", dec.lambda_hat},
               {"q_n", dec.q_n},
               {"critical", dec.critical},
               {"p_value", dec.p_value},
               {"alpha", alpha},
               {"scheme", scheme_name(scheme.kind)},
               {"reject", dec.reject},
               {"asymptotic_fallback", dec.asymptotic_fallback}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::printf("n            %d\n", data.n());
        std::printf("m            %d\n", data.m());
        std::printf("lambda_hat   %.10g\n", dec.lambda_hat);
        std::printf("Q_n          %.10g\n", dec.q_n);
        std::printf("critical     %.10g  (%s, alpha=%g)\n", dec.critical,
                    scheme_name(scheme.kind), alpha);
        std::printf("p_value      %.10g\n", dec.p_value);
        std::printf("decision     %s\n", dec.reject ? "reject independence" : "do not reject");
    }
    return 0;
}

int cmd_rfactor(const std::vector<double>& mu, bool as_json) {
    if (mu.size() < 2) {
        std::cerr << "error: --mu needs at least two rates\n";
        return 2;
    }
    for (double v : mu)
        if (!(v > 0.0)) {
            std::cerr << "error: rates must be strictly positive\n";
            return 2;
        }
    std::vector<std::pair<std::string, BartlettReport>> reports;
    if (mu.size() == 2) reports.emplace_back("closed-form-m2", R_m2(mu[0], mu[1]));
    reports.emplace_back("k-formula", R_general(mu));
    reports.emplace_back("rho-chain", R_via_rho_chain(mu));
    double lo = reports.front().second.R, hi = lo;
    for (const auto& [name, rep] : reports) {
        lo = std::min(lo, rep.R);
        hi = std::max(hi, rep.R);
    }
    double discrepancy = hi - lo;
    if (as_json) {
        json j;
        j["m"] = mu.size();
        j["mu"] = mu;
        for (const auto& [name, rep] : reports)
            j["methods"][name] = {{"R", rep.R}, {"R_corr", rep.R_corr}};
        j["max_discrepancy"] = discrepancy;
        std::cout << j.dump(2) << '\n';
    } else {
        for (const auto& [name, rep] : reports)
            std::printf("%-15s R = %.10g   R_corr = %.10g\n", name.c_str(), rep.R, rep.R_corr);
        std::printf("max discrepancy across methods: %.3g\n", discrepancy);
    }
    return 0;
}

int cmd_simulate(const std::vector<double>& mu, double lambda, int n, std::uint64_t seed,
                 const std::string& out_path) {
    ModelParams params{lambda, mu};
    params.validate();
    CountMatrix data = sample_dataset(params, n, seed);
    if (out_path.empty() || out_path == "-")
        write_count_matrix(data, std::cout);
    else
        write_count_matrix_file(data, out_path);
    return 0;
}

// Key-value experiment configuration: one `key = value` per line, `#`
// comments. Keys mirror the experiment fields; unknown keys are fatal.
ExperimentConfig parse_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvError("cannot open config file: " + path, 0);
    ExperimentConfig cfg;
    cfg.schemes = {SchemeKind::Asymptotic, SchemeKind::BartlettPlugin, SchemeKind::BartlettTrue,
                   SchemeKind::BartlettTruePi};
    std::vector<std::string> unknown;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
        key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
        if (key.empty()) continue;
        if (eq == std::string::npos) throw CsvError("expected key = value", line_no);
        std::string value = line.substr(eq + 1);
        value.erase(std::remove_if(value.begin(), value.end(), ::isspace), value.end());
        try {
            if (key == "case_id") {
                cfg.case_id = value;
            } else if (key == "mu") {
                cfg.mu.clear();
                std::stringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) cfg.mu.push_back(std::stod(tok));
            } else if (key == "lambda") {
                cfg.lambda = std::stod(value);
            } else if (key == "n_grid") {
                cfg.n_grid.clear();
                std::stringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) cfg.n_grid.push_back(std::stoi(tok));
            } else if (key == "replications") {
                cfg.replications = std::stol(value);
            } else if (key == "alpha") {
                cfg.alpha = std::stod(value);
            } else if (key == "seed") {
                cfg.seed = std::stoull(value);
            } else if (key == "schemes") {
                cfg.schemes.clear();
                std::stringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ',')) {
                    auto kind = scheme_from_name(tok);
                    if (!kind) throw CsvError("unknown scheme '" + tok + "'", line_no);
                    cfg.schemes.push_back(*kind);
                }
            } else {
                unknown.push_back(key);
            }
        } catch (const CsvError&) {
            throw;
        } catch (const std::exception&) {
            throw CsvError("cannot parse value for key '" + key + "'", line_no);
        }
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw CsvError(msg, 0);
    }
    return cfg;
}

int cmd_experiment(const std::string& config_path, const std::string& out_path, int threads) {
    ExperimentConfig cfg = parse_experiment_config(config_path);
    ExperimentResult result = run_null_experiment(cfg, threads);
    if (out_path.empty() || out_path == "-")
        summarize_to_csv(result, std::cout);
    else
        summarize_to_csv(result, out_path);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Likelihood-ratio independence test for common-shock Poisson counts"};
    app.require_subcommand(1);

    std::string input, out_path = "-", scheme_str = "bartlett", mu_text, config_path;
    double alpha = 0.05, lambda = 0.0, pi = 0.5;
    int n = 100, threads = 0;
    std::uint64_t seed = 0;
    bool as_json = false;

    auto* test = app.add_subcommand("test", "run the test on a CSV of counts");
    test->add_option("--input", input, "CSV file of counts")->required();
    test->add_option("--alpha", alpha, "nominal size (default 0.05)");
    test->add_option("--scheme", scheme_str,
                     "asymptotic|bartlett|bartlett-true|bartlett-true-pi (default bartlett)");
    test->add_option("--mu", mu_text, "true rates a,b,... (bartlett-true schemes)");
    test->add_option("--pi", pi, "P(lambda_hat>0) used by bartlett-true-pi (default 0.5)");
    test->add_flag("--json", as_json, "machine-readable output");

    auto* rfactor = app.add_subcommand("rfactor", "correction factor for given rates");
    rfactor->add_option("--mu", mu_text, "rates a,b,...")->required();
    rfactor->add_flag("--json", as_json, "machine-readable output");

    auto* simulate = app.add_subcommand("simulate", "sample a dataset from the model");
    simulate->add_option("--mu", mu_text, "rates a,b,...")->required();
    simulate->add_option("--lambda", lambda, "common-shock rate (default 0)");
    simulate->add_option("--n", n, "number of rows (default 100)");
    simulate->add_option("--seed", seed, "RNG seed (default 0)");
    simulate->add_option("--out", out_path, "output CSV path, '-' for stdout");

    auto* experiment = app.add_subcommand("experiment", "run a simulation study");
    experiment->add_option("--config", config_path, "key = value config file")->required();
    experiment->add_option("--out", out_path, "output CSV path, '-' for stdout");
    experiment->add_option("--threads", threads, "worker threads (0 = library default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (test->parsed())
            return cmd_test(input, alpha, scheme_str,
                            mu_text.empty() ? std::vector<double>{} : parse_mu_list(mu_text), pi,
                            as_json);
        if (rfactor->parsed()) return cmd_rfactor(parse_mu_list(mu_text), as_json);
        if (simulate->parsed()) return cmd_simulate(parse_mu_list(mu_text), lambda, n, seed, out_path);
        if (experiment->parsed()) return cmd_experiment(config_path, out_path, threads);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CsvError& e) {
        if (e.line > 0)
            std::cerr << "error: line " << e.line << ": " << e.what() << '\n';
        else
            std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
