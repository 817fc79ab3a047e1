#pragma once

#include <iosfwd>
#include <string>

#include "risopt/bcd.hpp"

namespace risopt {

enum class OutputFormat { Csv, Jsonl };

struct ResultRow {
    double sweep = 0.0;  // iteration index, element total, or split, per experiment
    double mean = 0.0;
    double stderr_ = 0.0;
    int n_ok = 0;
    int n_infeasible = 0;
};

struct ResultTable {
    std::string experiment;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<ResultRow> rows;
};

/// Stable 8-column schema (see README). Deterministic byte output.
void emit_results(const ResultTable& table, std::ostream& os, OutputFormat format);
void emit_results_file(const ResultTable& table, const std::string& path, OutputFormat format);
ResultTable parse_results_csv(std::istream& is);

/// Per-realization seeds are derived from (cfg.seed, index), so every sweep
/// point sees the same randomness and cross-point comparisons are paired.
SystemConfig realization_config(const SystemConfig& cfg, int realization);

/// bcd_solve over one realization set; statuses in realization order.
std::vector<BcdResult> run_realizations(const SystemConfig& cfg, int n_realizations, int workers,
                                        BaselineMode mode = BaselineMode::Double);

struct ConvergenceResult {
    // one entry per outer iteration: converged runs are padded with their
    // final value so late iterations still average over all ok runs
    std::vector<double> mean_power_w;
    std::vector<double> stderr_w;
    std::vector<std::vector<double>> per_realization;  // [iteration][realization]
    int n_ok = 0;
    int n_infeasible = 0;
    ResultTable to_table(const SystemConfig& cfg) const;
};

ConvergenceResult run_convergence(const SystemConfig& cfg, int n_realizations, int workers = 1);

struct SweepResult {
    std::vector<double> sweep_values;
    std::vector<double> mean_power_w;
    std::vector<double> stderr_w;
    std::vector<int> n_ok;
    std::vector<int> n_infeasible;
    std::vector<std::vector<double>> per_realization;  // [point][realization], nan = infeasible
    ResultTable to_table(const SystemConfig& cfg, const std::string& name) const;
};

/// Element-count sweep at an even split (n1 = n2 = total / 2).
SweepResult run_total_sweep(const SystemConfig& cfg, const std::vector<int>& totals,
                            int n_realizations, int workers = 1);

/// Split sweep at fixed n_total; the 0 and n_total endpoints are the two
/// single-surface schemes and are added when missing.
SweepResult run_split_sweep(const SystemConfig& cfg, int n_total, std::vector<int> splits,
                            int n_realizations, int workers = 1);

/// All four schemes on paired seeds; sweep value is the mode index in
/// {0: double, 1: single_bs, 2: single_user, 3: random_phase}.
SweepResult run_baselines(const SystemConfig& cfg, int n_realizations, int workers = 1);

}  // namespace risopt
