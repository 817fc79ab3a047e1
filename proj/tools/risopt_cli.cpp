// Command line front end: one-shot solves and the seeded Monte-Carlo
// experiment drivers, emitting the stable CSV/JSONL result schema.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "risopt/experiments.hpp"

namespace {

using namespace risopt;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    int realizations = 50;
    std::string out_path;
    std::string format = "csv";
    int workers = 0;
    bool paper_defaults_flag = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_realizations) {
    cmd->add_option("--config", opts.config_path, "key = value config file (see README)");
    cmd->add_option("--seed", opts.seed, "base seed override");
    if (with_realizations)
        cmd->add_option("--realizations", opts.realizations, "Monte-Carlo realizations")
            ->check(CLI::PositiveNumber);
    cmd->add_option("--out", opts.out_path, "output file (default: stdout)");
    cmd->add_option("--format", opts.format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--workers", opts.workers, "worker threads (0 = all cores)");
    cmd->add_flag("--paper-defaults", opts.paper_defaults_flag,
                  "start from the literature defaults (1 mW per element; usually infeasible)");
}

SystemConfig build_config(const CommonOpts& opts) {
    SystemConfig cfg = opts.paper_defaults_flag ? paper_defaults() : feasible_defaults();
    if (!opts.config_path.empty()) cfg = load_config_file(opts.config_path, cfg);
    if (opts.seed) cfg.seed = *opts.seed;
    cfg.validate();
    return cfg;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void write_table(const ResultTable& table, const CommonOpts& opts) {
    const OutputFormat fmt = opts.format == "jsonl" ? OutputFormat::Jsonl : OutputFormat::Csv;
    if (opts.out_path.empty())
        emit_results(table, std::cout, fmt);
    else
        emit_results_file(table, opts.out_path, fmt);
}

int cmd_solve(const CommonOpts& opts) {
    const SystemConfig cfg = build_config(opts);
    const ChannelSet ch = synthesize_scenario(cfg);
    const BcdResult res = bcd_solve(ch, cfg);

    std::printf("# status=%s init_power_w=%.6g final_power_w=%.6g\n",
                to_string(res.trace.status), res.trace.init_power_w,
                res.trace.final_power_w());
    if (res.trace.status == SolveStatus::InsufficientHarvestStatus)
        std::printf("# harvest shortfall: %.6g W at RIS%d\n", res.trace.shortfall_w,
                    res.trace.shortfall_surface);
    std::printf("%4s %14s %10s %10s %14s %14s %14s %4s %4s %s\n", "i", "power_w", "beta1",
                "beta2", "min_sinr_mrg", "harv1_mrg_w", "harv2_mrg_w", "s1", "s2", "flags");
    for (const auto& rec : res.trace.outer) {
        std::string flags;
        if (rec.theta1_rejected) flags += "R1";
        if (rec.theta2_rejected) flags += "R2";
        if (rec.phase_stalled) flags += "S";
        std::printf("%4d %14.8g %10.6f %10.6f %14.6g %14.6g %14.6g %4d %4d %s\n",
                    rec.iteration, rec.power_w, rec.beta1, rec.beta2, rec.min_sinr_margin,
                    rec.harvest1_margin_w, rec.harvest2_margin_w, rec.sca_iters,
                    rec.phase_sweeps, flags.c_str());
    }
    if (!opts.out_path.empty()) {
        std::ofstream os(opts.out_path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + opts.out_path);
        write_trace_jsonl(res.trace, os);
    }
    return res.ok() ? 0 : 2;
}

int cmd_convergence(const CommonOpts& opts) {
    const SystemConfig cfg = build_config(opts);
    const ConvergenceResult res =
        run_convergence(cfg, opts.realizations, resolve_workers(opts.workers));
    write_table(res.to_table(cfg), opts);
    return 0;
}

int cmd_sweep_total(const CommonOpts& opts, const std::vector<int>& totals) {
    const SystemConfig cfg = build_config(opts);
    const SweepResult res =
        run_total_sweep(cfg, totals, opts.realizations, resolve_workers(opts.workers));
    write_table(res.to_table(cfg, "sweep_total"), opts);
    return 0;
}

int cmd_sweep_split(const CommonOpts& opts, int n_total, const std::vector<int>& splits) {
    const SystemConfig cfg = build_config(opts);
    const SweepResult res =
        run_split_sweep(cfg, n_total, splits, opts.realizations, resolve_workers(opts.workers));
    write_table(res.to_table(cfg, "sweep_split"), opts);
    return 0;
}

int cmd_baselines(const CommonOpts& opts) {
    const SystemConfig cfg = build_config(opts);
    const SweepResult res =
        run_baselines(cfg, opts.realizations, resolve_workers(opts.workers));
    write_table(res.to_table(cfg, "baselines"), opts);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transmit-power minimization for downlinks aided by two energy-harvesting "
                 "reflecting surfaces"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::vector<int> totals{20, 60, 100, 140, 180};
    int n_total = 50;
    std::vector<int> splits;

    CLI::App* solve = app.add_subcommand("solve", "solve one seeded realization, print the trace");
    add_common(solve, opts, false);
    CLI::App* conv = app.add_subcommand("convergence", "power vs outer iteration over realizations");
    add_common(conv, opts, true);
    CLI::App* st = app.add_subcommand("sweep-total", "power vs total element count (n1 = n2)");
    add_common(st, opts, true);
    st->add_option("--totals", totals, "element totals (even)")->delimiter(',');
    CLI::App* ss = app.add_subcommand("sweep-split", "power vs RIS1 share of a fixed total");
    add_common(ss, opts, true);
    ss->add_option("--total", n_total, "fixed element total");
    ss->add_option("--splits", splits, "RIS1 element counts to visit")->delimiter(',');
    CLI::App* base = app.add_subcommand("baselines", "all four schemes on paired seeds");
    add_common(base, opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(opts);
        if (conv->parsed()) return cmd_convergence(opts);
        if (st->parsed()) return cmd_sweep_total(opts, totals);
        if (ss->parsed()) {
            if (splits.empty())
                for (int s = 0; s <= n_total; s += std::max(1, n_total / 10)) splits.push_back(s);
            return cmd_sweep_split(opts, n_total, splits);
        }
        if (base->parsed()) return cmd_baselines(opts);
    } catch (const ExperimentInfeasible& e) {
        std::cerr << "experiment infeasible: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
