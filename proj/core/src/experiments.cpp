#include "risopt/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace risopt {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void mean_stderr(const std::vector<double>& xs, double& mean, double& se) {
    mean = 0.0;
    se = 0.0;
    if (xs.empty()) return;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= static_cast<double>(xs.size() - 1);
    se = std::sqrt(var / static_cast<double>(xs.size()));
}

}  // namespace

void emit_results(const ResultTable& table, std::ostream& os, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        os << "experiment,config_hash,seed,sweep,mean_power_w,stderr_w,n_ok,n_infeasible\n";
        for (const auto& row : table.rows)
            os << table.experiment << ',' << table.config_hash << ',' << table.seed << ','
               << num(row.sweep) << ',' << num(row.mean) << ',' << num(row.stderr_) << ','
               << row.n_ok << ',' << row.n_infeasible << '\n';
    } else {
        for (const auto& row : table.rows)
            os << "{\"experiment\":\"" << table.experiment << "\",\"config_hash\":\""
               << table.config_hash << "\",\"seed\":" << table.seed << ",\"sweep\":"
               << num(row.sweep) << ",\"mean_power_w\":" << num(row.mean) << ",\"stderr_w\":"
               << num(row.stderr_) << ",\"n_ok\":" << row.n_ok << ",\"n_infeasible\":"
               << row.n_infeasible << "}\n";
    }
}

void emit_results_file(const ResultTable& table, const std::string& path, OutputFormat format) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    emit_results(table, os, format);
    os.flush();
    if (!os) throw std::runtime_error("write failed: " + path);
}

ResultTable parse_results_csv(std::istream& is) {
    ResultTable table;
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("parse_results_csv: missing header");
    if (line != "experiment,config_hash,seed,sweep,mean_power_w,stderr_w,n_ok,n_infeasible")
        throw std::runtime_error("parse_results_csv: unexpected header: " + line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (fields.size() != 8)
            throw std::runtime_error("parse_results_csv: bad row: " + line);
        table.experiment = fields[0];
        table.config_hash = fields[1];
        table.seed = std::stoull(fields[2]);
        ResultRow row;
        row.sweep = std::stod(fields[3]);
        row.mean = std::stod(fields[4]);
        row.stderr_ = std::stod(fields[5]);
        row.n_ok = std::stoi(fields[6]);
        row.n_infeasible = std::stoi(fields[7]);
        table.rows.push_back(row);
    }
    return table;
}

SystemConfig realization_config(const SystemConfig& cfg, int realization) {
    SystemConfig out = cfg;
    out.seed = mix_seed(cfg.seed, seed_tag::realization_base + static_cast<std::uint64_t>(realization));
    return out;
}

std::vector<BcdResult> run_realizations(const SystemConfig& cfg, int n_realizations, int workers,
                                        BaselineMode mode) {
    if (n_realizations < 1) throw DomainError("run_realizations: need at least one realization");
    std::vector<BcdResult> results(static_cast<std::size_t>(n_realizations));
    const int n_workers = std::max(1, std::min(workers, n_realizations));

    std::atomic<int> next{0};
    auto worker = [&]() {
        while (true) {
            const int r = next.fetch_add(1);
            if (r >= n_realizations) break;
            const SystemConfig cfg_r = realization_config(cfg, r);
            const ChannelSet ch = synthesize_scenario(cfg_r);
            results[static_cast<std::size_t>(r)] = solve_baseline(ch, cfg_r, mode);
        }
    };
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

ResultTable ConvergenceResult::to_table(const SystemConfig& cfg) const {
    ResultTable table;
    table.experiment = "convergence";
    table.config_hash = cfg.hash();
    table.seed = cfg.seed;
    for (std::size_t i = 0; i < mean_power_w.size(); ++i) {
        ResultRow row;
        row.sweep = static_cast<double>(i + 1);
        row.mean = mean_power_w[i];
        row.stderr_ = stderr_w[i];
        row.n_ok = n_ok;
        row.n_infeasible = n_infeasible;
        table.rows.push_back(row);
    }
    return table;
}

ConvergenceResult run_convergence(const SystemConfig& cfg, int n_realizations, int workers) {
    const auto results = run_realizations(cfg, n_realizations, workers);
    ConvergenceResult out;
    std::size_t depth = 0;
    for (const auto& res : results) {
        if (!res.ok()) {
            ++out.n_infeasible;
            continue;
        }
        ++out.n_ok;
        depth = std::max(depth, res.trace.outer.size());
    }
    if (out.n_ok == 0) throw ExperimentInfeasible("run_convergence: no feasible realization");
    depth = std::max<std::size_t>(depth, 1);

    out.per_realization.resize(depth);
    for (const auto& res : results) {
        if (!res.ok()) continue;
        for (std::size_t i = 0; i < depth; ++i) {
            const auto& outer = res.trace.outer;
            const double power = outer.empty()
                                     ? res.trace.init_power_w
                                     : outer[std::min(i, outer.size() - 1)].power_w;
            out.per_realization[i].push_back(power);
        }
    }
    out.mean_power_w.resize(depth);
    out.stderr_w.resize(depth);
    for (std::size_t i = 0; i < depth; ++i)
        mean_stderr(out.per_realization[i], out.mean_power_w[i], out.stderr_w[i]);
    return out;
}

ResultTable SweepResult::to_table(const SystemConfig& cfg, const std::string& name) const {
    ResultTable table;
    table.experiment = name;
    table.config_hash = cfg.hash();
    table.seed = cfg.seed;
    for (std::size_t i = 0; i < sweep_values.size(); ++i) {
        ResultRow row;
        row.sweep = sweep_values[i];
        row.mean = mean_power_w[i];
        row.stderr_ = stderr_w[i];
        row.n_ok = n_ok[i];
        row.n_infeasible = n_infeasible[i];
        table.rows.push_back(row);
    }
    return table;
}

namespace {

void append_point(SweepResult& out, double sweep_value, const std::vector<BcdResult>& results) {
    std::vector<double> ok_powers;
    std::vector<double> per_real;
    int infeasible = 0;
    for (const auto& res : results) {
        if (res.ok()) {
            ok_powers.push_back(res.trace.final_power_w());
            per_real.push_back(res.trace.final_power_w());
        } else {
            ++infeasible;
            per_real.push_back(std::numeric_limits<double>::quiet_NaN());
        }
    }
    double mean = 0.0, se = 0.0;
    mean_stderr(ok_powers, mean, se);
    out.sweep_values.push_back(sweep_value);
    out.mean_power_w.push_back(mean);
    out.stderr_w.push_back(se);
    out.n_ok.push_back(static_cast<int>(ok_powers.size()));
    out.n_infeasible.push_back(infeasible);
    out.per_realization.push_back(std::move(per_real));
}

void require_any_ok(const SweepResult& out, const char* what) {
    for (int n : out.n_ok)
        if (n > 0) return;
    throw ExperimentInfeasible(std::string(what) + ": no feasible realization at any point");
}

}  // namespace

SweepResult run_total_sweep(const SystemConfig& cfg, const std::vector<int>& totals,
                            int n_realizations, int workers) {
    SweepResult out;
    for (int total : totals) {
        if (total < 2 || total % 2 != 0)
            throw DomainError("run_total_sweep: totals must be positive and even");
        SystemConfig point = cfg;
        point.n_ris1 = total / 2;
        point.n_ris2 = total / 2;
        append_point(out, total, run_realizations(point, n_realizations, workers));
    }
    require_any_ok(out, "run_total_sweep");
    return out;
}

SweepResult run_split_sweep(const SystemConfig& cfg, int n_total, std::vector<int> splits,
                            int n_realizations, int workers) {
    if (n_total < 1) throw DomainError("run_split_sweep: n_total must be >= 1");
    bool has_zero = false, has_total = false;
    for (int s : splits) {
        if (s < 0 || s > n_total) throw DomainError("run_split_sweep: split outside [0, n_total]");
        has_zero = has_zero || s == 0;
        has_total = has_total || s == n_total;
    }
    if (!has_zero) splits.insert(splits.begin(), 0);
    if (!has_total) splits.push_back(n_total);

    SweepResult out;
    for (int s : splits) {
        SystemConfig point = cfg;
        point.n_ris1 = s;
        point.n_ris2 = n_total - s;
        append_point(out, s, run_realizations(point, n_realizations, workers));
    }
    require_any_ok(out, "run_split_sweep");
    return out;
}

SweepResult run_baselines(const SystemConfig& cfg, int n_realizations, int workers) {
    SweepResult out;
    const BaselineMode modes[] = {BaselineMode::Double, BaselineMode::SingleBs,
                                  BaselineMode::SingleUser, BaselineMode::RandomPhase};
    for (int m = 0; m < 4; ++m)
        append_point(out, m, run_realizations(cfg, n_realizations, workers, modes[m]));
    require_any_ok(out, "run_baselines");
    return out;
}

}  // namespace risopt
