// Test-side reference implementations, kept independent of the library code
// paths they check.
#pragma once

#include <cmath>
#include <numbers>
#include <thread>
#include <vector>

#include "risopt/model.hpp"

namespace risopt::testing {

/// Composite channel evaluated straight from the raw blocks:
/// b1 H1 diag(t1) h1k + b2 H2 diag(t2) h2k + b1 b2 H1 diag(t1) D diag(t2) h2k.
inline VectorXcd compose_direct(const ChannelSet& ch, const RisState& ris, int k) {
    const auto& t1 = ris.ris1_phases;
    const auto& t2 = ris.ris2_phases;
    VectorXcd g = VectorXcd::Zero(ch.bs_to_ris1.rows());
    if (t1.size() > 0)
        g += ris.ris1_amplitude * (ch.bs_to_ris1 * t1.asDiagonal() * ch.ris1_to_user[k]);
    if (t2.size() > 0)
        g += ris.ris2_amplitude * (ch.bs_to_ris2 * t2.asDiagonal() * ch.ris2_to_user[k]);
    if (t1.size() > 0 && t2.size() > 0)
        g += ris.ris1_amplitude * ris.ris2_amplitude *
             (ch.bs_to_ris1 * t1.asDiagonal() * ch.ris1_to_ris2 * t2.asDiagonal() *
              ch.ris2_to_user[k]);
    return g;
}

/// Largest ||g||^2 over the theta2 grid at a fixed theta1, sweeping theta2
/// as a mixed-radix odometer so each visit touches one element.
inline double grid_best_gain_fixed_t1(const ChannelSet& ch, const VectorXcd& t1,
                                      const std::vector<cxd>& phases) {
    const int n2 = static_cast<int>(ch.bs_to_ris2.cols());
    const int steps = static_cast<int>(phases.size());
    const VectorXcd base = ch.bs_to_ris1 * t1.asDiagonal() * ch.ris1_to_user[0];
    std::vector<VectorXcd> cols(n2);
    for (int j = 0; j < n2; ++j)
        cols[j] = (ch.bs_to_ris2.col(j) +
                   ch.bs_to_ris1 * t1.asDiagonal() * ch.ris1_to_ris2.col(j)) *
                  ch.ris2_to_user[0](j);

    std::vector<int> idx2(n2, 0);
    VectorXcd g = base;
    for (int j = 0; j < n2; ++j) g += phases[0] * cols[j];
    double best_gain = g.squaredNorm();
    long total = 1;
    for (int j = 0; j < n2; ++j) total *= steps;
    for (long it = 1; it < total; ++it) {
        int digit = 0;
        while (true) {
            const int old = idx2[digit];
            idx2[digit] = (idx2[digit] + 1) % steps;
            g += (phases[idx2[digit]] - phases[old]) * cols[digit];
            if (idx2[digit] != 0) break;
            ++digit;
        }
        best_gain = std::max(best_gain, g.squaredNorm());
    }
    return best_gain;
}

/// Minimum single-user transmit power over a uniform phase grid with `steps`
/// points per element, using the matched-filter closed form per grid point.
inline double grid_min_power_single_user(const ChannelSet& ch, const SystemConfig& cfg,
                                         int steps, int workers = 1) {
    const int n1 = cfg.n_ris1;
    std::vector<cxd> phases(steps);
    for (int s = 0; s < steps; ++s)
        phases[s] = std::polar(1.0, 2.0 * std::numbers::pi * s / steps);

    long outer = 1;
    for (int j = 0; j < n1; ++j) outer *= steps;

    std::vector<double> best(std::max(workers, 1), 0.0);
    auto sweep_range = [&](long begin, long end, double& out) {
        double local = 0.0;
        for (long combo = begin; combo < end; ++combo) {
            VectorXcd t1(n1);
            long rem = combo;
            for (int j = 0; j < n1; ++j) {
                t1(j) = phases[rem % steps];
                rem /= steps;
            }
            local = std::max(local, grid_best_gain_fixed_t1(ch, t1, phases));
        }
        out = local;
    };
    if (workers <= 1) {
        sweep_range(0, outer, best[0]);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (outer + workers - 1) / workers;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(sweep_range, w * chunk, std::min(outer, (w + 1) * chunk),
                              std::ref(best[w]));
        for (auto& t : pool) t.join();
    }
    double best_gain = 0.0;
    for (double b : best) best_gain = std::max(best_gain, b);
    return cfg.sinr_target * cfg.noise_w / best_gain;
}

/// One-sided sign-test p-value: P[X >= wins] for X ~ Binomial(n, 1/2).
inline double sign_test_p(int wins, int n) {
    double p = 0.0;
    for (int k = wins; k <= n; ++k) {
        double log_c = 0.0;
        for (int j = 0; j < k; ++j) log_c += std::log(n - j) - std::log(j + 1);
        p += std::exp(log_c - n * std::log(2.0));
    }
    return p;
}

}  // namespace risopt::testing
