#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "risopt/bcd.hpp"
#include "support/oracles.hpp"

using namespace risopt;

namespace {

SystemConfig small_config(std::uint64_t seed) {
    SystemConfig cfg = feasible_defaults();
    cfg.antennas = 2;
    cfg.users = 2;
    cfg.n_ris1 = 4;
    cfg.n_ris2 = 4;
    cfg.mu_w = 0.0;
    cfg.seed = seed;
    cfg.bcd_max_outer = 10;
    return cfg;
}

}  // namespace

TEST_CASE("termination rules") {
    SUBCASE("infinite tolerance stops after one outer iteration") {
        SystemConfig cfg = small_config(41);
        cfg.bcd_tol_w = std::numeric_limits<double>::infinity();
        const BcdResult res = bcd_solve(synthesize_scenario(cfg), cfg);
        CHECK(res.trace.status == SolveStatus::Converged);
        CHECK(res.trace.outer.size() == 1);
    }

    SUBCASE("zero iteration budget returns the initialization") {
        SystemConfig cfg = small_config(42);
        cfg.bcd_max_outer = 0;
        const BcdResult res = bcd_solve(synthesize_scenario(cfg), cfg);
        CHECK(res.trace.status == SolveStatus::MaxIters);
        CHECK(res.trace.outer.empty());
        CHECK(res.precoder.total_power() == doctest::Approx(res.trace.init_power_w));
    }
}

TEST_CASE("trace invariants on a feasible instance") {
    SystemConfig cfg = small_config(43);
    cfg.users = 3;
    cfg.antennas = 3;
    cfg.mu_w = 1e-4;
    const ChannelSet ch = synthesize_scenario(cfg);
    const BcdResult res = bcd_solve(ch, cfg);
    REQUIRE(res.ok());
    REQUIRE(!res.trace.outer.empty());

    SUBCASE("power column never climbs") {
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& rec : res.trace.outer) {
            CHECK(rec.power_w <= prev + cfg.solver_tol);
            prev = rec.power_w;
        }
    }

    SUBCASE("final state passes the constraint check") {
        const DerivedChannels dc = derive_channels(ch);
        const ConstraintReport rep = check_constraints(ch, dc, res.ris, res.precoder, cfg);
        CHECK(rep.min_normalized(cfg) >= -cfg.solver_tol);
        CHECK_NOTHROW(res.ris.validate());
    }

    SUBCASE("single-user power bound at the final channels") {
        const DerivedChannels dc = derive_channels(ch);
        const auto g = compose_all(ch, dc, res.ris);
        double bound = 0.0;
        for (int k = 0; k < cfg.users; ++k)
            bound = std::max(bound, cfg.sinr_target * cfg.noise_w / g[k].squaredNorm());
        CHECK(res.precoder.total_power() >= bound * (1.0 - 1e-9));
    }

    SUBCASE("identical config gives identical traces") {
        const BcdResult again = bcd_solve(ch, cfg);
        REQUIRE(again.trace.outer.size() == res.trace.outer.size());
        for (std::size_t i = 0; i < res.trace.outer.size(); ++i) {
            CHECK(again.trace.outer[i].power_w == res.trace.outer[i].power_w);
            CHECK(again.trace.outer[i].beta1 == res.trace.outer[i].beta1);
            CHECK(again.trace.outer[i].beta2 == res.trace.outer[i].beta2);
        }
        std::ostringstream a, b;
        write_trace_jsonl(res.trace, a);
        write_trace_jsonl(again.trace, b);
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("brute-force cross-check on a small instance") {
    SystemConfig cfg = feasible_defaults();
    cfg.antennas = 2;
    cfg.users = 1;
    cfg.n_ris1 = 2;
    cfg.n_ris2 = 2;
    cfg.mu_w = 0.0;
    cfg.seed = 21;
    cfg.bcd_tol_w = 1e-9;
    cfg.bcd_max_outer = 25;
    const ChannelSet ch = synthesize_scenario(cfg);
    const BcdResult res = bcd_solve(ch, cfg);
    REQUIRE(res.ok());
    const double grid = testing::grid_min_power_single_user(ch, cfg, 8);
    CHECK(res.trace.final_power_w() <= grid * 1.05);
    CHECK(res.trace.final_power_w() >= grid * 0.5);  // grid is coarse, not a hard floor
}

TEST_CASE("baselines") {
    SystemConfig cfg = small_config(44);
    cfg.mu_w = 1e-4;
    const ChannelSet ch = synthesize_scenario(cfg);

    SUBCASE("double mode is the plain solve") {
        const BcdResult a = bcd_solve(ch, cfg);
        const BcdResult b = solve_baseline(ch, cfg, BaselineMode::Double);
        CHECK(a.trace.final_power_w() == b.trace.final_power_w());
        CHECK(a.trace.outer.size() == b.trace.outer.size());
    }

    SUBCASE("frozen phases leave no phase records") {
        const BcdResult res = solve_baseline(ch, cfg, BaselineMode::RandomPhase);
        REQUIRE(res.ok());
        for (const auto& rec : res.trace.outer) {
            CHECK(rec.phase_sweeps == 0);
            CHECK(rec.phase.empty());
        }
    }

    SUBCASE("optimized phases do not lose to frozen ones") {
        const BcdResult tuned = bcd_solve(ch, cfg);
        const BcdResult frozen = solve_baseline(ch, cfg, BaselineMode::RandomPhase);
        REQUIRE(tuned.ok());
        REQUIRE(frozen.ok());
        CHECK(tuned.trace.final_power_w() <=
              frozen.trace.final_power_w() + cfg.solver_tol);
    }

    SUBCASE("single-surface modes slice the shared blocks") {
        const BcdResult bs_only = solve_baseline(ch, cfg, BaselineMode::SingleBs);
        const BcdResult user_only = solve_baseline(ch, cfg, BaselineMode::SingleUser);
        CHECK(bs_only.ris.ris2_phases.size() == 0);
        CHECK(user_only.ris.ris1_phases.size() == 0);
        // equivalent to synthesizing the reduced scenario directly
        SystemConfig reduced = cfg;
        reduced.n_ris2 = 0;
        const BcdResult direct = bcd_solve(synthesize_scenario(reduced), reduced);
        CHECK(bs_only.trace.final_power_w() ==
              doctest::Approx(direct.trace.final_power_w()).epsilon(1e-12));
    }
}

TEST_CASE("harvest shortfall is reported, not thrown") {
    SystemConfig cfg = paper_defaults();  // 1 mW per element: infeasible at stock geometry
    cfg.n_ris1 = 50;
    cfg.n_ris2 = 50;
    const ChannelSet ch = synthesize_scenario(cfg);
    const BcdResult res = bcd_solve(ch, cfg);
    CHECK(res.trace.status == SolveStatus::InsufficientHarvestStatus);
    CHECK(res.trace.shortfall_w > 0.0);
    CHECK(res.trace.shortfall_surface >= 1);
}
