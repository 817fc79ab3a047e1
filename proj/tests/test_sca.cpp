#include <doctest.h>

#include <cmath>
#include <numbers>

#include "risopt/sca.hpp"

using namespace risopt;

namespace {

Precoder random_precoder(Rng& rng, int k, int m) {
    Precoder prec;
    prec.beams.resize(k);
    for (int u = 0; u < k; ++u) {
        prec.beams[u] = VectorXcd(m);
        for (int a = 0; a < m; ++a) prec.beams[u](a) = rng.normal_c();
    }
    return prec;
}

RisState random_state(Rng& rng, int n1, int n2) {
    RisState ris;
    ris.ris1_phases = VectorXcd(n1);
    ris.ris2_phases = VectorXcd(n2);
    for (int j = 0; j < n1; ++j)
        ris.ris1_phases(j) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    for (int j = 0; j < n2; ++j)
        ris.ris2_phases(j) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
    return ris;
}

}  // namespace

TEST_CASE("SINR Taylor bound") {
    Rng rng(44);
    VectorXcd g(3);
    for (int i = 0; i < 3; ++i) g(i) = rng.normal_c();

    SUBCASE("exact at the expansion point") {
        for (int it = 0; it < 20; ++it) {
            VectorXcd w(3);
            for (int i = 0; i < 3; ++i) w(i) = rng.normal_c();
            CHECK(sinr_taylor_lhs(g, w, w) ==
                  doctest::Approx(std::norm(g.dot(w))).epsilon(1e-12));
        }
    }

    SUBCASE("never above the true quadratic") {
        for (int it = 0; it < 100; ++it) {
            VectorXcd a(3), b(3);
            for (int i = 0; i < 3; ++i) {
                a(i) = rng.normal_c();
                b(i) = rng.normal_c();
            }
            CHECK(sinr_taylor_lhs(g, a, b) <= std::norm(g.dot(b)) + 1e-12);
        }
    }

    SUBCASE("constraint row equals the helper") {
        Precoder prev = random_precoder(rng, 2, 3);
        const QuadConstraint con = linearize_sinr(g, prev, 0, 100.0, 1e-3, 3);
        for (int it = 0; it < 20; ++it) {
            Precoder cur = random_precoder(rng, 2, 3);
            double interference = 0.0;
            for (int i = 1; i < 2; ++i) interference += std::norm(g.dot(cur.beams[i]));
            const double direct =
                100.0 * (interference + 1e-3) - sinr_taylor_lhs(g, prev.beams[0], cur.beams[0]);
            CHECK(con.eval(stack_beams(cur, 3)) == doctest::Approx(direct).epsilon(1e-10));
        }
    }

    SUBCASE("zero expansion point is unusable and rejected upstream") {
        Precoder prev;
        prev.beams = {VectorXcd::Zero(3)};
        const QuadConstraint con = linearize_sinr(g, prev, 0, 100.0, 1e-3, 3);
        // left side identically zero: constraint value is the positive target
        Precoder cur = random_precoder(rng, 1, 3);
        CHECK(con.eval(stack_beams(cur, 3)) >= 100.0 * 1e-3 - 1e-15);
    }
}

TEST_CASE("power Taylor bound") {
    Rng rng(45);

    SUBCASE("exactness and global under-estimation") {
        for (int it = 0; it < 100; ++it) {
            Precoder a = random_precoder(rng, 2, 2);
            Precoder b = random_precoder(rng, 2, 2);
            CHECK(power_taylor_lhs(a, a) == doctest::Approx(a.total_power()).epsilon(1e-12));
            CHECK(power_taylor_lhs(a, b) <= b.total_power() + 1e-12);
        }
    }

    SUBCASE("row encoding matches the helper") {
        Precoder prev = random_precoder(rng, 2, 2);
        const QuadConstraint con = linearize_power(prev, 0.37, 2);
        Precoder cur = random_precoder(rng, 2, 2);
        CHECK(con.eval(stack_beams(cur, 2)) ==
              doctest::Approx(0.37 - power_taylor_lhs(prev, cur)).epsilon(1e-10));
    }

    SUBCASE("vacuous with zero consumption") {
        SystemConfig cfg = feasible_defaults();
        cfg.mu_w = 0.0;
        ChannelSet ch = synthesize_scenario(cfg);
        CHECK(harvest_power_floor_ris1(ch, 0.5, cfg) == 0.0);
        Rng rng(1);
        RisState ris = random_state(rng, cfg.n_ris1, cfg.n_ris2);
        ris.ris2_amplitude = 0.5;
        CHECK(harvest_power_floor_ris2(ch, ris, cfg) == 0.0);
    }

    SUBCASE("full reflection with consumption cannot be linearized") {
        SystemConfig cfg = feasible_defaults();
        ChannelSet ch = synthesize_scenario(cfg);
        CHECK_THROWS_AS(harvest_power_floor_ris1(ch, 1.0, cfg), InsufficientHarvest);
    }
}

TEST_CASE("sca loop") {
    SUBCASE("single user converges to the closed form") {
        SystemConfig cfg = feasible_defaults();
        cfg.users = 1;
        cfg.antennas = 3;
        cfg.n_ris1 = 4;
        cfg.n_ris2 = 4;
        cfg.mu_w = 0.0;
        cfg.seed = 13;
        const ChannelSet ch = synthesize_scenario(cfg);
        const DerivedChannels dc = derive_channels(ch);
        Rng rng(2);
        RisState ris = random_state(rng, 4, 4);

        const VectorXcd g = compose_channel(ch, dc, ris, 0);
        // matched filter at twice the closed-form power: feasible at itself
        const double p_start = 2.0 * cfg.sinr_target * cfg.noise_w / g.squaredNorm();
        ScaSettings settings;
        settings.start.beams = {VectorXcd(std::sqrt(p_start) * g / g.norm())};
        const ScaResult res = sca_loop(ch, dc, ris, cfg, settings);
        CHECK(res.converged);
        const double closed_form = cfg.sinr_target * cfg.noise_w / g.squaredNorm();
        CHECK(res.precoder.total_power() == doctest::Approx(closed_form).epsilon(1e-4));
    }

    SUBCASE("vanishing target sends power to zero") {
        SystemConfig cfg = feasible_defaults();
        cfg.users = 1;
        cfg.antennas = 2;
        cfg.n_ris1 = 3;
        cfg.n_ris2 = 3;
        cfg.mu_w = 0.0;
        cfg.seed = 23;
        const ChannelSet ch = synthesize_scenario(cfg);
        const DerivedChannels dc = derive_channels(ch);
        Rng rng(3);
        RisState ris = random_state(rng, 3, 3);
        const VectorXcd g = compose_channel(ch, dc, ris, 0);

        double first = 0.0, prev = 1e300;
        for (double target : {1.0, 1e-3, 1e-6}) {
            SystemConfig soft = cfg;
            soft.sinr_target = target;
            ScaSettings settings;
            settings.start.beams = {VectorXcd(g / g.norm() * 1e-3)};
            const ScaResult res = sca_loop(ch, dc, ris, soft, settings);
            CHECK(res.precoder.total_power() < prev);
            if (first == 0.0) first = res.precoder.total_power();
            prev = res.precoder.total_power();
        }
        // power scales away with the requirement
        CHECK(prev <= first * 1e-5);
    }

    SUBCASE("already optimal start stops in two rounds") {
        SystemConfig cfg = feasible_defaults();
        cfg.users = 1;
        cfg.antennas = 2;
        cfg.n_ris1 = 2;
        cfg.n_ris2 = 2;
        cfg.mu_w = 0.0;
        cfg.seed = 5;
        const ChannelSet ch = synthesize_scenario(cfg);
        const DerivedChannels dc = derive_channels(ch);
        Rng rng(4);
        RisState ris = random_state(rng, 2, 2);
        const VectorXcd g = compose_channel(ch, dc, ris, 0);
        const double p_opt = cfg.sinr_target * cfg.noise_w / g.squaredNorm();
        ScaSettings settings;
        settings.start.beams = {VectorXcd(std::sqrt(p_opt) * g / g.norm())};
        const ScaResult res = sca_loop(ch, dc, ris, cfg, settings);
        CHECK(res.converged);
        CHECK(res.records.size() <= 2);
        CHECK(res.precoder.total_power() == doctest::Approx(p_opt).epsilon(1e-6));
    }

    SUBCASE("infeasible first subproblem is surfaced as such") {
        // start above the power cap with a target that cannot be met inside it
        SystemConfig cfg = feasible_defaults();
        cfg.users = 1;
        cfg.antennas = 2;
        cfg.n_ris1 = 2;
        cfg.n_ris2 = 2;
        cfg.mu_w = 0.0;
        cfg.seed = 29;
        const ChannelSet ch = synthesize_scenario(cfg);
        const DerivedChannels dc = derive_channels(ch);
        Rng rng(5);
        RisState ris = random_state(rng, 2, 2);
        const VectorXcd g = compose_channel(ch, dc, ris, 0);
        const double p_needed = cfg.sinr_target * cfg.noise_w / g.squaredNorm();
        cfg.p_max_w = p_needed / 4.0;
        ScaSettings settings;
        settings.start.beams = {VectorXcd(std::sqrt(p_needed) * g / g.norm())};
        CHECK_THROWS_AS(sca_loop(ch, dc, ris, cfg, settings), InfeasibleAtInit);
    }

    SUBCASE("degenerate expansion point is rejected") {
        SystemConfig cfg = feasible_defaults();
        cfg.users = 1;
        cfg.antennas = 2;
        cfg.n_ris1 = 2;
        cfg.n_ris2 = 2;
        const ChannelSet ch = synthesize_scenario(cfg);
        const DerivedChannels dc = derive_channels(ch);
        Rng rng(6);
        RisState ris = random_state(rng, 2, 2);
        ScaSettings settings;
        settings.start.beams = {VectorXcd::Zero(2)};
        CHECK_THROWS_AS(sca_loop(ch, dc, ris, cfg, settings), DomainError);
    }

    SUBCASE("iterates stay truly feasible and the objective never climbs") {
        SystemConfig cfg = feasible_defaults();
        cfg.users = 3;
        cfg.antennas = 4;
        cfg.n_ris1 = 6;
        cfg.n_ris2 = 6;
        cfg.mu_w = 1e-4;
        cfg.sinr_target = 2.0;  // reachable by matched filters
        cfg.seed = 31;
        const ChannelSet ch = synthesize_scenario(cfg);
        const DerivedChannels dc = derive_channels(ch);
        Rng rng(7);
        RisState ris = random_state(rng, 6, 6);
        ris.ris1_amplitude = 0.3;
        ris.ris2_amplitude = 0.3;

        // regularized-inverse directions scaled until the targets hold with
        // slack, then lifted over both harvest floors
        const auto g0 = compose_all(ch, dc, ris);
        MatrixXcd gram = MatrixXcd::Zero(4, 4);
        for (const auto& gk : g0) gram += gk * gk.adjoint();
        gram.diagonal().array() += 1e-12;
        Precoder start;
        start.beams.resize(3);
        for (int k = 0; k < 3; ++k) {
            const VectorXcd f = gram.ldlt().solve(g0[k]);
            start.beams[k] = f / f.norm();
        }
        double scale = 1e-6;
        auto feasible_at = [&](double s) {
            Precoder p = start;
            for (auto& w : p.beams) w *= s;
            for (int k = 0; k < 3; ++k)
                if (sinr(g0, p, k, cfg.noise_w) < cfg.sinr_target * 1.2) return false;
            return true;
        };
        while (!feasible_at(scale) && scale < 1.0) scale *= 2.0;
        REQUIRE(feasible_at(scale));
        const double floor = std::max(harvest_power_floor_ris1(ch, 0.3, cfg),
                                      harvest_power_floor_ris2(ch, ris, cfg));
        scale = std::max(scale, std::sqrt(1.05 * floor / 3.0));
        for (auto& w : start.beams) w *= scale;

        const ScaResult res = sca_loop(ch, dc, ris, cfg, ScaSettings{30, 1e-6, start});
        REQUIRE(!res.records.empty());
        double prev = start.total_power();
        for (const auto& rec : res.records) {
            CHECK(rec.objective_w <= prev + 1e-6);
            prev = rec.objective_w;
            CHECK(rec.min_sinr_margin >= -1e-6);
            CHECK(rec.harvest1_margin_w >= -1e-6);
            CHECK(rec.harvest2_margin_w >= -1e-6);
        }
        const ConstraintReport rep = check_constraints(ch, dc, ris, res.precoder, cfg);
        CHECK(rep.min_sinr_margin() >= -1e-6);
        CHECK(rep.power_margin_w >= -1e-6);
    }
}
