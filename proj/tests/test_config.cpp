#include <doctest.h>

#include <sstream>

#include "risopt/config.hpp"

using namespace risopt;

TEST_CASE("dbm conversion") {
    CHECK(dbm_to_watts(40.0) == doctest::Approx(10.0));
    CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3));
    CHECK(dbm_to_watts(-110.0) == doctest::Approx(1e-14));
}

TEST_CASE("stock values") {
    const SystemConfig cfg = paper_defaults();
    CHECK(cfg.antennas == 4);
    CHECK(cfg.users == 4);
    CHECK(cfg.eta == 0.8);
    CHECK(cfg.mu_w == 1e-3);
    CHECK(cfg.p_max_w == 10.0);
    CHECK(cfg.noise_w == 1e-14);
    CHECK(cfg.penalty_tau == 10.0);
    CHECK(cfg.rician_k == 5.0);
    CHECK(cfg.rho0 == 1e-3);
    CHECK(cfg.sinr_target == 100.0);
    CHECK(cfg.alpha_bs_ris1 == 3.6);
    CHECK(cfg.alpha_bs_ris2 == 2.2);
    CHECK(cfg.ris1_pos.x == 2.0);
    CHECK(cfg.ris2_pos.x == 4.0);
    CHECK(cfg.user_center.x == 6.0);
    CHECK(cfg.user_radius == 2.0);
    CHECK_NOTHROW(cfg.validate());

    CHECK(feasible_defaults().mu_w == 1e-4);
}

TEST_CASE("file parsing with unit suffixes") {
    std::istringstream in(
        "# comment\n"
        "m = 2\n"
        "k = 3\n"
        "p_max = 30 dbm\n"
        "mu = 0.5 mw\n"
        "sigma2 = -100 dbm\n"
        "gamma_bar = 13 db\n"
        "rho0 = -30 db\n"
        "seed = 42\n");
    const SystemConfig cfg = load_config(in, feasible_defaults());
    CHECK(cfg.antennas == 2);
    CHECK(cfg.users == 3);
    CHECK(cfg.p_max_w == doctest::Approx(1.0));
    CHECK(cfg.mu_w == doctest::Approx(5e-4));
    CHECK(cfg.noise_w == doctest::Approx(1e-13));
    CHECK(cfg.sinr_target == doctest::Approx(19.952623));
    CHECK(cfg.rho0 == doctest::Approx(1e-3));
    CHECK(cfg.seed == 42);
}

TEST_CASE("parsing failures") {
    SystemConfig base = feasible_defaults();
    {
        std::istringstream in("unknown_key = 1\n");
        CHECK_THROWS_AS(load_config(in, base), DomainError);
    }
    {
        std::istringstream in("p_max = 10 volts\n");
        CHECK_THROWS_AS(load_config(in, base), DomainError);
    }
    {
        std::istringstream in("m = 0\n");
        CHECK_THROWS_AS(load_config(in, base), DomainError);
    }
    {
        std::istringstream in("n1 = 0\nn2 = 0\n");
        CHECK_THROWS_AS(load_config(in, base), DomainError);
    }
    {
        std::istringstream in("eta = 1.5\n");
        CHECK_THROWS_AS(load_config(in, base), DomainError);
    }
}

TEST_CASE("config hash tracks every field") {
    const SystemConfig base = feasible_defaults();
    CHECK(base.hash() == feasible_defaults().hash());

    SystemConfig changed = base;
    changed.noise_w *= 1.0 + 1e-12;
    CHECK(changed.hash() != base.hash());

    SystemConfig seeded = base;
    seeded.seed += 1;
    CHECK(seeded.hash() != base.hash());
}
