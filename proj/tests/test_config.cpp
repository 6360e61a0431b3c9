#include <catch2/catch_amalgamated.hpp>

#include "shiftspec/config.hpp"

using namespace shiftspec;

TEST_CASE("minimal config gets the documented defaults") {
    RunConfig cfg = parse_config("space.kind = hardy\nperturbation.p1.f = 2\n");
    CHECK(cfg.space_kind == SpaceKind::hardy);
    CHECK(cfg.trunc == 256);
    CHECK(cfg.n_max == 32);
    CHECK(cfg.power_steps == 12);
    CHECK(cfg.grid.resolution == 201);
    CHECK(cfg.gap == 10.0);
    CHECK(cfg.tau_value() == Catch::Approx(10.0 / std::sqrt(256.0)));
    REQUIRE(cfg.perturbations.size() == 1);
    CHECK(cfg.perturbations[0].f_coeffs[0] == ComplexRational(2));
    CHECK(cfg.perturbations[0].gamma == ComplexRational(1));
}

TEST_CASE("rational literals parse inside coefficient lists") {
    RunConfig cfg = parse_config(
        "space.kind = hardy\n"
        "perturbation.a.f = 1/2+0/1 i, -1\n"
        "perturbation.a.g = 2/3\n");
    REQUIRE(cfg.perturbations.size() == 1);
    CHECK(cfg.perturbations[0].f_coeffs[0] == ComplexRational(Rational(1, 2)));
    CHECK(cfg.perturbations[0].f_coeffs[1] == ComplexRational(-1));
    CHECK(cfg.perturbations[0].gamma == ComplexRational(Rational(2, 3)));
}

TEST_CASE("config errors carry line numbers") {
    try {
        parse_config("space.kind = hardy\nnumeric.bogus = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("unknown key") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_config("space.kind = venus\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("space.kind = hardy\nnumeric.N = 16\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("space.kind = hardy\nnumeric.grid.resolution = 100\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("space.kind = hardy\nperturbation.p1.f = \n"), ConfigError);
    CHECK_THROWS_AS(parse_config("space.kind = hardy\nperturbation.p1.f = 1/0\n"), ConfigError);
}

TEST_CASE("custom spaces require valid tables") {
    // a_0 != 1 violates the normalization axiom
    CHECK_THROWS_AS(parse_config("space.kind = custom\n"
                                 "space.weight.0 = 2\n"
                                 "space.weight.1 = 1\n"
                                 "space.rho_min = 1/2\n"
                                 "space.rho_max = 2\n"
                                 "perturbation.p1.f = 2\n"),
                    ConfigError);
    // missing declared ratio bounds
    CHECK_THROWS_AS(parse_config("space.kind = custom\n"
                                 "space.weight.0 = 1\n"
                                 "space.weight.1 = 2\n"
                                 "perturbation.p1.f = 2\n"),
                    ConfigError);
    // weight keys without custom kind are rejected
    CHECK_THROWS_AS(parse_config("space.kind = bergman\n"
                                 "space.weight.0 = 1\n"
                                 "perturbation.p1.f = 2\n"),
                    ConfigError);

    RunConfig ok = parse_config(
        "space.kind = custom\n"
        "space.weight.0 = 1\n"
        "space.weight.1 = 2\n"
        "space.weight.2 = 4\n"
        "space.rho_min = 1/2\n"
        "space.rho_max = 1/2\n"
        "perturbation.p1.f = 2\n");
    WeightSequence space = ok.space();
    CHECK(space.weight(5) == 32);
}

TEST_CASE("comments, blank lines and whitespace are tolerated") {
    RunConfig cfg = parse_config(
        "# comment\n"
        "\n"
        "space.kind = dirichlet   # trailing comment\n"
        "  perturbation.p1.f   =   2 , 1/3  \n"
        "numeric.run_scans = false\n"
        "output.dir = somewhere\n");
    CHECK(cfg.space_kind == SpaceKind::dirichlet);
    CHECK(cfg.perturbations[0].f_coeffs.size() == 2);
    CHECK_FALSE(cfg.run_scans);
    CHECK(cfg.out_dir == "somewhere");
}

TEST_CASE("the default config drives the stock suite") {
    RunConfig cfg = parse_config(default_config_text());
    CHECK(cfg.perturbations.size() == 6);
    std::vector<SuiteInstance> instances = cfg.suite_instances();
    CHECK(instances.size() == 6);
    CHECK(instances[0].space.kind() == SpaceKind::hardy);
}
