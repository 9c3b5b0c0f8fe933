///  \file test_config.cpp
///  key = value experiment config parsing and the deterministic echo.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "fkpp/common.hpp"
#include "fkpp/config.hpp"

using namespace fkpp;

TEST_CASE("kv splitting, comments, trimming") {
    auto kv = config::parse_kv("a = 1\n# comment\n\n  b=2  # trailing\nc = hello world\n");
    CHECK(kv.size() == 3);
    CHECK(kv.at("a") == "1");
    CHECK(kv.at("b") == "2");
    CHECK(kv.at("c") == "hello world");
}

TEST_CASE("kv rejects malformed lines") {
    CHECK_THROWS_AS(config::parse_kv("novalue\n"), UsageError);
    CHECK_THROWS_AS(config::parse_kv("= 3\n"), UsageError);
    CHECK_THROWS_AS(config::parse_kv("key =\n"), UsageError);
    CHECK_THROWS_AS(config::parse_kv("a = 1\na = 2\n"), UsageError);
}

TEST_CASE("scalar parsers") {
    CHECK(config::parse_double("2.5e-3", "k") == 2.5e-3);
    CHECK_THROWS_AS(config::parse_double("abc", "k"), UsageError);
    CHECK_THROWS_AS(config::parse_double("1.5x", "k"), UsageError);
    CHECK_THROWS_AS(config::parse_double("inf", "k"), UsageError);
    CHECK(config::parse_long("16384", "k") == 16384);
    CHECK_THROWS_AS(config::parse_long("3.5", "k"), UsageError);
    CHECK(config::parse_bool("true", "k"));
    CHECK(config::parse_bool("1", "k"));
    CHECK_FALSE(config::parse_bool("false", "k"));
    CHECK_FALSE(config::parse_bool("0", "k"));
    CHECK_THROWS_AS(config::parse_bool("yes", "k"), UsageError);
}

TEST_CASE("list and range parsers") {
    auto xs = config::parse_double_list("1, 2.5,3", "k");
    REQUIRE(xs.size() == 3);
    CHECK(xs[1] == 2.5);
    CHECK_THROWS_AS(config::parse_double_list("1,,2", "k"), UsageError);

    auto ts = config::parse_times("0:0.5:2", "k");
    REQUIRE(ts.size() == 5);
    CHECK(ts[0] == 0.0);
    CHECK(ts[4] == 2.0);
    auto plain = config::parse_times("0.5,1.5", "k");
    CHECK(plain.size() == 2);
    CHECK_THROWS_AS(config::parse_times("2:0.5:1", "k"), UsageError);
    CHECK_THROWS_AS(config::parse_times("0:-1:5", "k"), UsageError);

    auto w = config::parse_window("1.5:4", "k");
    CHECK(w.lo == 1.5);
    CHECK(w.hi == 4.0);
    CHECK_THROWS_AS(config::parse_window("4:1.5", "k"), UsageError);
    CHECK_THROWS_AS(config::parse_window("4", "k"), UsageError);
}

static const char* kBaseConfig =
    "alpha = 0.75\n"
    "L = 100\n"
    "N = 4096\n"
    "dt = 0.01\n"
    "t_end = 1\n"
    "kind = smooth_bump\n";

TEST_CASE("experiment parsing with defaults") {
    auto cfg = config::parse_experiment(kBaseConfig);
    CHECK(cfg.solver.params.alpha == 0.75);
    CHECK(cfg.solver.params.d == 1);
    CHECK(cfg.solver.N == 4096);
    CHECK(cfg.solver.snapshot_times == std::vector<double>{1.0});
    CHECK(cfg.solver.dealias);
    CHECK(cfg.solver.reaction_on);
    CHECK(cfg.solver.edge_guard == 0.5);
    CHECK(cfg.level == 0.5);
    CHECK(cfg.side == front::Side::right);
    CHECK_FALSE(cfg.have_linear_window);
    CHECK_FALSE(cfg.have_exp_window);
    CHECK(cfg.alphas.empty());
    CHECK(cfg.datum.kind == solver::DatumKind::smooth_bump);
}

TEST_CASE("experiment parsing full set") {
    std::string text = kBaseConfig;
    text +=
        "snapshot_times = 0:0.25:1\n"
        "dealias = false\n"
        "reaction_on = false\n"
        "edge_guard = 0.05\n"
        "eps = 1\n"
        "r0 = 2\n"
        "ramp = 0.5\n"
        "level = 0.1\n"
        "side = left\n"
        "linear_window = 1:3\n"
        "exp_window = 5:9\n"
        "alphas = 0.99,0.999\n";
    auto cfg = config::parse_experiment(text);
    CHECK(cfg.solver.snapshot_times.size() == 5);
    CHECK_FALSE(cfg.solver.dealias);
    CHECK_FALSE(cfg.solver.reaction_on);
    CHECK(cfg.solver.edge_guard == 0.05);
    CHECK(cfg.datum.eps == 1.0);
    CHECK(cfg.datum.ramp == 0.5);
    CHECK(cfg.level == 0.1);
    CHECK(cfg.side == front::Side::left);
    CHECK(cfg.have_linear_window);
    CHECK(cfg.linear_window.lo == 1.0);
    CHECK(cfg.exp_window.hi == 9.0);
    REQUIRE(cfg.alphas.size() == 2);
    CHECK(cfg.alphas[1] == 0.999);
}

TEST_CASE("experiment rejects bad input") {
    // Unknown key.
    CHECK_THROWS_AS(config::parse_experiment(std::string(kBaseConfig) + "bogus = 1\n"),
                    UsageError);
    // Missing required key.
    CHECK_THROWS_AS(config::parse_experiment("alpha = 0.75\nL = 100\n"), UsageError);
    // Bad kind.
    CHECK_THROWS_AS(config::parse_experiment(
                        "alpha = .75\nL = 100\nN = 4096\ndt = 0.01\nt_end = 1\nkind = blob\n"),
                    DomainError);
    // Solver-level validation still applies (N not a power of two).
    CHECK_THROWS_AS(config::parse_experiment(
                        "alpha = .75\nL = 100\nN = 4100\ndt = 0.01\nt_end = 1\nkind = indicator\n"),
                    DomainError);
    // level outside (0,1).
    CHECK_THROWS_AS(config::parse_experiment(std::string(kBaseConfig) + "level = 1\n"),
                    DomainError);
}

TEST_CASE("echo json is deterministic and ordered") {
    auto cfg = config::parse_experiment(std::string(kBaseConfig) + "linear_window = 1:3\n");
    const std::string a = config::echo_json(cfg);
    const std::string b = config::echo_json(cfg);
    CHECK(a == b);
    CHECK(a.rfind("{\"alpha\":0.75,\"d\":1,\"L\":100,\"N\":4096,\"dt\":0.01,\"t_end\":1,", 0) == 0);
    CHECK(a.find("\"snapshot_times\":[1]") != std::string::npos);
    CHECK(a.find("\"kind\":\"smooth_bump\"") != std::string::npos);
    CHECK(a.find("\"linear_window\":[1,3]") != std::string::npos);
    CHECK(a.find("\"exp_window\":") == std::string::npos);  // absent window stays out
    CHECK(a.find("\"alphas\":") == std::string::npos);
    CHECK(a.back() == '}');
}
