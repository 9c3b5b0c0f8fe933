///  \file test_front.cpp
///  Front extraction and regime fitting on synthetic fields and traces.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "fkpp/common.hpp"
#include "fkpp/front.hpp"

using namespace fkpp;

namespace {
solver::SolverConfig grid_config() {
    solver::SolverConfig cfg;
    cfg.params = {0.75, 1};
    cfg.L = 100.0;
    cfg.N = 4096;
    cfg.t_end = 1.0;
    cfg.snapshot_times = {1.0};
    return cfg;
}

solver::FieldState step_state(const solver::SolverConfig& cfg, double edge, double t = 0.0) {
    // u = 1 on [-edge, edge], 0 outside; the level-h crossing interpolates to
    // the midpoint of the bracketing cell.
    solver::FieldState s;
    s.t = t;
    s.u.assign(cfg.N, 0.0);
    const double h = 2.0 * cfg.L / cfg.N;
    for (int j = 0; j < cfg.N; ++j) {
        const double x = -cfg.L + j * h;
        if (std::fabs(x) <= edge) s.u[j] = 1.0;
    }
    return s;
}
}  // namespace

TEST_CASE("side parsing round-trips") {
    CHECK(front::parse_side("right") == front::Side::right);
    CHECK(front::parse_side("left") == front::Side::left);
    CHECK(std::string(front::side_name(front::Side::left)) == "left");
    CHECK_THROWS_AS(front::parse_side("up"), DomainError);
}

TEST_CASE("step profile crossing interpolates to the half cell") {
    auto cfg = grid_config();
    const double h = 2.0 * cfg.L / cfg.N;
    auto s = step_state(cfg, 10.0);
    auto xr = front::extract_front(cfg, s, 0.5, front::Side::right);
    auto xl = front::extract_front(cfg, s, 0.5, front::Side::left);
    REQUIRE(xr.has_value());
    REQUIRE(xl.has_value());
    // Right crossing sits half a cell beyond the last interior node; the left
    // one mirrors it.
    const double j_hi = std::floor((10.0 + cfg.L) / h);
    const double want_r = -cfg.L + j_hi * h + 0.5 * h;
    CHECK(*xr == doctest::Approx(want_r).epsilon(1e-12));
    CHECK(*xl == doctest::Approx(-want_r).epsilon(1e-12));
}

TEST_CASE("absent crossings") {
    auto cfg = grid_config();
    solver::FieldState s;
    s.u.assign(cfg.N, 0.2);
    CHECK_FALSE(front::extract_front(cfg, s, 0.5, front::Side::right).has_value());
    // Constant field equal to the level everywhere: equality is never a
    // bracketing sign change, so no crossing is reported.
    for (auto& v : s.u) v = 0.5;
    CHECK_FALSE(front::extract_front(cfg, s, 0.5, front::Side::right).has_value());
}

TEST_CASE("trace over synthetic snapshots") {
    auto cfg = grid_config();
    std::vector<solver::FieldState> states;
    states.push_back(step_state(cfg, 5.0, 0.0));
    states.push_back(step_state(cfg, 10.0, 1.0));
    states.push_back(step_state(cfg, 15.0, 2.0));
    auto tr = front::trace_from_states(cfg, states, 0.5, front::Side::right);
    CHECK(tr.complete);
    REQUIRE(tr.t.size() == 3);
    CHECK(tr.t[0] == 0.0);
    CHECK(tr.t[2] == 2.0);
    CHECK(tr.x[2] > tr.x[1]);
    CHECK(tr.x[1] > tr.x[0]);

    // A snapshot without a crossing marks the trace incomplete but is skipped.
    solver::FieldState flat;
    flat.t = 3.0;
    flat.u.assign(cfg.N, 0.0);
    states.push_back(flat);
    auto tr2 = front::trace_from_states(cfg, states, 0.5, front::Side::right);
    CHECK_FALSE(tr2.complete);
    CHECK(tr2.t.size() == 3);
}

TEST_CASE("exact fits on synthetic traces") {
    // x = 2 t + 1 on [0,10] and |x| = 5 e^{0.4 t} on [10,20]; both windows
    // recover their parameters to near machine precision.
    front::FrontTrace tr;
    tr.level = 0.5;
    tr.side = front::Side::right;
    for (int i = 0; i <= 80; ++i) {
        const double t = 0.25 * i;
        tr.t.push_back(t);
        tr.x.push_back(t <= 10.0 ? 2.0 * t + 1.0 : 5.0 * std::exp(0.4 * t));
    }
    auto fit = front::fit_regimes(tr, {0.0, 10.0}, {10.25, 20.0});
    CHECK(fit.sigma_linear == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(fit.linear_intercept == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fit.linear_rms < 1e-10);
    CHECK(fit.sigma_exp == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(std::exp(fit.exp_intercept) == doctest::Approx(5.0).epsilon(1e-10));
    CHECK(fit.exp_rms < 1e-10);
}

TEST_CASE("crossover detection past the linear window") {
    // Piecewise trace: x = t up to t = 10, then x = 10 e^{0.5(t-10)}. The
    // linear extrapolation is x = t, so the detector wants x >= 2t past the
    // linear window: at t = 11.5 the trace reads 21.2 vs threshold 23, at
    // t = 11.75 it reads 23.99 vs 23.5, so the quarter grid crosses at 11.75.
    front::FrontTrace tr;
    for (int i = 0; i <= 80; ++i) {
        const double t = 0.25 * i;
        tr.t.push_back(t);
        tr.x.push_back(t <= 10.0 ? t : 10.0 * std::exp(0.5 * (t - 10.0)));
    }
    auto fit = front::fit_regimes(tr, {0.0, 10.0}, {12.0, 20.0});
    REQUIRE(fit.crossover_time.has_value());
    CHECK(*fit.crossover_time == doctest::Approx(11.75));

    // Samples inside the linear window itself never count, even where the
    // early trace dips under half the fitted line.
    front::FrontTrace flat;
    for (int i = 0; i <= 80; ++i) {
        const double t = 0.25 * i;
        flat.t.push_back(t);
        flat.x.push_back(1.0 + t);
    }
    auto f2 = front::fit_regimes(flat, {0.0, 10.0}, {12.0, 20.0});
    CHECK_FALSE(f2.crossover_time.has_value());
}

TEST_CASE("fit error conditions") {
    front::FrontTrace tr;
    for (int i = 0; i < 4; ++i) {
        tr.t.push_back(i);
        tr.x.push_back(i + 1.0);
    }
    // Fewer than 5 samples in a window.
    CHECK_THROWS_AS(front::fit_regimes(tr, {0.0, 3.0}, {0.0, 3.0}), ValidationError);

    front::FrontTrace same;
    for (int i = 0; i < 6; ++i) {
        same.t.push_back(2.0);
        same.x.push_back(3.0);
    }
    CHECK_THROWS_AS(front::fit_regimes(same, {1.0, 3.0}, {1.0, 3.0}), ValidationError);

    // Nonpositive |x| inside the exponential window.
    front::FrontTrace zero;
    for (int i = 0; i <= 10; ++i) {
        zero.t.push_back(i);
        zero.x.push_back(i >= 5 ? 0.0 : 1.0 + i);
    }
    CHECK_THROWS_AS(front::fit_regimes(zero, {0.0, 4.0}, {4.0, 10.0}), ValidationError);

    // Degenerate windows are rejected outright.
    CHECK_THROWS_AS(front::fit_regimes(tr, {3.0, 1.0}, {0.0, 3.0}), DomainError);
}

TEST_CASE("trace csv golden") {
    front::FrontTrace tr;
    tr.level = 0.5;
    tr.side = front::Side::right;
    tr.t = {0.0, 0.5};
    tr.x = {1.25, 2.5};
    std::ostringstream os;
    front::write_trace_csv(os, 0.75, tr);
    CHECK(os.str() ==
          "alpha,level,side,t,x\n"
          "0.75,0.5,right,0,1.25\n"
          "0.75,0.5,right,0.5,2.5\n");
}

TEST_CASE("fit json shape") {
    front::FrontTrace tr;
    for (int i = 0; i <= 80; ++i) {
        const double t = 0.25 * i;
        tr.t.push_back(t);
        tr.x.push_back(t <= 10.0 ? t : 10.0 * std::exp(0.5 * (t - 10.0)));
    }
    auto fit = front::fit_regimes(tr, {0.0, 10.0}, {12.0, 20.0});
    const std::string with_tau = front::fit_json(0.9, 0.5, fit, 5.76, 2.30);
    CHECK(with_tau.rfind("{\"alpha\":0.9,\"level\":0.5,", 0) == 0);
    CHECK(with_tau.find("\"sigma_linear\":") != std::string::npos);
    CHECK(with_tau.find("\"sigma_exp\":") != std::string::npos);
    CHECK(with_tau.find("\"crossover_time\":") != std::string::npos);
    CHECK(with_tau.find("\"tau_alpha\":5.76") != std::string::npos);
    CHECK(with_tau.find("\"tau_log\":2.3") != std::string::npos);
    CHECK(with_tau.find("\"linear_window\":[0,10]") != std::string::npos);

    const std::string no_tau = front::fit_json(0.9, 0.5, fit);
    CHECK(no_tau.find("\"tau_alpha\":null") != std::string::npos);
    CHECK(no_tau.find("\"tau_log\":null") != std::string::npos);
}

TEST_CASE("transition sweep alpha validation") {
    front::SweepScenario sc;
    sc.config = grid_config();
    CHECK_THROWS_AS(front::transition_sweep({0.4}, sc), DomainError);
    CHECK_THROWS_AS(front::transition_sweep({1.0}, sc), DomainError);
}
