#pragma once
/// \file config.hpp
/// Flat key = value experiment configs for the solve/front/sweep commands.

#include <map>
#include <string>
#include <vector>

#include "fkpp/common.hpp"
#include "fkpp/front.hpp"
#include "fkpp/solver.hpp"

namespace fkpp {
namespace config {

/// One `key = value` pair per line; '#' starts a comment, blank lines are
/// ignored. Duplicate keys are rejected (UsageError).
std::map<std::string, std::string> parse_kv(const std::string& text);

struct ExperimentConfig {
    solver::SolverConfig solver;
    solver::DatumSpec datum;
    double level = 0.5;
    front::Side side = front::Side::right;
    front::Window linear_window, exp_window;
    bool have_linear_window = false;
    bool have_exp_window = false;
    std::vector<double> alphas;  ///< sweep members; empty otherwise
};

/// Parse and validate an experiment config. Keys are exactly the solver,
/// datum, and window field names (alpha, d, L, N, dt, t_end, snapshot_times,
/// dealias, edge_guard, reaction_on, kind, eps, r0, ramp, eps_alpha, W,
/// gamma, level, side, linear_window, exp_window, alphas); unknown keys are
/// rejected. Required: alpha, L, N, dt, t_end, kind. snapshot_times accepts a
/// comma list or "start:step:end"; windows are "lo:hi". Defaults:
/// snapshot_times = {t_end}, level 0.5, side right, dealias/reaction on,
/// edge_guard 0.5, d 1.
ExperimentConfig parse_experiment(const std::string& text);

double parse_double(const std::string& s, const std::string& key);
long parse_long(const std::string& s, const std::string& key);
bool parse_bool(const std::string& s, const std::string& key);
std::vector<double> parse_double_list(const std::string& s, const std::string& key);
/// Comma list, or "start:step:end" (inclusive, step > 0).
std::vector<double> parse_times(const std::string& s, const std::string& key);
front::Window parse_window(const std::string& s, const std::string& key);

/// Deterministic JSON object echoing every effective setting, fixed key order.
std::string echo_json(const ExperimentConfig& cfg);

}  // namespace config
}  // namespace fkpp
