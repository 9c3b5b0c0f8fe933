#pragma once
/// \file front.hpp
/// Level-set front extraction, regime fitting (linear speed / exponential
/// rate / crossover), and the alpha transition sweep.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/common.hpp"
#include "fkpp/solver.hpp"

namespace fkpp {
namespace front {

enum class Side { right, left };
Side parse_side(const std::string& name);
const char* side_name(Side side);

/// Outermost crossing of u = level on the requested side, linearly
/// interpolated between the bracketing grid values. Empty when the level is
/// not crossed anywhere.
std::optional<double> extract_front(const solver::SolverConfig& cfg,
                                    const solver::FieldState& state, double level, Side side);

struct FrontTrace {
    double level = 0.5;
    Side side = Side::right;
    std::vector<double> t;  ///< sorted snapshot times with a crossing
    std::vector<double> x;  ///< crossing positions (signed)
    bool complete = true;   ///< false if some snapshot had no crossing
};

FrontTrace trace_from_states(const solver::SolverConfig& cfg,
                             const std::vector<solver::FieldState>& states, double level,
                             Side side);

struct Window {
    double lo = 0.0;
    double hi = 0.0;
};

struct RegimeFit {
    Window linear_window, exp_window;
    double linear_intercept = 0.0;
    double sigma_linear = 0.0;  ///< slope of |x| vs t on the linear window
    double linear_rms = 0.0;
    double exp_intercept = 0.0;
    double sigma_exp = 0.0;  ///< slope of ln|x| vs t on the exponential window
    double exp_rms = 0.0;
    /// First sample time with |x| >= 2 (linear_intercept + sigma_linear t);
    /// absent when the trace never departs that far.
    std::optional<double> crossover_time;
};

/// Ordinary least squares on (t, |x|) over linear_window and (t, ln|x|) over
/// exp_window; positions enter in absolute value so both sides yield positive
/// speeds. Requires >= 5 samples per window; throws ValidationError on
/// insufficient samples, zero time variance, or a nonpositive |x| in the
/// exponential window.
RegimeFit fit_regimes(const FrontTrace& trace, Window linear_window, Window exp_window);

struct SweepScenario {
    solver::SolverConfig config;  ///< alpha is overridden per sweep member
    solver::DatumSpec datum;
    double level = 0.5;
    Side side = Side::right;
    Window linear_window, exp_window;
};

struct SweepEntry {
    double alpha = 0.0;
    bool ok = false;
    std::string error;  ///< failure description when !ok
    FrontTrace trace;   ///< kept so sweep outputs need no second run
    RegimeFit fit;
    std::optional<double> crossover_time;
    double tau_alpha = 0.0;
    double tau_log = 0.0;
};

/// Run the scenario once per alpha (each alpha in (0.5, 1)), extract the
/// trace, fit regimes, and pair the crossover with tau_alpha and -ln(1-alpha).
/// Per-alpha failures are recorded in the entry; the sweep continues. Members
/// run concurrently on up to max_threads threads.
std::vector<SweepEntry> transition_sweep(const std::vector<double>& alphas,
                                         const SweepScenario& scenario, int max_threads = 1);

/// CSV "alpha,level,side,t,x".
void write_trace_csv(std::ostream& os, double alpha, const FrontTrace& trace);

/// CSV "alpha,crossover_time,tau_alpha,tau_log" (crossover empty when absent
/// or failed).
void write_transition_csv(std::ostream& os, const std::vector<SweepEntry>& entries);

/// One-line JSON with sigma_linear, sigma_exp, crossover_time and windows;
/// tau fields are null unless provided.
std::string fit_json(double alpha, double level, const RegimeFit& fit,
                     std::optional<double> tau_alpha = std::nullopt,
                     std::optional<double> tau_log = std::nullopt);

}  // namespace front
}  // namespace fkpp
