#pragma once
/// \file solver.hpp
/// 1D periodic pseudo-spectral ETD-RK2 solver for u_t + (-Lap)^alpha u = u - u^2,
/// with a library of initial-datum shapes (indicator, bump, algebraic,
/// plateau, stretched exponential).

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "fkpp/common.hpp"

namespace fkpp {
namespace solver {

struct SolverConfig {
    FracParams params;                   ///< d must be 1
    double L = 0.0;                      ///< periodic domain [-L, L)
    int N = 0;                           ///< grid size, power of two >= 4096
    double dt = 0.01;                    ///< timestep, <= 0.1
    double t_end = 0.0;
    std::vector<double> snapshot_times;  ///< sorted, within [0, t_end]
    bool dealias = true;                 ///< 2/3-rule truncation of the quadratic product
    double edge_guard = 0.5;             ///< abort threshold near boundaries, in (0,1)
    bool reaction_on = true;
};

/// Throws DomainError on any violated invariant (grid too coarse, dt too
/// large, snapshot times out of range, ...).
void validate_config(const SolverConfig& cfg);

/// Discrete field at one time; u[j] lives at x_j = -L + j 2L/N, j = 0..N-1.
struct FieldState {
    double t = 0.0;
    std::vector<double> u;
};

enum class DatumKind {
    indicator,              ///< eps on |x| <= r0, else 0
    smooth_bump,            ///< eps (1 - tanh((|x|-r0)/ramp))/2, exactly 0 past r0 + 19 ramp
    algebraic_profile,      ///< min(eps_alpha, eps_alpha r0^(1+2a) |x|^-(1+2a))
    plateau_stretched_exp,  ///< 1 on |x| <= W, exp(-(|x|-W)^alpha) outside
    stretched_exp_gamma     ///< min(1, exp(-gamma |x|^alpha))
};

DatumKind parse_datum_kind(const std::string& name);
const char* datum_kind_name(DatumKind kind);

struct DatumSpec {
    DatumKind kind = DatumKind::indicator;
    double eps = 0.5;
    double r0 = 1.0;
    double ramp = 0.25;
    double eps_alpha = 0.5;
    double W = 0.0;
    double gamma = 1.0;
};

/// Samples the profile on the grid, clamped to [0,1]. Throws DomainError when
/// the profile already violates the edge-guard margin at t = 0 (support too
/// wide for the domain).
FieldState make_initial_datum(const SolverConfig& cfg, const DatumSpec& spec);

struct SnapshotInfo {
    double t = 0.0;
    double mass = 0.0;      ///< h * sum(u), the periodic trapezoid
    double umin = 0.0;
    double umax = 0.0;
    double edge_max = 0.0;  ///< max |u| over the 5% of points nearest each boundary
};

/// Streaming snapshot consumer; the state reference is only valid during the
/// call (copy what you keep).
class SnapshotSink {
public:
    virtual ~SnapshotSink() = default;
    virtual void on_snapshot(const FieldState& state, const SnapshotInfo& info) = 0;
};

/// One ETD-RK2 time stepper. The linear symbol (reaction absorbed when on)
/// is applied exactly; phi-coefficients switch to series for |z| < 1e-4.
/// Not copyable; one stepper per run, usable from one thread at a time.
class Stepper {
public:
    Stepper(const SolverConfig& cfg, FieldState init);
    ~Stepper();
    Stepper(const Stepper&) = delete;
    Stepper& operator=(const Stepper&) = delete;

    /// Advance by dt. Throws ValidationError when the field leaves
    /// [-1e-10, 1+1e-10] (instability) and TruncationError when the edge
    /// guard trips (domain too small for the front). Spatially uniform
    /// fields are exempt from the guard: they truncate nothing.
    void step();

    const FieldState& state() const;
    SnapshotInfo info() const;
    /// Samples seen outside [0,1] but inside the tolerance band, over the run.
    long range_excursions() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

struct RunResult {
    std::vector<SnapshotInfo> snapshots;
    std::string termination;   ///< "completed" or "edge_guard_truncated"
    long steps = 0;
    double wall_seconds = 0.0;
    long range_excursions = 0;
};

/// Integrate to t_end, emitting snapshots at the nearest step to each
/// requested time (deduplicated, actual times recorded). On an edge-guard
/// trip the result carries the snapshots emitted so far and the truncation
/// marker; range violations propagate as ValidationError.
RunResult run(const SolverConfig& cfg, const DatumSpec& datum, SnapshotSink* sink = nullptr);

/// Convenience wrapper keeping full snapshots in memory.
struct CollectedRun {
    RunResult result;
    std::vector<FieldState> states;
};
CollectedRun run_collect(const SolverConfig& cfg, const DatumSpec& datum);

/// Long-format CSV "t,x,u", full round-trip precision, grid stride >= 1.
void write_snapshot_csv(std::ostream& os, const SolverConfig& cfg,
                        const std::vector<FieldState>& states, int stride = 1);

}  // namespace solver
}  // namespace fkpp
