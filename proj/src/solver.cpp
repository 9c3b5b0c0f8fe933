#include "fkpp/solver.hpp"

#include <fftw3.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>
#include <ostream>

#include "fftw_guard.hpp"

namespace fkpp {
namespace solver {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void validate_config(const SolverConfig& cfg) {
    if (cfg.params.d != 1) throw DomainError("solver requires d == 1");
    check_alpha(cfg.params.alpha, true);
    if (!(cfg.L > 0.0) || !std::isfinite(cfg.L)) throw DomainError("L must be positive");
    if (!power_of_two(cfg.N) || cfg.N < 4096)
        throw DomainError("N must be a power of two >= 4096");
    if (!(cfg.dt > 0.0) || cfg.dt > 0.1) throw DomainError("dt must lie in (0, 0.1]");
    if (!(cfg.t_end >= 0.0) || !std::isfinite(cfg.t_end)) throw DomainError("t_end must be >= 0");
    const double slack = 1e-12 * std::max(1.0, cfg.t_end);
    for (size_t i = 0; i < cfg.snapshot_times.size(); ++i) {
        const double ts = cfg.snapshot_times[i];
        if (!(ts >= 0.0) || ts > cfg.t_end + slack)
            throw DomainError("snapshot times must lie in [0, t_end]");
        if (i > 0 && ts < cfg.snapshot_times[i - 1])
            throw DomainError("snapshot times must be sorted");
    }
    if (!(cfg.edge_guard > 0.0 && cfg.edge_guard < 1.0))
        throw DomainError("edge_guard must lie in (0,1)");
    if (2.0 * cfg.L / cfg.N > 0.5)
        throw DomainError("grid too coarse: 2L/N must be <= 0.5");
}

DatumKind parse_datum_kind(const std::string& name) {
    if (name == "indicator") return DatumKind::indicator;
    if (name == "smooth_bump") return DatumKind::smooth_bump;
    if (name == "algebraic_profile") return DatumKind::algebraic_profile;
    if (name == "plateau_stretched_exp") return DatumKind::plateau_stretched_exp;
    if (name == "stretched_exp_gamma") return DatumKind::stretched_exp_gamma;
    throw DomainError("unknown initial datum kind: " + name);
}

const char* datum_kind_name(DatumKind kind) {
    switch (kind) {
        case DatumKind::indicator: return "indicator";
        case DatumKind::smooth_bump: return "smooth_bump";
        case DatumKind::algebraic_profile: return "algebraic_profile";
        case DatumKind::plateau_stretched_exp: return "plateau_stretched_exp";
        case DatumKind::stretched_exp_gamma: return "stretched_exp_gamma";
    }
    throw DomainError("unknown initial datum kind");
}

namespace {

double edge_abs_max(const std::vector<double>& u) {
    const int n = static_cast<int>(u.size());
    const int m = n / 20;
    double v = 0.0;
    for (int j = 0; j < m; ++j) v = std::max(v, std::fabs(u[j]));
    for (int j = n - m; j < n; ++j) v = std::max(v, std::fabs(u[j]));
    return v;
}

/// A spatially uniform state is translation invariant: the periodic window
/// truncates nothing, so the edge guard has nothing to protect against.
/// Only called on the would-reject path, so the full scan stays off the
/// common fast path.
bool uniform_field(const std::vector<double>& u) {
    double lo = u[0], hi = u[0];
    for (double v : u) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo <= 1e-12 * std::max(1.0, std::fabs(hi));
}

SnapshotInfo info_of(const SolverConfig& cfg, const FieldState& state) {
    SnapshotInfo info;
    info.t = state.t;
    const double h = 2.0 * cfg.L / cfg.N;
    double sum = 0.0, lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double v : state.u) {
        sum += v;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    info.mass = h * sum;
    info.umin = lo;
    info.umax = hi;
    info.edge_max = edge_abs_max(state.u);
    return info;
}

}  // namespace

FieldState make_initial_datum(const SolverConfig& cfg, const DatumSpec& spec) {
    validate_config(cfg);
    const double a = cfg.params.alpha;
    switch (spec.kind) {
        case DatumKind::indicator:
            if (!(spec.eps > 0.0 && spec.eps <= 1.0)) throw DomainError("indicator eps must lie in (0,1]");
            if (!(spec.r0 > 0.0)) throw DomainError("indicator r0 must be positive");
            break;
        case DatumKind::smooth_bump:
            if (!(spec.eps > 0.0 && spec.eps <= 1.0)) throw DomainError("smooth_bump eps must lie in (0,1]");
            if (!(spec.r0 > 0.0)) throw DomainError("smooth_bump r0 must be positive");
            if (!(spec.ramp > 0.0)) throw DomainError("smooth_bump ramp must be positive");
            break;
        case DatumKind::algebraic_profile:
            if (!(spec.eps_alpha > 0.0 && spec.eps_alpha <= 1.0))
                throw DomainError("algebraic_profile eps_alpha must lie in (0,1]");
            if (!(spec.r0 > 0.0)) throw DomainError("algebraic_profile r0 must be positive");
            break;
        case DatumKind::plateau_stretched_exp:
            if (!(spec.W > 0.0 && spec.W < cfg.L))
                throw DomainError("plateau W must lie in (0, L)");
            break;
        case DatumKind::stretched_exp_gamma:
            if (!(spec.gamma > 0.0)) throw DomainError("gamma must be positive");
            break;
    }

    FieldState state;
    state.t = 0.0;
    state.u.resize(cfg.N);
    const double h = 2.0 * cfg.L / cfg.N;
    for (int j = 0; j < cfg.N; ++j) {
        const double x = -cfg.L + j * h;
        const double r = std::fabs(x);
        double v = 0.0;
        switch (spec.kind) {
            case DatumKind::indicator:
                v = r <= spec.r0 ? spec.eps : 0.0;
                break;
            case DatumKind::smooth_bump:
                v = r >= spec.r0 + 19.0 * spec.ramp
                        ? 0.0
                        : spec.eps * 0.5 * (1.0 - std::tanh((r - spec.r0) / spec.ramp));
                break;
            case DatumKind::algebraic_profile:
                v = r <= spec.r0
                        ? spec.eps_alpha
                        : spec.eps_alpha * std::pow(spec.r0 / r, 1.0 + 2.0 * a);
                break;
            case DatumKind::plateau_stretched_exp:
                v = r <= spec.W ? 1.0 : std::exp(-std::pow(r - spec.W, a));
                break;
            case DatumKind::stretched_exp_gamma:
                v = std::exp(-spec.gamma * std::pow(r, a));
                break;
        }
        state.u[j] = std::min(1.0, std::max(0.0, v));
    }
    const double em = edge_abs_max(state.u);
    if (em > cfg.edge_guard && !uniform_field(state.u))
        throw DomainError("initial datum support too wide: boundary zone max " +
                          std::to_string(em) + " exceeds edge_guard");
    return state;
}

struct Stepper::Impl {
    SolverConfig cfg;
    FieldState state;
    double t0 = 0.0;
    long nstep = 0;
    long excursions = 0;
    int N = 0, nc = 0, cut = 0;
    double invN = 0.0;

    double* ur = nullptr;
    double* wr = nullptr;
    fftw_complex* cs = nullptr;
    fftw_complex* uhat = nullptr;
    fftw_complex* ahat = nullptr;
    fftw_complex* nuh = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    std::vector<double> E, f1, f2;

    Impl(const SolverConfig& c, FieldState init) : cfg(c), state(std::move(init)) {
        validate_config(cfg);
        N = cfg.N;
        if (static_cast<int>(state.u.size()) != N)
            throw DomainError("initial field size does not match the grid");
        t0 = state.t;
        nc = N / 2 + 1;
        cut = N / 3;
        invN = 1.0 / N;

        ur = fftw_alloc_real(N);
        wr = fftw_alloc_real(N);
        cs = fftw_alloc_complex(nc);
        uhat = fftw_alloc_complex(nc);
        ahat = fftw_alloc_complex(nc);
        nuh = fftw_alloc_complex(nc);
        {
            std::lock_guard<std::mutex> lock(fftw_plan_mutex());
            fwd = fftw_plan_dft_r2c_1d(N, wr, cs, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(N, cs, wr, FFTW_ESTIMATE);
        }

        std::memcpy(ur, state.u.data(), N * sizeof(double));
        std::memcpy(wr, ur, N * sizeof(double));
        fftw_execute(fwd);
        std::memcpy(uhat, cs, nc * sizeof(fftw_complex));

        // ETD coefficients per mode
        E.resize(nc);
        f1.resize(nc);
        f2.resize(nc);
        const double a2 = 2.0 * cfg.params.alpha;
        const double base = cfg.reaction_on ? 1.0 : 0.0;
        for (int m = 0; m < nc; ++m) {
            const double k = PI * m / cfg.L;
            const double z = (base - std::pow(k, a2)) * cfg.dt;
            E[m] = std::exp(z);
            if (std::fabs(z) < 1e-4) {
                f1[m] = cfg.dt * (1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0);
                f2[m] = cfg.dt * (0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0);
            } else {
                f1[m] = cfg.dt * (E[m] - 1.0) / z;
                f2[m] = cfg.dt * (E[m] - 1.0 - z) / (z * z);
            }
        }
    }

    ~Impl() {
        {
            std::lock_guard<std::mutex> lock(fftw_plan_mutex());
            if (fwd) fftw_destroy_plan(fwd);
            if (bwd) fftw_destroy_plan(bwd);
        }
        fftw_free(ur);
        fftw_free(wr);
        fftw_free(cs);
        fftw_free(uhat);
        fftw_free(ahat);
        fftw_free(nuh);
    }

    void dealias(fftw_complex* v) const {
        if (!cfg.dealias) return;
        for (int m = cut + 1; m < nc; ++m) v[m][0] = v[m][1] = 0.0;
    }

    void step() {
        if (cfg.reaction_on) {
            for (int j = 0; j < N; ++j) wr[j] = ur[j] * ur[j];
            fftw_execute_dft_r2c(fwd, wr, cs);
            dealias(cs);
            for (int m = 0; m < nc; ++m) {
                nuh[m][0] = -cs[m][0];
                nuh[m][1] = -cs[m][1];
                ahat[m][0] = E[m] * uhat[m][0] + f1[m] * nuh[m][0];
                ahat[m][1] = E[m] * uhat[m][1] + f1[m] * nuh[m][1];
            }
            std::memcpy(cs, ahat, nc * sizeof(fftw_complex));
            fftw_execute(bwd);  // wr = N * a
            for (int j = 0; j < N; ++j) {
                const double aj = wr[j] * invN;
                wr[j] = aj * aj;
            }
            fftw_execute_dft_r2c(fwd, wr, cs);
            dealias(cs);
            for (int m = 0; m < nc; ++m) {
                uhat[m][0] = ahat[m][0] + f2[m] * (-cs[m][0] - nuh[m][0]);
                uhat[m][1] = ahat[m][1] + f2[m] * (-cs[m][1] - nuh[m][1]);
            }
        } else {
            for (int m = 0; m < nc; ++m) {
                uhat[m][0] *= E[m];
                uhat[m][1] *= E[m];
            }
        }
        std::memcpy(cs, uhat, nc * sizeof(fftw_complex));
        fftw_execute(bwd);

        double lo = HUGE_VAL, hi = -HUGE_VAL;
        long exc = 0;
        for (int j = 0; j < N; ++j) {
            double v = wr[j] * invN;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            if (v < 0.0) {
                if (v >= -1e-10) {
                    v = 0.0;
                    ++exc;
                }
            } else if (v > 1.0 && v <= 1.0 + 1e-10) {
                v = 1.0;
                ++exc;
            }
            ur[j] = v;
        }
        ++nstep;
        const double t = t0 + nstep * cfg.dt;
        if (lo < -1e-10 || hi > 1.0 + 1e-10)
            throw ValidationError("field range violation at t = " + std::to_string(t) +
                                  ": min " + std::to_string(lo) + ", max " + std::to_string(hi));
        excursions += exc;
        if (exc > 0) {
            // The clamp edits the physical field; rebuild the spectral state to
            // match, otherwise sub-tolerance noise keeps compounding there.
            std::memcpy(wr, ur, N * sizeof(double));
            fftw_execute_dft_r2c(fwd, wr, cs);
            for (int m = 0; m < nc; ++m) {
                uhat[m][0] = cs[m][0];
                uhat[m][1] = cs[m][1];
            }
        }
        state.t = t;
        std::memcpy(state.u.data(), ur, N * sizeof(double));
        const double em = edge_abs_max(state.u);
        if (em > cfg.edge_guard && !uniform_field(state.u))
            throw TruncationError("edge guard tripped at t = " + std::to_string(t) +
                                  ": boundary zone max " + std::to_string(em));
    }
};

Stepper::Stepper(const SolverConfig& cfg, FieldState init)
    : impl_(new Impl(cfg, std::move(init))) {}
Stepper::~Stepper() = default;
void Stepper::step() { impl_->step(); }
const FieldState& Stepper::state() const { return impl_->state; }
SnapshotInfo Stepper::info() const { return info_of(impl_->cfg, impl_->state); }
long Stepper::range_excursions() const { return impl_->excursions; }

RunResult run(const SolverConfig& cfg, const DatumSpec& datum, SnapshotSink* sink) {
    validate_config(cfg);
    FieldState init = make_initial_datum(cfg, datum);
    const long nsteps = std::lround(cfg.t_end / cfg.dt);

    std::vector<long> idx;
    for (double ts : cfg.snapshot_times)
        idx.push_back(std::min(nsteps, std::max(0L, std::lround(ts / cfg.dt))));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

    const auto t_start = std::chrono::steady_clock::now();
    Stepper st(cfg, std::move(init));
    RunResult result;
    result.termination = "completed";
    size_t next = 0;
    auto emit = [&](long i) {
        if (next < idx.size() && idx[next] == i) {
            SnapshotInfo info = st.info();
            result.snapshots.push_back(info);
            if (sink) sink->on_snapshot(st.state(), info);
            ++next;
        }
    };
    emit(0);
    for (long i = 1; i <= nsteps; ++i) {
        try {
            st.step();
        } catch (const TruncationError&) {
            result.termination = "edge_guard_truncated";
            break;
        }
        result.steps = i;
        emit(i);
    }
    result.range_excursions = st.range_excursions();
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

namespace {

class CollectSink : public SnapshotSink {
public:
    explicit CollectSink(std::vector<FieldState>& out) : out_(out) {}
    void on_snapshot(const FieldState& state, const SnapshotInfo&) override {
        out_.push_back(state);
    }

private:
    std::vector<FieldState>& out_;
};

}  // namespace

CollectedRun run_collect(const SolverConfig& cfg, const DatumSpec& datum) {
    CollectedRun out;
    CollectSink sink(out.states);
    out.result = run(cfg, datum, &sink);
    return out;
}

void write_snapshot_csv(std::ostream& os, const SolverConfig& cfg,
                        const std::vector<FieldState>& states, int stride) {
    if (stride < 1) throw DomainError("csv stride must be >= 1");
    os << "t,x,u\n";
    const double h = 2.0 * cfg.L / cfg.N;
    for (const auto& state : states)
        for (size_t j = 0; j < state.u.size(); j += stride)
            os << fmt_double(state.t) << ',' << fmt_double(-cfg.L + j * h) << ','
               << fmt_double(state.u[j]) << '\n';
}

}  // namespace solver
}  // namespace fkpp
