#include "fkpp/front.hpp"

#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <thread>

#include "fkpp/asymptotics.hpp"

namespace fkpp {
namespace front {

Side parse_side(const std::string& name) {
    if (name == "right") return Side::right;
    if (name == "left") return Side::left;
    throw DomainError("side must be 'right' or 'left', got " + name);
}

const char* side_name(Side side) { return side == Side::right ? "right" : "left"; }

std::optional<double> extract_front(const solver::SolverConfig& cfg,
                                    const solver::FieldState& state, double level, Side side) {
    if (!(level > 0.0 && level < 1.0)) throw DomainError("level must lie in (0,1)");
    const auto& u = state.u;
    const int n = static_cast<int>(u.size());
    const double h = 2.0 * cfg.L / cfg.N;
    auto cross_at = [&](int j) -> std::optional<double> {
        const double a = u[j], b = u[j + 1];
        if ((a - level) * (b - level) > 0.0) return std::nullopt;
        if (a == b) return std::nullopt;  // flat segment, no transversal crossing
        const double x0 = -cfg.L + j * h;
        return x0 + h * (level - a) / (b - a);
    };
    if (side == Side::right) {
        for (int j = n - 2; j >= 0; --j)
            if (auto x = cross_at(j)) return x;
    } else {
        for (int j = 0; j + 1 < n; ++j)
            if (auto x = cross_at(j)) return x;
    }
    return std::nullopt;
}

FrontTrace trace_from_states(const solver::SolverConfig& cfg,
                             const std::vector<solver::FieldState>& states, double level,
                             Side side) {
    FrontTrace trace;
    trace.level = level;
    trace.side = side;
    for (const auto& state : states) {
        auto x = extract_front(cfg, state, level, side);
        if (x) {
            trace.t.push_back(state.t);
            trace.x.push_back(*x);
        } else {
            trace.complete = false;
        }
    }
    return trace;
}

namespace {

struct Ols {
    double intercept = 0.0;
    double slope = 0.0;
    double rms = 0.0;
};

Ols ols_fit(const std::vector<double>& t, const std::vector<double>& y, const char* what) {
    const size_t n = t.size();
    if (n < 5)
        throw ValidationError(std::string("insufficient samples for the ") + what + " fit: " +
                              std::to_string(n) + " < 5");
    double tm = 0.0, ym = 0.0;
    for (size_t i = 0; i < n; ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= n;
    ym /= n;
    double stt = 0.0, sty = 0.0;
    for (size_t i = 0; i < n; ++i) {
        stt += (t[i] - tm) * (t[i] - tm);
        sty += (t[i] - tm) * (y[i] - ym);
    }
    if (stt == 0.0)
        throw ValidationError(std::string("degenerate ") + what + " fit: zero time variance");
    Ols fit;
    fit.slope = sty / stt;
    fit.intercept = ym - fit.slope * tm;
    double ss = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double r = y[i] - fit.intercept - fit.slope * t[i];
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

bool in_window(double t, const Window& w) { return t >= w.lo - 1e-9 && t <= w.hi + 1e-9; }

}  // namespace

RegimeFit fit_regimes(const FrontTrace& trace, Window linear_window, Window exp_window) {
    if (!(linear_window.hi > linear_window.lo) || !(exp_window.hi > exp_window.lo))
        throw DomainError("fit windows must have positive width");
    RegimeFit fit;
    fit.linear_window = linear_window;
    fit.exp_window = exp_window;

    std::vector<double> tl, xl, te, le;
    for (size_t i = 0; i < trace.t.size(); ++i) {
        const double t = trace.t[i];
        const double ax = std::fabs(trace.x[i]);
        if (in_window(t, linear_window)) {
            tl.push_back(t);
            xl.push_back(ax);
        }
        if (in_window(t, exp_window)) {
            if (!(ax > 0.0))
                throw ValidationError("exponential fit window contains a nonpositive |x|");
            te.push_back(t);
            le.push_back(std::log(ax));
        }
    }
    Ols lin = ols_fit(tl, xl, "linear");
    fit.linear_intercept = lin.intercept;
    fit.sigma_linear = lin.slope;
    fit.linear_rms = lin.rms;
    Ols exp_ = ols_fit(te, le, "exponential");
    fit.exp_intercept = exp_.intercept;
    fit.sigma_exp = exp_.slope;
    fit.exp_rms = exp_.rms;

    // Departure is judged against the extrapolated linear law, which only
    // means anything past the window it was fitted on.
    for (size_t i = 0; i < trace.t.size(); ++i) {
        if (trace.t[i] <= linear_window.hi + 1e-9) continue;
        const double pred = fit.linear_intercept + fit.sigma_linear * trace.t[i];
        if (pred > 0.0 && std::fabs(trace.x[i]) >= 2.0 * pred) {
            fit.crossover_time = trace.t[i];
            break;
        }
    }
    return fit;
}

std::vector<SweepEntry> transition_sweep(const std::vector<double>& alphas,
                                         const SweepScenario& scenario, int max_threads) {
    if (alphas.empty()) throw DomainError("transition sweep needs at least one alpha");
    for (double a : alphas)
        if (!(a > 0.5 && a < 1.0))
            throw DomainError("sweep alphas must lie in (0.5, 1), got " + std::to_string(a));
    if (max_threads < 1) max_threads = 1;

    std::vector<SweepEntry> entries(alphas.size());
    std::atomic<size_t> cursor{0};
    auto worker = [&]() {
        for (size_t i = cursor.fetch_add(1); i < alphas.size(); i = cursor.fetch_add(1)) {
            SweepEntry& entry = entries[i];
            entry.alpha = alphas[i];
            try {
                FracParams p{alphas[i], 1};
                asym::TransitionScales scales = asym::critical_radius(p);
                entry.tau_alpha = scales.tau_alpha;
                entry.tau_log = scales.tau_log;

                solver::SolverConfig cfg = scenario.config;
                cfg.params.alpha = alphas[i];
                solver::CollectedRun collected = solver::run_collect(cfg, scenario.datum);
                entry.trace = trace_from_states(cfg, collected.states, scenario.level,
                                                scenario.side);
                entry.fit = fit_regimes(entry.trace, scenario.linear_window, scenario.exp_window);
                entry.crossover_time = entry.fit.crossover_time;
                entry.ok = true;
            } catch (const std::exception& e) {
                entry.ok = false;
                entry.error = e.what();
            }
        }
    };

    const int nthreads = std::min<size_t>(max_threads, alphas.size());
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return entries;
}

void write_trace_csv(std::ostream& os, double alpha, const FrontTrace& trace) {
    os << "alpha,level,side,t,x\n";
    for (size_t i = 0; i < trace.t.size(); ++i)
        os << fmt_double(alpha) << ',' << fmt_double(trace.level) << ',' << side_name(trace.side)
           << ',' << fmt_double(trace.t[i]) << ',' << fmt_double(trace.x[i]) << '\n';
}

void write_transition_csv(std::ostream& os, const std::vector<SweepEntry>& entries) {
    os << "alpha,crossover_time,tau_alpha,tau_log\n";
    for (const auto& entry : entries) {
        os << fmt_double(entry.alpha) << ',';
        if (entry.ok && entry.crossover_time) os << fmt_double(*entry.crossover_time);
        os << ',' << fmt_double(entry.tau_alpha) << ',' << fmt_double(entry.tau_log) << '\n';
    }
}

std::string fit_json(double alpha, double level, const RegimeFit& fit,
                     std::optional<double> tau_alpha, std::optional<double> tau_log) {
    auto opt = [](const std::optional<double>& v) {
        return v ? fmt_double(*v) : std::string("null");
    };
    std::ostringstream os;
    os << "{\"alpha\":" << fmt_double(alpha) << ",\"level\":" << fmt_double(level)
       << ",\"sigma_linear\":" << fmt_double(fit.sigma_linear)
       << ",\"sigma_exp\":" << fmt_double(fit.sigma_exp)
       << ",\"crossover_time\":" << opt(fit.crossover_time)
       << ",\"tau_alpha\":" << opt(tau_alpha) << ",\"tau_log\":" << opt(tau_log)
       << ",\"linear_window\":[" << fmt_double(fit.linear_window.lo) << ','
       << fmt_double(fit.linear_window.hi) << "],\"exp_window\":["
       << fmt_double(fit.exp_window.lo) << ',' << fmt_double(fit.exp_window.hi)
       << "],\"residuals\":{\"linear_rms\":" << fmt_double(fit.linear_rms)
       << ",\"exp_rms\":" << fmt_double(fit.exp_rms) << "}}";
    return os.str();
}

}  // namespace front
}  // namespace fkpp
