#include "fkpp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace fkpp {
namespace quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
const double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
const double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
const double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEst {
    double value;
    double err;
};

PanelEst gk15(const Fn& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resabs = std::fabs(resk);
    double fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const double fsum = fv1[j] + fv2[j];
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
        resk += kWgk[j] * fsum;
        resabs += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
    }
    evals += 15;
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
    resasc *= std::fabs(h);
    const double value = resk * h;
    double err = std::fabs((resk - resg) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round = 50.0 * 1.1e-16 * resabs * std::fabs(h);
    err = std::max(err, round);
    if (!std::isfinite(value)) throw DomainError("integrand produced a non-finite value");
    return {value, err};
}

struct Interval {
    double a, b, value, err;
    bool operator<(const Interval& o) const { return err < o.err; }
};

QuadResult adaptive_finite(const Fn& f, double a, double b, const QuadSpec& spec) {
    long evals = 0;
    std::priority_queue<Interval> heap;
    PanelEst first = gk15(f, a, b, evals);
    heap.push({a, b, first.value, first.err});
    double total = first.value, toterr = first.err;
    int used = 1;
    while (toterr > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)) &&
           used < spec.max_subdivisions) {
        Interval worst = heap.top();
        if (worst.err <= 1.1e-16 * std::fabs(total)) break;  // rounding floor
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {  // interval exhausted
            heap.push(worst);
            break;
        }
        PanelEst lo = gk15(f, worst.a, mid, evals);
        PanelEst hi = gk15(f, mid, worst.b, evals);
        total += lo.value + hi.value - worst.value;
        toterr += lo.err + hi.err - worst.err;
        heap.push({worst.a, mid, lo.value, lo.err});
        heap.push({mid, worst.b, hi.value, hi.err});
        ++used;
        if (used % 64 == 0) {  // resum against drift
            std::vector<Interval> all;
            total = toterr = 0.0;
            while (!heap.empty()) {
                all.push_back(heap.top());
                heap.pop();
                total += all.back().value;
                toterr += all.back().err;
            }
            for (const auto& iv : all) heap.push(iv);
        }
    }
    if (toterr > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total)) &&
        toterr > 100.0 * 1.1e-16 * std::fabs(total))
        throw QuadratureError("adaptive quadrature: tolerance not reached in " +
                                  std::to_string(used) + " subdivisions",
                              total, toterr);
    return {total, toterr, evals};
}

}  // namespace

QuadResult integrate_adaptive(const Fn& f, double a, double b, const QuadSpec& spec) {
    if (std::isnan(a) || std::isnan(b)) throw DomainError("quadrature endpoints must not be NaN");
    if (std::isinf(a)) throw DomainError("lower endpoint must be finite");
    if (!std::isinf(b)) {
        if (b < a) throw DomainError("quadrature endpoints out of order");
        if (a == b) return {0.0, 0.0, 0};
        return adaptive_finite(f, a, b, spec);
    }
    // t = a + s/(1-s) maps [0,1) onto [a,inf). Deep bisection near s = 1 can
    // round a node onto or past the endpoint; the transformed integrand must
    // vanish there for the improper integral to exist, so report that limit.
    auto g = [&f, a](double s) {
        const double om = 1.0 - s;
        if (!(om > 0.0)) return 0.0;
        const double t = a + s / om;
        if (!std::isfinite(t)) return 0.0;
        return f(t) / (om * om);
    };
    return adaptive_finite(g, 0.0, 1.0, spec);
}

namespace {

/// Iterated-mean Euler transformation of a partial-sum sequence.
/// Feed partial sums; estimate() is the deepest diagonal average.
class EulerTable {
public:
    void push(double s) {
        prev_ = row_;
        row_.assign(prev_.size() + 1, 0.0);
        row_[0] = s;
        for (size_t i = 1; i < row_.size(); ++i) row_[i] = 0.5 * (row_[i - 1] + prev_[i - 1]);
    }
    double estimate() const { return row_.back(); }
    size_t depth() const { return row_.size(); }

private:
    std::vector<double> row_, prev_;
};

/// Wynn epsilon algorithm over the full partial-sum history.
double wynn_epsilon(const std::vector<double>& s) {
    std::vector<double> cur(s), prev(s.size() + 1, 0.0);
    double best = s.back();
    for (size_t col = 1; col < s.size(); ++col) {
        std::vector<double> next(cur.size() - 1);
        for (size_t i = 0; i + 1 < cur.size(); ++i) {
            const double d = cur[i + 1] - cur[i];
            if (std::fabs(d) < 1e-305) return best;
            next[i] = prev[i + 1] + 1.0 / d;
        }
        if (col % 2 == 0 && !next.empty()) best = next.back();
        prev = cur;
        cur = next;
        if (cur.size() < 2) break;
    }
    return best;
}

}  // namespace

QuadResult integrate_alternating(const Fn& f, const std::function<double(int)>& breakpoints,
                                 double direct_until, const QuadSpec& spec) {
    long evals = 0;
    QuadSpec panel_spec;
    panel_spec.abs_tol = std::max(spec.abs_tol / 50.0, 1e-300);
    panel_spec.rel_tol = 1e-14;
    panel_spec.max_subdivisions = 200;

    double head = 0.0, panel_err = 0.0;
    double lo = 0.0;
    int k = 1;
    auto next_panel = [&](double hi) {
        QuadResult r = adaptive_finite(f, lo, hi, panel_spec);
        evals += r.evaluations;
        panel_err += r.err_est;
        lo = hi;
        return r.value;
    };

    // Head: plain summation through the non-alternating region.  Capped so a
    // slowly rising envelope at high frequency cannot eat the zero budget; the
    // averaging below handles a smooth hump in the term magnitudes anyway.
    const int head_cap = 32;
    while (true) {
        double z = breakpoints(k);
        if (z <= lo) throw DomainError("oscillatory breakpoints must be increasing");
        if (k > 1 && (z > direct_until || k > head_cap)) break;
        head += next_panel(z);
        ++k;
        if (z > direct_until) break;
    }

    std::vector<double> partial;
    EulerTable euler;
    double sum = head;
    double est = sum, prev_est = sum;
    double best_delta = HUGE_VAL;
    int stalls = 0, small_terms = 0, converged_count = 0;
    bool use_epsilon = false;

    for (; k <= spec.max_zeros; ++k) {
        const double term = next_panel(breakpoints(k));
        sum += term;
        partial.push_back(sum);
        euler.push(sum);
        prev_est = est;
        est = use_epsilon ? wynn_epsilon(partial) : euler.estimate();

        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::fabs(est));
        const double delta = std::fabs(est - prev_est);
        if (std::fabs(term) < 0.01 * tol) {
            if (++small_terms >= 3) return {sum, panel_err + std::fabs(term) * 3, evals};
        } else {
            small_terms = 0;
        }
        if (partial.size() >= 3 && delta <= tol) {
            if (++converged_count >= 2) return {est, delta + panel_err, evals};
        } else {
            converged_count = 0;
        }
        if (!use_epsilon) {
            if (delta < best_delta) {
                best_delta = delta;
                stalls = 0;
            } else if (++stalls >= 5) {
                use_epsilon = true;
            }
        }
    }
    throw QuadratureError("oscillatory quadrature: acceleration did not converge within " +
                              std::to_string(spec.max_zeros) + " zeros",
                          est, std::fabs(est - prev_est) + panel_err);
}

QuadResult integrate_oscillatory_cos(const Fn& g, double omega, const QuadSpec& spec) {
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw DomainError("oscillatory frequency must be positive");
    auto f = [&g, omega](double r) { return g(r) * std::cos(omega * r); };
    auto zeros = [omega](int k) { return (k - 0.5) * PI / omega; };
    return integrate_alternating(f, zeros, 0.0, spec);
}

}  // namespace quad
}  // namespace fkpp
