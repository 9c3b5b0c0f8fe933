#include "fkpp/asymptotics.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "fkpp/kernel.hpp"
#include "fkpp/specfun.hpp"

namespace fkpp {
namespace asym {

namespace {

void check_x(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("decomposition requires x > 0");
}

double bound_at(const FracParams& p, double x) {
    return kCalibratedC * (1.0 - p.alpha) / (PI * std::pow(x, p.d + 4.0 * p.alpha));
}

/// Closed-form tail and Gaussian-like terms, no kernel evaluation.
void closed_terms(const FracParams& p, double x, double& tail, double& gauss) {
    const double a = p.alpha;
    if (p.d == 1) {
        tail = specfun::gamma_fn(2.0 * a + 1.0) * std::sin(a * PI) / (PI * std::pow(x, 1.0 + 2.0 * a));
        gauss = std::exp(-std::pow(x, 2.0 * a) / 4.0) / (2.0 * std::sqrt(PI) * std::pow(x, 1.0 - a));
    } else {
        const double d = p.d;
        tail = 2.0 * std::pow(2.0 * PI, -0.5 * (d + 1.0)) * std::sin(a * PI) * specfun::d_alpha(p) *
               std::pow(x, -(d + 2.0 * a));
        gauss = std::pow(4.0 * PI, -0.5 * d) * std::pow(x, -(1.0 - a) * d) / a *
                std::exp(-std::pow(x, 2.0 * a) / 4.0);
    }
}

}  // namespace

KernelDecomposition decompose_1d(const FracParams& params, double x) {
    check_alpha(params.alpha, false);
    if (params.d != 1) throw DomainError("decompose_1d requires d == 1");
    check_x(x);
    KernelDecomposition dec;
    dec.x = x;
    closed_terms(params, x, dec.tail_term, dec.gauss_term);
    dec.kernel_value = kernel::kernel_profile_1d(params, x);
    dec.residual = dec.kernel_value - dec.tail_term - dec.gauss_term;
    dec.bound = bound_at(params, x);
    return dec;
}

KernelDecomposition decompose_dd(const FracParams& params, double x) {
    check_alpha(params.alpha, false);
    if (params.d < 2) throw DomainError("decompose_dd requires d >= 2");
    check_x(x);
    KernelDecomposition dec;
    dec.x = x;
    closed_terms(params, x, dec.tail_term, dec.gauss_term);
    dec.kernel_value = kernel::kernel_profile_dd(params, x);
    dec.residual = dec.kernel_value - dec.tail_term - dec.gauss_term;
    dec.bound = bound_at(params, x);
    return dec;
}

double normalized_residual(const FracParams& params, const KernelDecomposition& dec) {
    return std::fabs(dec.residual) * PI * std::pow(dec.x, params.d + 4.0 * params.alpha) /
           (1.0 - params.alpha);
}

ResidualReport residual_scaling_report(const FracParams& base, const std::vector<double>& alphas,
                                       double x_lo, double x_hi, int n_samples) {
    if (alphas.empty()) throw DomainError("residual sweep needs at least one alpha");
    if (!(x_lo >= 1.0) || !(x_hi > x_lo)) throw DomainError("residual sweep needs 1 <= x_lo < x_hi");
    if (n_samples < 2) throw DomainError("residual sweep needs n_samples >= 2");
    for (double a : alphas) check_alpha(a, false);

    ResidualReport report;
    report.d = base.d;
    const double lratio = std::log(x_hi / x_lo);
    for (double a : alphas) {
        ResidualSweepEntry entry;
        entry.alpha = a;
        FracParams p = base;
        p.alpha = a;
        try {
            for (int i = 0; i < n_samples; ++i) {
                // Pin the endpoint so x_hi is sampled exactly, not x_hi*(1+eps).
                const double x =
                    i + 1 == n_samples ? x_hi : x_lo * std::exp(lratio * i / (n_samples - 1.0));
                KernelDecomposition dec = p.d == 1 ? decompose_1d(p, x) : decompose_dd(p, x);
                const double nr = normalized_residual(p, dec);
                if (nr > entry.sup_normalized) {
                    entry.sup_normalized = nr;
                    entry.sup_x = x;
                }
                entry.rows.push_back(dec);
            }
            entry.ok = true;
        } catch (const std::exception& e) {
            entry.ok = false;
            entry.error = e.what();
        }
        report.entries.push_back(std::move(entry));
    }
    double lo = HUGE_VAL, hi = 0.0;
    for (const auto& e : report.entries)
        if (e.ok) {
            lo = std::min(lo, e.sup_normalized);
            hi = std::max(hi, e.sup_normalized);
        }
    report.max_over_min = (lo > 0.0 && lo < HUGE_VAL) ? hi / lo : 0.0;
    return report;
}

TransitionScales critical_radius(const FracParams& params) {
    check_alpha(params.alpha, false);
    if (params.d < 1) throw DomainError("dimension must be >= 1");
    const double a = params.alpha;
    const double d = params.d;

    TransitionScales ts;
    ts.params = params;
    ts.C_alpha = params.d == 1
                     ? 2.0 / std::sqrt(PI)
                     : std::pow(2.0, 0.5 * (d + 1.0)) * specfun::d_alpha(params) * a / std::sqrt(PI);
    ts.tau_log = -std::log1p(-a);

    const double ln_rhs = std::log(ts.C_alpha * std::sin(a * PI));
    auto f = [&](double y) { return (d + 2.0) * a * std::log(y) - std::pow(y, 2.0 * a) / 4.0 - ln_rhs; };
    const double ypeak = std::pow(2.0 * (d + 2.0), 1.0 / (2.0 * a));
    if (f(ypeak) < 0.0)
        throw DomainError("transition equation has no root: threshold exceeds the branch maximum");

    double lo = ypeak, hi = 2.0 * ypeak;
    int guard = 0;
    while (f(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 200) throw DomainError("transition equation root bracket not found");
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    ts.xi_alpha = 0.5 * (lo + hi);
    ts.tau_alpha = std::pow(ts.xi_alpha, 2.0 * a) / 4.0;
    return ts;
}

Regime dominant_regime(const FracParams& params, double x, double t) {
    check_alpha(params.alpha, false);
    if (!(x > 0.0)) throw DomainError("dominant_regime requires x > 0");
    if (!(t > 0.0)) throw DomainError("dominant_regime requires t > 0");
    const double xi = x * std::pow(t, -1.0 / (2.0 * params.alpha));
    const double ypeak = std::pow(2.0 * (params.d + 2.0), 1.0 / (2.0 * params.alpha));
    if (xi <= ypeak) return Regime::gaussian_dominant;
    double tail, gauss;
    closed_terms(params, xi, tail, gauss);
    return gauss >= tail ? Regime::gaussian_dominant : Regime::tail_dominant;
}

void write_decomposition_csv(std::ostream& os, const ResidualReport& report) {
    os << "alpha,d,x,kernel,tail,gauss,residual,normalized_residual\n";
    for (const auto& entry : report.entries) {
        FracParams p;
        p.alpha = entry.alpha;
        p.d = report.d;
        for (const auto& row : entry.rows)
            os << fmt_double(entry.alpha) << ',' << report.d << ',' << fmt_double(row.x) << ','
               << fmt_double(row.kernel_value) << ',' << fmt_double(row.tail_term) << ','
               << fmt_double(row.gauss_term) << ',' << fmt_double(row.residual) << ','
               << fmt_double(normalized_residual(p, row)) << '\n';
    }
}

std::string transition_json(const TransitionScales& ts) {
    std::ostringstream os;
    os << "{\"alpha\":" << fmt_double(ts.params.alpha) << ",\"d\":" << ts.params.d
       << ",\"C_alpha\":" << fmt_double(ts.C_alpha) << ",\"xi_alpha\":" << fmt_double(ts.xi_alpha)
       << ",\"tau_alpha\":" << fmt_double(ts.tau_alpha) << ",\"tau_log\":" << fmt_double(ts.tau_log)
       << ",\"ratio\":" << fmt_double(ts.tau_alpha / ts.tau_log) << "}";
    return os.str();
}

}  // namespace asym
}  // namespace fkpp
