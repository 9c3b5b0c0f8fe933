#include "fkpp/specfun.hpp"

#include <cmath>

#include "fkpp/quadrature.hpp"

namespace fkpp {
namespace specfun {

namespace {

// Lanczos approximation, g = 7, 9 terms (Godfrey's coefficients).
const double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

const double kSqrt2Pi = 2.50662827463100050241576528481;

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("gamma_fn requires x > 0");
    if (x < 0.5) return gamma_fn(x + 1.0) / x;
    const double z = x - 1.0;
    double a = kLanczos[0];
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (z + i);
    const double t = z + 7.5;
    return kSqrt2Pi * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double bessel_j(double nu, double z, double abs_tol) {
    if (!(nu > -0.5)) throw DomainError("bessel_j requires nu > -1/2");
    if (!(z >= 0.0) || !std::isfinite(z)) throw DomainError("bessel_j requires z >= 0");
    if (z == 0.0) return nu == 0.0 ? 1.0 : 0.0;

    quad::QuadSpec spec;
    spec.abs_tol = abs_tol;
    spec.rel_tol = 1e-13;
    spec.max_subdivisions = 8000;

    auto core = [nu, z](double t) {
        return std::pow(1.0 - t * t, nu - 0.5) * std::cos(z * t);
    };
    quad::QuadResult lo = quad::integrate_adaptive(core, 0.0, 0.5, spec);

    quad::QuadResult hi;
    if (nu >= 0.5) {
        hi = quad::integrate_adaptive(core, 0.5, 1.0, spec);
    } else {
        // 1 - t = w^m with m = 1/(nu+1/2): the (1-t)^(nu-1/2) factor cancels
        // against the Jacobian and the integrand becomes bounded.
        const double m = 1.0 / (nu + 0.5);
        auto flat = [nu, z, m](double w) {
            const double t = 1.0 - std::pow(w, m);
            return m * std::pow(1.0 + t, nu - 0.5) * std::cos(z * t);
        };
        hi = quad::integrate_adaptive(flat, 0.0, std::pow(0.5, 1.0 / m), spec);
    }

    const double pref =
        2.0 * std::pow(0.5 * z, nu) / (gamma_fn(nu + 0.5) * std::sqrt(PI));
    return pref * (lo.value + hi.value);
}

double whittaker_w0(double nu, double z, double abs_tol) {
    if (!(nu > -0.5)) throw DomainError("whittaker_w0 requires nu > -1/2");
    if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("whittaker_w0 requires z > 0");

    quad::QuadSpec spec;
    spec.abs_tol = abs_tol;
    spec.rel_tol = 1e-13;
    spec.max_subdivisions = 4000;

    auto core = [nu, z](double t) {
        return std::pow(t * (1.0 + t / z), nu - 0.5) * std::exp(-t);
    };
    quad::QuadResult lo;
    if (nu >= 0.5) {
        lo = quad::integrate_adaptive(core, 0.0, 1.0, spec);
    } else {
        const double m = 1.0 / (nu + 0.5);
        auto flat = [nu, z, m](double s) {
            const double t = std::pow(s, m);
            return m * std::pow(1.0 + t / z, nu - 0.5) * std::exp(-t);
        };
        lo = quad::integrate_adaptive(flat, 0.0, 1.0, spec);
    }
    quad::QuadResult hi = quad::integrate_adaptive(core, 1.0, HUGE_VAL, spec);

    return std::exp(-0.5 * z) / gamma_fn(nu + 0.5) * (lo.value + hi.value);
}

double d_alpha(const FracParams& params) {
    check_alpha(params.alpha);
    if (params.d < 1) throw DomainError("d_alpha requires d >= 1");
    const double a = params.alpha;
    const double d = params.d;
    return std::pow(2.0, 2.0 * a + 0.5 * (d - 1.0)) * gamma_fn(a + 1.0) *
           gamma_fn(a + 0.5 * d) / std::sqrt(PI);
}

}  // namespace specfun
}  // namespace fkpp
