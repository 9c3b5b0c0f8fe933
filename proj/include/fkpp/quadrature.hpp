#pragma once
/// \file quadrature.hpp
/// Adaptive and oscillatory one-dimensional quadrature.

#include <functional>

#include "fkpp/common.hpp"

namespace fkpp {
namespace quad {

struct QuadSpec {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    int max_zeros = 400;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    long evaluations = 0;
};

using Fn = std::function<double(double)>;

/// Integrate f over [a,b] with a globally adaptive Gauss-Kronrod 7-15 scheme.
/// b may be +infinity; the tail is mapped through t = a + s/(1-s).
/// Converged when err <= max(abs_tol, rel_tol*|value|), else throws
/// QuadratureError carrying the best value and estimate.
QuadResult integrate_adaptive(const Fn& f, double a, double b, const QuadSpec& spec = {});

/// Integrate f over [0,inf) by summing panels between consecutive zeros of the
/// oscillatory factor. breakpoints(k), k = 1,2,..., is the k-th positive zero
/// (strictly increasing, unbounded). Panels up to direct_until are summed
/// plainly (covers a non-monotone envelope head); beyond it the panel series
/// is accelerated: Euler transformation first, Wynn epsilon fallback once the
/// Euler diagonal stalls for 5 consecutive terms.
QuadResult integrate_alternating(const Fn& f, const std::function<double(int)>& breakpoints,
                                 double direct_until, const QuadSpec& spec = {});

/// \int_0^inf g(r) cos(omega r) dr for g >= 0 smooth, eventually monotone
/// decaying. omega > 0. Panels split at the cosine zeros.
QuadResult integrate_oscillatory_cos(const Fn& g, double omega, const QuadSpec& spec = {});

}  // namespace quad
}  // namespace fkpp
