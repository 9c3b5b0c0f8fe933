#pragma once
/// \file kernel.hpp
/// Fractional heat kernel profiles: oscillatory-quadrature and spectral paths.

#include <iosfwd>
#include <vector>

#include "fkpp/common.hpp"
#include "fkpp/quadrature.hpp"

namespace fkpp {
namespace kernel {

/// Self-similar profile in one dimension,
///   p_alpha(x) = (1/pi) Int_0^inf e^(-r^(2 alpha)) cos(r|x|) dr,
/// evaluated by oscillatory quadrature. alpha = 1 short-circuits to the
/// Gaussian e^(-x^2/4)/(2 sqrt(pi)). Absolute error <= 1e-9 (defaults reach
/// well below that).
double kernel_profile_1d(const FracParams& params, double x, const quad::QuadSpec& spec = {1e-13, 1e-13, 2000, 400});

/// Radial profile in d >= 2 dimensions,
///   p_alpha(r) = (2 pi)^(-d/2) r^(1-d/2) Int_0^inf e^(-rho^(2 alpha)) J_{d/2-1}(r rho) rho^(d/2) drho,
/// with panels split at Bessel zeros and the panel series accelerated.
/// Absolute error <= 1e-8.
double kernel_profile_dd(const FracParams& params, double r, const quad::QuadSpec& spec = {5e-11, 1e-12, 2000, 400});

/// Independent Fourier-side evaluation for d >= 2. The symbol is first
/// marginalized over d-1 frequency axes,
///   g(k) = (2 pi)^(1-d) s_{d-2} Int_0^inf e^(-(k^2+s^2)^alpha) s^(d-2) ds
/// with s_{d-2} the unit-sphere surface in d-1 dimensions, then
///   p_alpha(r) = (1/pi) Int_0^inf g(k) cos(k r) dk.
/// No Bessel functions enter, so this cross-checks kernel_profile_dd through
/// entirely different machinery. Absolute error <= 1e-8.
double kernel_profile_slice(const FracParams& params, double r, const quad::QuadSpec& spec = {1e-10, 1e-10, 2000, 400});

/// Exact value at the origin: Gamma(1/(2 alpha)+1)/pi in one dimension,
/// (2 pi)^-d S_{d-1} Gamma(d/(2 alpha))/(2 alpha) for d >= 2.
double kernel_at_zero(const FracParams& params);

/// Space-time kernel p(x,t) = t^(-d/(2 alpha)) p_alpha(|x| t^(-1/(2 alpha))).
double kernel_spacetime(const FracParams& params, double radius, double t);

/// Total mass of the d-dimensional density, S_{d-1} Int_0^inf p_alpha(r) r^(d-1) dr
/// (equals 2 Int_0^inf in one dimension). Equals 1 exactly; computed
/// numerically as a validation quantity.
double kernel_mass(const FracParams& params, const quad::QuadSpec& spec = {1e-10, 5e-10, 4000, 400});

/// k-th positive zero of J_nu, k >= 1: McMahon expansion, bisection-refined at
/// small k where the expansion is weakest. Used to split radial panels.
double bessel_zero(double nu, int k);

struct KernelTable {
    FracParams params;
    double t = 1.0;
    double L = 0.0;
    std::vector<double> xs;      ///< radii, strictly increasing, 0 .. L
    std::vector<double> values;  ///< p(x,t) on xs, nonnegative, nonincreasing
    double trapezoid_mass = 0.0; ///< trapezoid mass of the full density
    long clamped = 0;            ///< negatives in [-1e-12, 0) clamped to 0
};

/// Tabulate the one-dimensional kernel on [0, L] with N modes (N a power of
/// two) by sampling the Fourier symbol e^(-|k|^(2 alpha) t) and inverting with
/// a cosine transform. Requires the symbol at the Nyquist frequency to be
/// below 1e-14, else throws ValidationError.
KernelTable tabulate_kernel_spectral(const FracParams& params, double t, double L, int N);

/// Count of quadrature results in [-1e-12, 0) clamped to zero so far.
long clamp_count();
void reset_clamp_count();

struct KernelCsvRow {
    double x;
    double p;
    const char* method;  ///< "quadrature" or "spectral"
    FracParams params;
    double t;
};

/// Header "x,p,method,alpha,d,t"; doubles in shortest round-trip form.
void write_kernel_csv(std::ostream& os, const std::vector<KernelCsvRow>& rows);

}  // namespace kernel
}  // namespace fkpp
