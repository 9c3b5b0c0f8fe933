#pragma once
/// \file specfun.hpp
/// Special functions needed by the kernel decomposition machinery.

#include "fkpp/common.hpp"

namespace fkpp {
namespace specfun {

/// Gamma function for x > 0. Relative error below 1e-12 on [0.1, 30].
double gamma_fn(double x);

/// Bessel function of the first kind, nu > -1/2, z >= 0, evaluated through the
/// Poisson integral representation
///   J_nu(z) = (z/2)^nu / (Gamma(nu+1/2) sqrt(pi)) * Int_{-1}^{1} (1-t^2)^(nu-1/2) cos(zt) dt.
/// The endpoint singularity for nu < 1/2 is removed by the graded substitution
/// 1 - t = w^(1/(nu+1/2)). Absolute error <= 1e-10 for z <= 1e3.
double bessel_j(double nu, double z, double abs_tol = 1e-12);

/// Whittaker function W_{0,nu}(z), nu > -1/2, z > 0, via
///   W_{0,nu}(z) = e^(-z/2)/Gamma(nu+1/2) * Int_0^inf [t(1+t/z)]^(nu-1/2) e^(-t) dt.
/// Absolute error <= 1e-10.
double whittaker_w0(double nu, double z, double abs_tol = 5e-12);

/// Tail constant of the 2alpha-stable profile,
///   p_alpha(x) ~ 2 (2 pi)^(-(d+1)/2) sin(alpha pi) D_alpha |x|^(-d-2alpha),
/// in closed form
///   D_alpha = 2^(2 alpha + (d-1)/2) Gamma(alpha+1) Gamma(alpha+d/2) / sqrt(pi).
/// Equals half the Whittaker moment
///   Int_0^inf u^q 2^-q W_{0,d/2-1}(u) du, q = 2 alpha + (d-1)/2
/// (Mellin transform of W_{0,mu} via the Bessel-K representation), reduces to
/// Gamma(2 alpha + 1) at d = 1, and at d = 2, alpha = 1/2 reproduces the exact
/// Cauchy tail |x|^-3 / (2 pi).
double d_alpha(const FracParams& params);

}  // namespace specfun
}  // namespace fkpp
