#pragma once
/// \file common.hpp
/// Shared domain types, error taxonomy and numeric formatting helpers.

#include <stdexcept>
#include <string>

namespace fkpp {

inline constexpr double PI = 3.14159265358979323846264338327950288;

/// Fractional diffusion parameters: exponent alpha in (0,1] and space dimension.
/// alpha = 1 selects the classical Gaussian reference.
struct FracParams {
    double alpha = 0.75;
    int d = 1;
};

/// Invalid parameter or argument (alpha out of range, negative radius, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// Quadrature failed to reach the requested tolerance within budget.
/// Carries the best value obtained and its error estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& msg, double value, double err_est)
        : std::runtime_error(msg), value(value), err_est(err_est) {}
    double value;
    double err_est;
};

/// A validation step failed (spectral table resolution, fit preconditions, ...).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed invocation or config file (unknown key, missing value, syntax).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A run was cut short (edge-guard trip, field range violation).
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

void check_alpha(double alpha, bool allow_one = true);

/// Shortest decimal form that round-trips to the same double.
std::string fmt_double(double v);

/// FNV-1a 64-bit digest of a byte string, lowercase hex.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace fkpp
