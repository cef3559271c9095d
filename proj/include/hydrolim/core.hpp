#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hydrolim {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using RVector = std::vector<double>;

constexpr double PI = 3.141592653589793238462643383279502884;
constexpr double TWO_PI = 2.0 * PI;

/// Thrown when array shapes or grids do not line up.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown on invalid parameter values (out-of-range eps, bad bounds, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when e^{Phi} would leave double range; never clamped silently.
struct OverflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown by time steppers on CFL violation or singular closures.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sq(double x) { return x * x; }

inline double bracket_k(double k) { return std::sqrt(1.0 + k * k); }  // <k>

}  // namespace hydrolim
