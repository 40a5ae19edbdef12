#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdss {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double kPi = 3.14159265358979323846;

// Invalid configuration or violated precondition. The CLI maps it to exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure during a run (exit code 3).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double db10(double linear) { return 10.0 * std::log10(linear); }
inline double from_db10(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace fdss
