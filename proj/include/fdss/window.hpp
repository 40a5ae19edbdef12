#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fdss {

enum class WindowFamily { Flat, DeformedHann, Kaiser };

std::string to_string(WindowFamily f);

/// Real symmetric FDSS window normalized to sum(W^2) = nsc.
struct FdssWindow {
    std::vector<double> coeffs;
    WindowFamily family = WindowFamily::Flat;
    /// beta for DeformedHann, kappa for Kaiser, unused for Flat.
    double parameter = 0.0;

    std::size_t nsc() const { return coeffs.size(); }
};

FdssWindow flat_window(std::size_t nsc);

/// Deformed Hann: (1 - a cos((2 pi k + pi)/nsc)) / omega with a = (1-beta)/(1+beta).
/// The half-index shift is folded in, so the window is symmetric by construction.
FdssWindow deformed_hann(std::size_t nsc, double beta);

/// Kaiser window centred at (nsc-1)/2; normalization computed from the sum of squares.
FdssWindow kaiser(std::size_t nsc, double kappa);

/// Window of the 3-tap filter [-b, 1, -b] after dropping its linear phase ramp.
/// Equals deformed_hann with beta = (1-2b)/(1+2b).
FdssWindow three_tap_equivalent(std::size_t nsc, double b);

double beta_from_three_tap(double b);
double three_tap_from_beta(double beta);

/// 20 log10(min W / max W), always <= 0.
double ripple_db(const FdssWindow& w);

/// beta = 10^(ripple/20); the deformed Hann ripple approaches this for large nsc.
double hann_beta_for_ripple(double ripple_db);

/// Kaiser kappa whose numerical ripple_db on nsc subcarriers equals the target.
double kaiser_kappa_for_ripple(std::size_t nsc, double ripple_db);

/// Zeroth-order modified Bessel function of the first kind (power series).
double bessel_i0(double x);

}  // namespace fdss
