#include "fdss/window.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fdss/types.hpp"

namespace fdss {

std::string to_string(WindowFamily f) {
    switch (f) {
        case WindowFamily::Flat: return "flat";
        case WindowFamily::DeformedHann: return "hann";
        case WindowFamily::Kaiser: return "kaiser";
    }
    return "?";
}

namespace {

void require_nsc(std::size_t nsc) {
    if (nsc < 2) throw ConfigError("window: nsc must be >= 2, got " + std::to_string(nsc));
}

void normalize_power(std::vector<double>& w) {
    const double energy = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    const double scale = std::sqrt(static_cast<double>(w.size()) / energy);
    for (auto& v : w) v *= scale;
}

}  // namespace

double bessel_i0(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

FdssWindow flat_window(std::size_t nsc) {
    if (nsc < 1) throw ConfigError("window: nsc must be >= 1");
    return FdssWindow{std::vector<double>(nsc, 1.0), WindowFamily::Flat, 0.0};
}

FdssWindow deformed_hann(std::size_t nsc, double beta) {
    require_nsc(nsc);
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw ConfigError("deformed_hann: beta must lie in (0, 1], got " + std::to_string(beta));
    }
    const double a = (1.0 - beta) / (1.0 + beta);
    const double omega = std::sqrt(1.0 + a * a / 2.0);
    const double n = static_cast<double>(nsc);
    std::vector<double> w(nsc);
    for (std::size_t k = 0; k < nsc; ++k) {
        w[k] = (1.0 - a * std::cos((2.0 * kPi * static_cast<double>(k) + kPi) / n)) / omega;
    }
    // Closed-form omega is exact up to rounding; renormalize so the sum holds to 1e-12.
    normalize_power(w);
    return FdssWindow{std::move(w), WindowFamily::DeformedHann, beta};
}

FdssWindow kaiser(std::size_t nsc, double kappa) {
    require_nsc(nsc);
    if (!(kappa >= 0.0)) throw ConfigError("kaiser: kappa must be >= 0, got " + std::to_string(kappa));
    const double gamma = (static_cast<double>(nsc) - 1.0) / 2.0;
    const double i0k = bessel_i0(kappa);
    std::vector<double> w(nsc);
    for (std::size_t k = 0; k < nsc; ++k) {
        const double r = (static_cast<double>(k) - gamma) / gamma;
        w[k] = bessel_i0(kappa * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0k;
    }
    normalize_power(w);
    return FdssWindow{std::move(w), WindowFamily::Kaiser, kappa};
}

double beta_from_three_tap(double b) { return (1.0 - 2.0 * b) / (1.0 + 2.0 * b); }
double three_tap_from_beta(double beta) { return (1.0 - beta) / (2.0 * (1.0 + beta)); }

FdssWindow three_tap_equivalent(std::size_t nsc, double b) {
    if (!(b >= 0.0 && b < 0.5)) throw ConfigError("three_tap_equivalent: b must lie in [0, 1/2)");
    // The 3-tap response carries a linear phase ramp, i.e. a circular time shift;
    // it leaves the envelope unchanged and is dropped.
    return deformed_hann(nsc, beta_from_three_tap(b));
}

double ripple_db(const FdssWindow& w) {
    if (w.coeffs.empty()) throw ConfigError("ripple_db: empty window");
    const auto [lo, hi] = std::minmax_element(w.coeffs.begin(), w.coeffs.end());
    if (!(*lo > 0.0)) throw ConfigError("ripple_db: window coefficients must be positive");
    return 20.0 * std::log10(*lo / *hi);
}

double hann_beta_for_ripple(double ripple) {
    if (ripple > 0.0) throw ConfigError("hann ripple_db must be <= 0");
    return std::pow(10.0, ripple / 20.0);
}

double kaiser_kappa_for_ripple(std::size_t nsc, double ripple) {
    if (ripple > 0.0) throw ConfigError("kaiser ripple_db must be <= 0");
    if (ripple == 0.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (ripple_db(kaiser(nsc, hi)) > ripple) {
        hi *= 2.0;
        if (hi > 64.0) throw ConfigError("kaiser ripple_db out of reach");
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ripple_db(kaiser(nsc, mid)) > ripple) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace fdss
