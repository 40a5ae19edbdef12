#include "fdss/constellation.hpp"

#include <algorithm>
#include <cmath>

namespace fdss {

Modulation parse_modulation(std::string_view name) {
    if (name == "pi2bpsk") return Modulation::Pi2Bpsk;
    if (name == "qpsk") return Modulation::Qpsk;
    if (name == "16qam") return Modulation::Qam16;
    if (name == "64qam") return Modulation::Qam64;
    throw ConfigError("unknown constellation '" + std::string(name) + "' (expected pi2bpsk, qpsk, 16qam or 64qam)");
}

std::string to_string(Modulation m) {
    switch (m) {
        case Modulation::Pi2Bpsk: return "pi2bpsk";
        case Modulation::Qpsk: return "qpsk";
        case Modulation::Qam16: return "16qam";
        case Modulation::Qam64: return "64qam";
    }
    return "?";
}

int Constellation::bits_per_symbol() const {
    return static_cast<int>(std::lround(std::log2(static_cast<double>(points.size()))));
}

namespace {

unsigned gray_decode(unsigned g) {
    unsigned b = 0;
    for (; g != 0; g >>= 1) b ^= g;
    return b;
}

// Square QAM with per-axis reflected-binary Gray labels; label = (I bits, Q bits).
std::vector<cplx> square_qam(unsigned bits_per_axis) {
    const unsigned side = 1U << bits_per_axis;
    const double energy = 2.0 * (static_cast<double>(side) * side - 1.0) / 3.0;
    const double scale = 1.0 / std::sqrt(energy);
    std::vector<cplx> pts(static_cast<std::size_t>(side) * side);
    for (unsigned label = 0; label < pts.size(); ++label) {
        const unsigned i_pos = gray_decode(label >> bits_per_axis);
        const unsigned q_pos = gray_decode(label & (side - 1));
        const double re = 2.0 * i_pos - (side - 1.0);
        const double im = 2.0 * q_pos - (side - 1.0);
        pts[label] = cplx(re, im) * scale;
    }
    return pts;
}

}  // namespace

Constellation make_constellation(Modulation kind) {
    Constellation c;
    c.kind = kind;
    switch (kind) {
        case Modulation::Pi2Bpsk:
            c.points = {cplx(1.0, 0.0), cplx(-1.0, 0.0)};
            c.phi = kPi / 2.0;
            break;
        case Modulation::Qpsk: c.points = square_qam(1); break;
        case Modulation::Qam16: c.points = square_qam(2); break;
        case Modulation::Qam64: c.points = square_qam(3); break;
    }
    double peak = 0.0;
    for (const auto& p : c.points) peak = std::max(peak, std::norm(p));
    c.peak_amplitude_sq = peak;
    c.omega_set = omega_set_of(c.points);
    return c;
}

std::vector<std::uint32_t> draw_indices(const Constellation& c, std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(c.points.size() - 1));
    std::vector<std::uint32_t> out(n);
    for (auto& v : out) v = pick(rng);
    return out;
}

CVec map_indices(const Constellation& c, std::span<const std::uint32_t> indices) {
    CVec out(indices.size());
    for (std::size_t m = 0; m < indices.size(); ++m) {
        out[m] = c.points[indices[m]];
        if (c.phi != 0.0) out[m] *= std::polar(1.0, c.phi * static_cast<double>(m));
    }
    return out;
}

CVec draw_symbols(const Constellation& c, std::size_t n, std::mt19937_64& rng) {
    const auto idx = draw_indices(c, n, rng);
    return map_indices(c, idx);
}

std::uint32_t hard_decide(const Constellation& c, cplx observed, std::size_t m) {
    if (c.phi != 0.0) observed *= std::polar(1.0, -c.phi * static_cast<double>(m));
    std::uint32_t best = 0;
    double best_d = std::norm(observed - c.points[0]);
    for (std::uint32_t i = 1; i < c.points.size(); ++i) {
        const double d = std::norm(observed - c.points[i]);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

std::vector<double> omega_set_of(std::span<const cplx> points) {
    constexpr double tol = 1e-9;
    std::vector<double> diffs;
    diffs.reserve(points.size() * points.size());
    for (const auto& p : points) {
        for (const auto& q : points) {
            double d = std::fmod(std::arg(p) - std::arg(q), kPi);
            if (d < 0.0) d += kPi;
            if (d > kPi - tol) d = 0.0;
            diffs.push_back(d);
        }
    }
    std::sort(diffs.begin(), diffs.end());
    std::vector<double> out;
    for (double d : diffs) {
        if (out.empty() || d - out.back() > tol) out.push_back(d);
    }
    return out;
}

}  // namespace fdss
