#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fdss/types.hpp"

namespace fdss {

enum class Modulation { Pi2Bpsk, Qpsk, Qam16, Qam64 };

Modulation parse_modulation(std::string_view name);
std::string to_string(Modulation m);

/// Modulation alphabet with unit average energy.
///
/// `points[i]` carries the bit label `i` (MSB first). QAM labels split into an
/// in-phase half and a quadrature half, each reflected-binary Gray coded along
/// its axis, so nearest neighbours differ in exactly one bit.
struct Constellation {
    Modulation kind{};
    std::vector<cplx> points;
    /// Incremental rotation applied to symbol index m as exp(j*phi*m).
    double phi = 0.0;
    double peak_amplitude_sq = 0.0;
    /// Phase differences among the points modulo pi, ascending, deduplicated.
    std::vector<double> omega_set;

    int bits_per_symbol() const;
    bool is_qam() const { return kind != Modulation::Pi2Bpsk; }
};

Constellation make_constellation(Modulation kind);

/// Uniform i.i.d. point indices.
std::vector<std::uint32_t> draw_indices(const Constellation& c, std::size_t n, std::mt19937_64& rng);

/// Maps labels to symbols, rotating element m by exp(j*phi*m).
CVec map_indices(const Constellation& c, std::span<const std::uint32_t> indices);

CVec draw_symbols(const Constellation& c, std::size_t n, std::mt19937_64& rng);

/// Nearest-point hard decision for a symbol observed at position m.
std::uint32_t hard_decide(const Constellation& c, cplx observed, std::size_t m);

std::vector<double> omega_set_of(std::span<const cplx> points);

}  // namespace fdss
