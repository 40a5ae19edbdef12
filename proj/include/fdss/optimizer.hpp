#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fdss/bounds.hpp"
#include "fdss/channel.hpp"
#include "fdss/constellation.hpp"
#include "fdss/window.hpp"

namespace fdss {

/// How the circular shift L is chosen for each SE size.
struct ShiftPolicy {
    enum class Kind { Fixed, Pi2Bpsk, Qam };
    Kind kind = Kind::Fixed;
    long value = 0;   // Fixed
    long lambda = 0;  // Pi2Bpsk / Qam

    static ShiftPolicy fixed(long l) { return {Kind::Fixed, l, 0}; }
    static ShiftPolicy symmetric() { return {Kind::Pi2Bpsk, 0, 2}; }
    static ShiftPolicy pi2bpsk(long lambda) { return {Kind::Pi2Bpsk, 0, lambda}; }
    static ShiftPolicy qam(long lambda = 0) { return {Kind::Qam, 0, lambda}; }

    long shift_for(int ndata, int ne) const;
    std::string describe() const;
};

enum class SearchMethod { BoundU, QamApprox, CorrectedBound, MonteCarloCcdf, Capacity };

std::string to_string(SearchMethod m);

/// Guard against the bound picking a spurious minimum when shaping is weak.
enum class LocalMinGuard { None, RestrictRange, CorrectedBound };

struct SeSearchResult {
    int ne_opt = 0;
    double objective_at_opt = 0.0;
    std::vector<std::pair<int, double>> curve;
    SearchMethod method = SearchMethod::BoundU;
    double level = 0.0;   // MonteCarloCcdf
    double snr_db = 0.0;  // Capacity
    double k_db = 0.0;    // CorrectedBound
};

struct PaprSearchOptions {
    SearchMethod method = SearchMethod::BoundU;
    /// Fixed IFFT size. Bound methods skip grid points whose ndata does not divide it
    /// unless bound_oversampling is set.
    int nfft = 2048;
    /// When set, bound methods use nfft = bound_oversampling * ndata per grid point.
    std::optional<int> bound_oversampling;
    double ccdf_level = 1e-2;
    std::uint64_t trials = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    /// Bound-gap K (dB); calibrated by simulation at ne = 0 when absent.
    std::optional<double> k_db;
    std::uint64_t calibration_trials = 100000;
    LocalMinGuard guard = LocalMinGuard::CorrectedBound;
    /// Ripple above which the guard engages.
    double guard_ripple_db = -4.0;
    /// Monte Carlo only: after the grid pass, evaluate every ne within this
    /// distance of the coarse minimizer.
    int refine_radius = 0;
};

/// Per-trial envelope measure; null means statistical PAPR.
using PaprMeasure = double (*)(std::span<const cplx> samples, const WaveformConfig& cfg);

/// One measure value per trial, in trial order.
std::vector<double> papr_samples(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                 std::uint64_t trials, std::uint64_t seed, unsigned threads = 0,
                                 PaprMeasure measure = nullptr);

/// Monte Carlo PAPR readout at one level for a fixed configuration. Trial t draws
/// its symbols from SeedStream(seed, "symbols").engine(t), which gives common
/// random numbers across configurations.
double monte_carlo_papr(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w, double level,
                        std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);

/// Several readouts from one Monte Carlo run.
std::vector<double> monte_carlo_papr_levels(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                            const std::vector<double>& levels, std::uint64_t trials,
                                            std::uint64_t seed, unsigned threads = 0);

/// Gap between the QPSK-style bound U and the simulated readout at ne = 0.
double calibrate_bound_gap(const Constellation& c, int nsc, const FdssWindow& w, const PaprSearchOptions& options,
                           const ShiftPolicy& shift);

/// SE size minimizing PAPR (bound-based or simulated) over ne_grid.
SeSearchResult search_ne_papr(const Constellation& c, int nsc, const FdssWindow& w, const PaprSearchOptions& options,
                              const ShiftPolicy& shift, const std::vector<int>& ne_grid);

struct CapacityOptions {
    int nfft = 2048;
    int ncp = 144;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

/// Channel responses Hbar[k], k < nsc, for `trials` realizations, shared across
/// every ne and SNR evaluated from them.
std::vector<CVec> draw_channel_responses(const ChannelProfile& profile, int nsc, const CapacityOptions& options);

/// Mean achievable rate (bpcu) for one SE size over the given responses.
double mean_rate(const std::vector<CVec>& responses, const FdssWindow& w, int ne, double snr_db,
                 unsigned threads = 0);

/// SE size maximizing the mean achievable rate.
SeSearchResult search_ne_capa(int nsc, const FdssWindow& w, const ChannelProfile& profile, double snr_db,
                              const CapacityOptions& options, const std::vector<int>& ne_grid);

/// Same search reusing precomputed responses.
SeSearchResult search_ne_capa(const std::vector<CVec>& responses, const FdssWindow& w, double snr_db,
                              const std::vector<int>& ne_grid, unsigned threads = 0);

struct TradeoffReport {
    int ne_papr = 0;
    int ne_capa = 0;
    double snr_db = 0.0;
    double rate_plain = 0.0;   // flat window, no SE
    double rate_no_se = 0.0;   // this window, ne = 0
    double rate_at_ne_capa = 0.0;
    double rate_at_ne_papr = 0.0;
    double bound_at_ne_papr_db = 0.0;
    double bound_at_ne_capa_db = 0.0;
    /// Simulated 1e-3 readouts; present when PAPR trials were requested.
    std::optional<double> papr_at_ne_papr_db;
    std::optional<double> papr_at_ne_capa_db;
    std::optional<double> papr_no_se_db;
    /// ne_capa <= ne_papr, reported only.
    bool capa_not_above_papr = true;

    double loss_no_se() const { return 1.0 - rate_no_se / rate_plain; }
    double loss_at_ne_capa() const { return 1.0 - rate_at_ne_capa / rate_plain; }
    double loss_at_ne_papr() const { return 1.0 - rate_at_ne_papr / rate_plain; }
};

struct TradeoffOptions {
    PaprSearchOptions papr;
    CapacityOptions capacity;
    ShiftPolicy shift = ShiftPolicy::fixed(0);
    std::vector<int> ne_grid;  // empty: 0 .. nsc/2
    std::uint64_t papr_trials = 0;  // 0 skips the simulated readouts
};

TradeoffReport tradeoff_report(const Constellation& c, int nsc, const FdssWindow& w, const ChannelProfile& profile,
                               double snr_db, const TradeoffOptions& options);

}  // namespace fdss
