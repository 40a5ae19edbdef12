#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "fdss/types.hpp"
#include "fdss/waveform.hpp"

namespace fdss {

/// PAPR against the statistical mean power nsc/nfft, in dB.
double papr_statistical(const OfdmSymbol& sym, const WaveformConfig& cfg);
double papr_statistical(std::span<const cplx> samples, const WaveformConfig& cfg);

/// PAPR against the arithmetic mean power of the given samples, in dB.
double papr_instantaneous(std::span<const cplx> samples);

/// Raw cubic metric 20 log10(rms(|s/rms(s)|^3)) with rms(v) = sqrt(mean |v|^2).
double cubic_metric(std::span<const cplx> samples);

struct CcdfCurve {
    std::vector<double> thresholds_db;
    /// Fraction of trials strictly above each threshold.
    std::vector<double> ccdf;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

struct QuantileReadout {
    double level = 0.0;
    double value_db = 0.0;
};

struct CcdfResult {
    CcdfCurve curve;
    std::vector<QuantileReadout> quantiles;
    double max_db = 0.0;
    double mean_db = 0.0;
    /// Sorted per-trial values.
    std::vector<double> samples;

    double quantile(double level) const;
};

struct CcdfOptions {
    std::uint64_t seed = 0;  // recorded only; the generator owns its randomness
    unsigned threads = 0;
    double threshold_step_db = 0.05;
    bool keep_samples = false;
};

/// Per-trial value generator. Called concurrently with distinct trial indices.
using TrialGenerator = std::function<double(std::uint64_t trial)>;

/// Empirical CCDF over `trials` generator calls with per-level readouts.
/// Readouts interpolate linearly between order statistics.
CcdfResult ccdf(const TrialGenerator& generator, std::uint64_t trials, std::span<const double> levels,
                const CcdfOptions& options = {});

/// Level-p readout of an ascending sample vector.
double quantile_of_sorted(std::span<const double> sorted, double level);

/// Curve and readouts from precomputed values (sorted in place).
CcdfResult ccdf_from_values(std::vector<double> values, std::span<const double> levels,
                            const CcdfOptions& options = {});

}  // namespace fdss
