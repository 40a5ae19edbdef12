#include "fdss/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "fdss/parallel.hpp"

namespace fdss {

namespace {

double peak_power(std::span<const cplx> s) {
    double peak = 0.0;
    for (const auto& v : s) peak = std::max(peak, std::norm(v));
    return peak;
}

double mean_power(std::span<const cplx> s) {
    double acc = 0.0;
    for (const auto& v : s) acc += std::norm(v);
    return acc / static_cast<double>(s.size());
}

}  // namespace

double papr_statistical(std::span<const cplx> samples, const WaveformConfig& cfg) {
    return db10(static_cast<double>(cfg.nfft) / cfg.nsc * peak_power(samples));
}

double papr_statistical(const OfdmSymbol& sym, const WaveformConfig& cfg) { return papr_statistical(sym.samples, cfg); }

double papr_instantaneous(std::span<const cplx> samples) {
    if (samples.empty()) throw ConfigError("papr_instantaneous: empty signal");
    const double p = mean_power(samples);
    if (!(p > 0.0)) throw NumericError("papr_instantaneous: zero-power signal");
    return db10(peak_power(samples) / p);
}

double cubic_metric(std::span<const cplx> samples) {
    if (samples.empty()) throw ConfigError("cubic_metric: empty signal");
    const double p = mean_power(samples);
    if (!(p > 0.0)) throw NumericError("cubic_metric: zero-power signal");
    // rms(|s/rms|^3) = sqrt(mean(|s|^6)) / p^(3/2)
    double acc = 0.0;
    for (const auto& v : samples) {
        const double e = std::norm(v) / p;
        acc += e * e * e;
    }
    return 20.0 * std::log10(std::sqrt(acc / static_cast<double>(samples.size())));
}

double quantile_of_sorted(std::span<const double> sorted, double level) {
    if (sorted.empty()) throw ConfigError("quantile: no samples");
    const double n = static_cast<double>(sorted.size());
    // Order statistic i has an empirical exceedance of (n - 1 - i) / n.
    const double pos = std::clamp(n * (1.0 - level) - 1.0, 0.0, n - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double CcdfResult::quantile(double level) const {
    for (const auto& q : quantiles) {
        if (q.level == level) return q.value_db;
    }
    if (!samples.empty()) return quantile_of_sorted(samples, level);
    throw ConfigError("ccdf: level not evaluated");
}

CcdfResult ccdf_from_values(std::vector<double> values, std::span<const double> levels, const CcdfOptions& options) {
    if (values.empty()) throw ConfigError("ccdf: trials must be >= 1");
    std::sort(values.begin(), values.end());
    CcdfResult out;
    out.curve.trials = values.size();
    out.curve.seed = options.seed;
    out.max_db = values.back();
    out.mean_db = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    for (double level : levels) out.quantiles.push_back({level, quantile_of_sorted(values, level)});

    const double step = options.threshold_step_db;
    const double first = std::floor(values.front() / step) * step;
    const auto count = static_cast<std::size_t>(std::ceil((values.back() - first) / step)) + 1;
    const double n = static_cast<double>(values.size());
    out.curve.thresholds_db.reserve(count);
    out.curve.ccdf.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = first + static_cast<double>(i) * step;
        const auto above = values.end() - std::upper_bound(values.begin(), values.end(), t);
        out.curve.thresholds_db.push_back(t);
        out.curve.ccdf.push_back(static_cast<double>(above) / n);
    }
    if (options.keep_samples) out.samples = std::move(values);
    return out;
}

CcdfResult ccdf(const TrialGenerator& generator, std::uint64_t trials, std::span<const double> levels,
                const CcdfOptions& options) {
    if (trials == 0) throw ConfigError("ccdf: trials must be >= 1");
    if (!levels.empty()) {
        const double min_level = *std::min_element(levels.begin(), levels.end());
        if (static_cast<double>(trials) < 10.0 / min_level) {
            std::clog << "warning: " << trials << " trials give fewer than 10 exceedances at level " << min_level
                      << "\n";
        }
    }
    std::vector<double> values(trials);
    parallel_for(trials, options.threads, [&](std::size_t t) { values[t] = generator(t); });
    return ccdf_from_values(std::move(values), levels, options);
}

}  // namespace fdss
