#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fdss/channel.hpp"
#include "fdss/constellation.hpp"
#include "fdss/optimizer.hpp"
#include "fdss/waveform.hpp"
#include "fdss/window.hpp"

namespace fdss::exp {

struct WindowSpec {
    WindowFamily family = WindowFamily::Flat;
    std::optional<double> beta;       // hann
    std::optional<double> kappa;      // kaiser
    std::optional<double> ripple_db;  // hann or kaiser

    FdssWindow build(int nsc) const;
    /// Same family with the shaping set by ripple.
    WindowSpec with_ripple(double ripple) const;
};

struct ChannelSpec {
    ChannelKind kind = ChannelKind::Awgn;
    double delay_spread_ns = 300.0;
    double scs_khz = 15.0;

    ChannelProfile build() const;
};

enum class PaprKind { Statistical, Instantaneous, CubicMetric };

struct MetricSpec {
    std::vector<double> levels{1e-1, 1e-2, 1e-3};
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    PaprKind papr = PaprKind::Statistical;
    double threshold_step_db = 0.05;
};

enum class SweepAxis { None, Ne, Shift, Ripple, Snr };

struct SweepSpec {
    SweepAxis axis = SweepAxis::None;
    std::vector<double> values;
};

struct OptimizerSpec {
    SearchMethod method = SearchMethod::BoundU;
    LocalMinGuard guard = LocalMinGuard::CorrectedBound;
    int refine_radius = 0;
    double ccdf_level = 1e-2;
    /// Empty: 0 .. 0.6 nsc, step 1 for bounds and 4 for Monte Carlo.
    std::vector<int> ne_grid;
};

struct ExperimentConfig {
    int nsc = 96;
    int ne = 0;
    int nfft = 2048;
    int ncp = 144;
    ShiftPolicy shift = ShiftPolicy::fixed(0);
    Modulation modulation = Modulation::Qpsk;
    WindowSpec window;
    ChannelSpec channel;
    MetricSpec metric;
    SweepSpec sweep;
    std::vector<double> snr_db{5.0};
    std::optional<int> bound_oversampling;
    std::optional<double> k_db;
    OptimizerSpec optimizer;
    std::filesystem::path out_dir = "out";
    std::string stem = "result";
    unsigned threads = 0;

    WaveformConfig waveform_for(int ne, long shift_l) const;
    /// Rejects anything the modules below would reject, before compute starts.
    void validate() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& yaml_text);

struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::filesystem::path> out_dir;
    std::optional<unsigned> threads;
};

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o);

/// Finished outputs held in memory until the run completes.
struct OutputFile {
    std::string name;
    std::string content;
};

struct RunOutput {
    std::vector<OutputFile> files;
};

RunOutput run_papr_ccdf(const ExperimentConfig& cfg);
RunOutput run_bound_sweep(const ExperimentConfig& cfg);
RunOutput run_se_opt(const ExperimentConfig& cfg);
RunOutput run_rate_sweep(const ExperimentConfig& cfg);
RunOutput run_ber(const ExperimentConfig& cfg);
RunOutput run_window_dump(const ExperimentConfig& cfg);

/// Writes every file under dir; creates dir if needed. Returns the written paths.
std::vector<std::filesystem::path> write_outputs(const RunOutput& out, const std::filesystem::path& dir);

/// CSV cell formatting with round-trip precision.
std::string fmt_double(double v);

}  // namespace fdss::exp
