#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "fdss/types.hpp"
#include "fdss/waveform.hpp"
#include "fdss/window.hpp"

namespace fdss {

enum class ChannelKind { Awgn, TdlC };

struct ProfileTap {
    double delay_s = 0.0;
    double mean_power = 0.0;  // linear, normalized so the profile sums to 1
};

struct ChannelProfile {
    ChannelKind kind = ChannelKind::Awgn;
    double delay_spread_s = 0.0;
    double scs_hz = 0.0;
    std::vector<ProfileTap> taps;

    static ChannelProfile awgn();
    /// TDL-C power-delay profile scaled by the RMS delay spread.
    static ChannelProfile tdl_c(double delay_spread_s, double scs_hz);

    std::string describe() const;
};

struct SampledTap {
    int delay = 0;  // samples at rate nfft * scs
    double mean_power = 0.0;
    /// Deterministic amplitude sqrt(mean_power) instead of a Rayleigh draw.
    bool fixed = false;
};

/// Rounds tap delays to the sample grid and merges taps landing on the same
/// sample. Throws ConfigError if a delay exceeds the cyclic prefix.
std::vector<SampledTap> quantize_profile(const ChannelProfile& profile, const WaveformConfig& cfg);

struct ChannelRealization {
    std::vector<int> delays;
    CVec taps;
    /// Hbar[k] = sum_p h_p exp(-j 2 pi k d_p / nfft) for k in [0, nsc).
    CVec freq_response;
};

/// One block-fading draw: independent zero-mean complex Gaussian taps.
ChannelRealization realize(const ChannelProfile& profile, const WaveformConfig& cfg, std::mt19937_64& rng);

/// Same as realize() but with quantization done once by the caller.
ChannelRealization realize(std::span<const SampledTap> taps, const WaveformConfig& cfg, std::mt19937_64& rng);

CVec frequency_response(std::span<const int> delays, std::span<const cplx> taps, int nsc, int nfft);

/// H[k] = sqrt(snr) W[k] Hbar[k].
CVec effective_subcarrier_gain(const ChannelRealization& re, const FdssWindow& w, double snr);

/// y[n] = sqrt(snr) sum_p h_p s[(n - d_p) mod nfft] + z[n], z ~ CN(0, 1). The
/// circular convolution is what the receiver sees after CP removal.
CVec pass_through(std::span<const cplx> s, const ChannelRealization& re, double snr, std::mt19937_64& noise_rng);

}  // namespace fdss
