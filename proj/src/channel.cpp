#include "fdss/channel.hpp"

#include <array>
#include <cmath>
#include <map>
#include <sstream>

namespace fdss {

namespace {

struct NormalizedTap {
    double delay;     // multiples of the RMS delay spread
    double power_db;
};

// 3GPP TR 38.901 Table 7.7.2-3, TDL-C (NLOS) normalized delay/power profile.
constexpr std::array<NormalizedTap, 24> kTdlC{{
    {0.0000, -4.4},  {0.2099, -1.2},  {0.2219, -3.5},  {0.2329, -5.2},  {0.2176, -2.5},  {0.6366, 0.0},
    {0.6448, -2.2},  {0.6560, -3.9},  {0.6584, -7.4},  {0.7935, -7.1},  {0.8213, -10.7}, {0.9336, -11.1},
    {1.2285, -5.1},  {1.3083, -6.8},  {2.1704, -8.7},  {2.7105, -13.2}, {4.2589, -13.9}, {4.6003, -13.9},
    {5.4902, -15.8}, {5.6077, -17.1}, {6.3065, -16.0}, {6.6374, -15.7}, {7.0427, -21.6}, {8.6523, -22.8},
}};

}  // namespace

ChannelProfile ChannelProfile::awgn() { return ChannelProfile{ChannelKind::Awgn, 0.0, 0.0, {{0.0, 1.0}}}; }

ChannelProfile ChannelProfile::tdl_c(double delay_spread_s, double scs_hz) {
    if (!(delay_spread_s >= 0.0)) throw ConfigError("tdlc: delay spread must be >= 0");
    if (!(scs_hz > 0.0)) throw ConfigError("tdlc: subcarrier spacing must be > 0");
    ChannelProfile p{ChannelKind::TdlC, delay_spread_s, scs_hz, {}};
    double total = 0.0;
    for (const auto& t : kTdlC) total += std::pow(10.0, t.power_db / 10.0);
    for (const auto& t : kTdlC) p.taps.push_back({t.delay * delay_spread_s, std::pow(10.0, t.power_db / 10.0) / total});
    return p;
}

std::string ChannelProfile::describe() const {
    if (kind == ChannelKind::Awgn) return "awgn";
    std::ostringstream os;
    os << "tdlc(" << delay_spread_s * 1e9 << " ns, " << scs_hz / 1e3 << " kHz)";
    return os.str();
}

std::vector<SampledTap> quantize_profile(const ChannelProfile& profile, const WaveformConfig& cfg) {
    if (profile.kind == ChannelKind::Awgn) return {{0, 1.0, true}};
    const double rate = static_cast<double>(cfg.nfft) * profile.scs_hz;
    std::map<int, double> merged;
    for (const auto& t : profile.taps) merged[static_cast<int>(std::lround(t.delay_s * rate))] += t.mean_power;
    std::vector<SampledTap> out;
    for (const auto& [delay, power] : merged) {
        if (delay > cfg.ncp) {
            throw ConfigError("channel: tap delay of " + std::to_string(delay) + " samples exceeds the cyclic prefix (" +
                              std::to_string(cfg.ncp) + ")");
        }
        out.push_back({delay, power, false});
    }
    return out;
}

CVec frequency_response(std::span<const int> delays, std::span<const cplx> taps, int nsc, int nfft) {
    CVec h(static_cast<std::size_t>(nsc), cplx(0.0, 0.0));
    for (std::size_t p = 0; p < taps.size(); ++p) {
        for (int k = 0; k < nsc; ++k) {
            const double turns = static_cast<double>((static_cast<long>(k) * delays[p]) % nfft) / nfft;
            h[static_cast<std::size_t>(k)] += taps[p] * std::polar(1.0, -2.0 * kPi * turns);
        }
    }
    return h;
}

ChannelRealization realize(std::span<const SampledTap> taps, const WaveformConfig& cfg, std::mt19937_64& rng) {
    ChannelRealization re;
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (const auto& t : taps) {
        re.delays.push_back(t.delay);
        if (t.fixed) {
            re.taps.emplace_back(std::sqrt(t.mean_power), 0.0);
            continue;
        }
        const double sigma = std::sqrt(t.mean_power / 2.0);
        const double a = gauss(rng);
        const double b = gauss(rng);
        re.taps.emplace_back(sigma * a, sigma * b);
    }
    re.freq_response = frequency_response(re.delays, re.taps, cfg.nsc, cfg.nfft);
    return re;
}

ChannelRealization realize(const ChannelProfile& profile, const WaveformConfig& cfg, std::mt19937_64& rng) {
    const auto taps = quantize_profile(profile, cfg);
    return realize(taps, cfg, rng);
}

CVec effective_subcarrier_gain(const ChannelRealization& re, const FdssWindow& w, double snr) {
    if (re.freq_response.size() != w.nsc()) throw ConfigError("effective_subcarrier_gain: window/channel size mismatch");
    const double amp = std::sqrt(snr);
    CVec h(w.nsc());
    for (std::size_t k = 0; k < h.size(); ++k) h[k] = amp * w.coeffs[k] * re.freq_response[k];
    return h;
}

CVec pass_through(std::span<const cplx> s, const ChannelRealization& re, double snr, std::mt19937_64& noise_rng) {
    const std::size_t n = s.size();
    const double amp = std::sqrt(snr);
    CVec y(n, cplx(0.0, 0.0));
    for (std::size_t p = 0; p < re.taps.size(); ++p) {
        const auto d = static_cast<std::size_t>(re.delays[p]) % n;
        const cplx g = amp * re.taps[p];
        for (std::size_t i = 0; i < n; ++i) y[(i + d) % n] += g * s[i];
    }
    std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
    for (auto& v : y) {
        const double a = gauss(noise_rng);
        const double b = gauss(noise_rng);
        v += cplx(a, b);
    }
    return y;
}

}  // namespace fdss
