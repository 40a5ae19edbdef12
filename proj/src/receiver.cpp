#include "fdss/receiver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdss/fft.hpp"

namespace fdss {

namespace {

void require_size(std::size_t got, int want, const char* what) {
    if (got != static_cast<std::size_t>(want)) {
        throw ConfigError(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                          std::to_string(got));
    }
}

// Smallest representable 1 - g0.
constexpr double kMinResidual = 1.0 / 9007199254740992.0;  // 2^-53

}  // namespace

CVec demodulate_fft(std::span<const cplx> y, const WaveformConfig& cfg) {
    require_size(y.size(), cfg.nfft, "demodulate_fft");
    CVec full(y.size());
    fft::forward(y, full);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.nfft));
    CVec out(static_cast<std::size_t>(cfg.nsc));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = full[k] * scale;
    return out;
}

CombinedGains combined_gains(std::span<const cplx> H, const WaveformConfig& cfg) {
    require_size(H.size(), cfg.nsc, "combined_gains");
    CombinedGains G{std::vector<double>(static_cast<std::size_t>(cfg.ndata), 0.0)};
    // Subcarrier k carries X_se[k] = X_se[k mod ndata].
    for (std::size_t k = 0; k < H.size(); ++k) G.g[k % static_cast<std::size_t>(cfg.ndata)] += std::norm(H[k]);
    return G;
}

CombinedGains basic_gains(std::span<const cplx> H, const WaveformConfig& cfg) {
    require_size(H.size(), cfg.nsc, "basic_gains");
    if (cfg.ne() % 2 != 0) throw ConfigError("basic receiver: ne must be even, got " + std::to_string(cfg.ne()));
    const int offset = cfg.ne() / 2;
    CombinedGains G{std::vector<double>(static_cast<std::size_t>(cfg.ndata))};
    for (int k = 0; k < cfg.ndata; ++k) G.g[static_cast<std::size_t>(k)] = std::norm(H[static_cast<std::size_t>(offset + k)]);
    return G;
}

MrcOutput mrc_combine(std::span<const cplx> Y, std::span<const cplx> H, const WaveformConfig& cfg) {
    require_size(Y.size(), cfg.nsc, "mrc_combine");
    require_size(H.size(), cfg.nsc, "mrc_combine");
    const auto ndata = static_cast<std::size_t>(cfg.ndata);
    MrcOutput out;
    out.combined.assign(ndata, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < Y.size(); ++k) out.combined[k % ndata] += std::conj(H[k]) * Y[k];
    out.gains = combined_gains(H, cfg);
    // Unit-variance frequency noise weighted by H*: variance sum |H|^2 = G.
    out.noise_variance = out.gains.g;
    return out;
}

CVec mmse_despread(std::span<const cplx> combined, const CombinedGains& G, const WaveformConfig& cfg) {
    require_size(combined.size(), cfg.ndata, "mmse_despread");
    require_size(G.g.size(), cfg.ndata, "mmse_despread");
    const long ndata = cfg.ndata;
    const long shift = cfg.shift_mod();
    CVec unshifted(static_cast<std::size_t>(ndata));
    for (long k = 0; k < ndata; ++k) {
        long src = (k - shift) % ndata;
        if (src < 0) src += ndata;
        const auto s = static_cast<std::size_t>(src);
        unshifted[static_cast<std::size_t>(k)] = combined[s] / (G.g[s] + 1.0);
    }
    return idft_despread(unshifted);
}

RateResult effective_sinr(const CombinedGains& G, int nsc) {
    if (G.g.empty()) throw ConfigError("effective_sinr: no gains");
    const double n = static_cast<double>(G.g.size());
    double g0 = 0.0;
    double residual = 0.0;  // 1 - g0, accumulated directly for accuracy at high SNR
    for (double g : G.g) {
        if (g < 0.0) throw ConfigError("effective_sinr: negative gain");
        if (std::isinf(g)) {
            g0 += 1.0;
        } else {
            g0 += g / (g + 1.0);
            residual += 1.0 / (g + 1.0);
        }
    }
    g0 /= n;
    residual = std::max(residual / n, kMinResidual);
    g0 = std::min(g0, 1.0 - kMinResidual);
    RateResult r;
    r.g0 = g0;
    r.sinr_eff = g0 / residual;
    r.rate_bpcu = n / nsc * std::log2(1.0 / residual);
    return r;
}

RateResult effective_sinr_basic(std::span<const cplx> H, const WaveformConfig& cfg) {
    return effective_sinr(basic_gains(H, cfg), cfg.nsc);
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double ber_qpsk_theoretical(std::span<const double> sinr_samples) {
    if (sinr_samples.empty()) throw ConfigError("ber_qpsk_theoretical: no samples");
    KahanSum acc;
    for (double s : sinr_samples) acc.add(q_function(std::sqrt(s)));
    return acc.value() / static_cast<double>(sinr_samples.size());
}

SinrDecomposition decompose_sinr(const CombinedGains& G, const WaveformConfig& cfg) {
    require_size(G.g.size(), cfg.ndata, "decompose_sinr");
    const auto ndata = static_cast<std::size_t>(cfg.ndata);
    const double n = static_cast<double>(ndata);
    CVec weights(ndata);
    double noise = 0.0;
    for (std::size_t k = 0; k < ndata; ++k) {
        const double g = G.g[k];
        weights[k] = g / (g + 1.0);
        noise += g / ((g + 1.0) * (g + 1.0));
    }
    SinrDecomposition d;
    d.g.resize(ndata);
    fft::inverse(weights, d.g);  // sum_k w[k] exp(j 2 pi k a / ndata)
    for (std::size_t a = 0; a < ndata; ++a) {
        const double turns = static_cast<double>((static_cast<long>(cfg.shift_mod()) * static_cast<long>(a)) % cfg.ndata) / n;
        d.g[a] *= std::polar(1.0, 2.0 * kPi * turns) / n;
    }
    d.g0 = d.g[0].real();
    double ici = 0.0;
    for (std::size_t a = 1; a < ndata; ++a) ici += std::norm(d.g[a]);
    d.sigma2_ici = ici;
    d.sigma2_noise = noise / n;
    return d;
}

void KahanSum::add(double v) {
    const double y = v - carry_;
    const double t = sum_ + y;
    carry_ = (t - sum_) - y;
    sum_ = t;
}

}  // namespace fdss
