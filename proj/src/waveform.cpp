#include "fdss/waveform.hpp"

#include <cmath>
#include <string>

#include "fdss/fft.hpp"

namespace fdss {

namespace {

std::size_t wrap_index(long v, long n) {
    long r = v % n;
    if (r < 0) r += n;
    return static_cast<std::size_t>(r);
}

}  // namespace

int WaveformConfig::shift_mod() const { return static_cast<int>(wrap_index(shift_l, ndata)); }

void WaveformConfig::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("waveform: " + what); };
    if (ndata < 1) fail("ndata must be >= 1");
    if (nsc < ndata) fail("nsc must be >= ndata (ne = nsc - ndata >= 0)");
    if (nfft < 4 * ndata) fail("nfft must be >= 4 * ndata (oversampling of at least 4)");
    if (nsc > nfft) fail("nsc must be <= nfft");
    if (ncp < 0) fail("ncp must be >= 0");
}

WaveformConfig WaveformConfig::with_extension(int nsc, int ne, int nfft, int ncp, long shift_l) {
    WaveformConfig cfg{nsc - ne, nsc, nfft, ncp, shift_l};
    cfg.validate();
    return cfg;
}

CVec dft_precode(std::span<const cplx> x) {
    if (x.empty()) throw ConfigError("dft_precode: empty input");
    CVec out(x.size());
    fft::forward(x, out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto& v : out) v *= scale;
    return out;
}

CVec idft_despread(std::span<const cplx> X) {
    if (X.empty()) throw ConfigError("idft_despread: empty input");
    CVec out(X.size());
    fft::inverse(X, out);
    const double scale = 1.0 / std::sqrt(static_cast<double>(X.size()));
    for (auto& v : out) v *= scale;
    return out;
}

CVec spectrum_extend(std::span<const cplx> X, int nsc, long shift_l) {
    const long ndata = static_cast<long>(X.size());
    if (ndata == 0) throw ConfigError("spectrum_extend: empty input");
    if (nsc < ndata) throw ConfigError("spectrum_extend: nsc must be >= ndata");
    CVec out(static_cast<std::size_t>(nsc));
    for (long k = 0; k < nsc; ++k) out[static_cast<std::size_t>(k)] = X[wrap_index(k + shift_l, ndata)];
    return out;
}

Modulator::Modulator(const WaveformConfig& cfg, const FdssWindow& w)
    : cfg_(cfg), coeffs_(w.coeffs), spread_(static_cast<std::size_t>(cfg.ndata)),
      grid_(static_cast<std::size_t>(cfg.nfft), cplx(0.0, 0.0)) {
    cfg_.validate();
    if (w.nsc() != static_cast<std::size_t>(cfg.nsc)) {
        throw ConfigError("modulate: window length " + std::to_string(w.nsc()) + " != nsc " + std::to_string(cfg.nsc));
    }
}

void Modulator::run(std::span<const cplx> x, std::span<cplx> out) {
    if (x.size() != static_cast<std::size_t>(cfg_.ndata)) {
        throw ConfigError("modulate: expected " + std::to_string(cfg_.ndata) + " symbols, got " +
                          std::to_string(x.size()));
    }
    if (out.size() != static_cast<std::size_t>(cfg_.nfft)) throw ConfigError("modulate: output must hold nfft samples");
    fft::forward(x, spread_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg_.ndata) * cfg_.nfft);
    const long ndata = cfg_.ndata;
    std::size_t h = wrap_index(cfg_.shift_l, ndata);
    // Bins >= nsc stay zero from construction.
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        grid_[k] = (coeffs_[k] * scale) * spread_[h];
        if (++h == static_cast<std::size_t>(ndata)) h = 0;
    }
    fft::inverse(grid_, out);
}

OfdmSymbol modulate(const WaveformConfig& cfg, const FdssWindow& w, std::span<const cplx> x) {
    Modulator mod(cfg, w);
    OfdmSymbol sym{CVec(static_cast<std::size_t>(cfg.nfft))};
    mod.run(x, sym.samples);
    return sym;
}

CVec pulse_kernel(const WaveformConfig& cfg, const FdssWindow& w) {
    cfg.validate();
    if (w.nsc() != static_cast<std::size_t>(cfg.nsc)) throw ConfigError("pulse_kernel: window length != nsc");
    CVec grid(static_cast<std::size_t>(cfg.nfft), cplx(0.0, 0.0));
    for (std::size_t k = 0; k < w.nsc(); ++k) grid[k] = w.coeffs[k];
    CVec p0(grid.size());
    fft::inverse(grid, p0);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.ndata));
    for (auto& v : p0) v *= scale;
    return p0;
}

cplx pulse_kernel_at(const WaveformConfig& cfg, const FdssWindow& w, double t) {
    cplx acc(0.0, 0.0);
    for (std::size_t k = 0; k < w.nsc(); ++k) {
        acc += w.coeffs[k] * std::polar(1.0, 2.0 * kPi * static_cast<double>(k) * t / cfg.nfft);
    }
    return acc / std::sqrt(static_cast<double>(cfg.ndata));
}

std::vector<CVec> pulses(const WaveformConfig& cfg, const FdssWindow& w) {
    if (!cfg.pulses_aligned()) {
        throw ConfigError("pulses: nfft (" + std::to_string(cfg.nfft) + ") must be divisible by ndata (" +
                          std::to_string(cfg.ndata) + ")");
    }
    const CVec p0 = pulse_kernel(cfg, w);
    const long step = cfg.nfft / cfg.ndata;
    std::vector<CVec> out(static_cast<std::size_t>(cfg.ndata), CVec(static_cast<std::size_t>(cfg.nfft)));
    for (long m = 0; m < cfg.ndata; ++m) {
        const cplx phase = std::polar(1.0, -2.0 * kPi * static_cast<double>(wrap_index(cfg.shift_l * m, cfg.ndata)) /
                                               cfg.ndata);
        auto& pm = out[static_cast<std::size_t>(m)];
        for (long n = 0; n < cfg.nfft; ++n) pm[static_cast<std::size_t>(n)] = phase * p0[wrap_index(n - step * m, cfg.nfft)];
    }
    return out;
}

CVec with_cyclic_prefix(std::span<const cplx> samples, int ncp) {
    if (ncp < 0 || static_cast<std::size_t>(ncp) > samples.size()) throw ConfigError("cyclic prefix longer than symbol");
    CVec out;
    out.reserve(samples.size() + static_cast<std::size_t>(ncp));
    out.insert(out.end(), samples.end() - ncp, samples.end());
    out.insert(out.end(), samples.begin(), samples.end());
    return out;
}

}  // namespace fdss
