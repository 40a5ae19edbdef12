#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fdss/types.hpp"
#include "fdss/window.hpp"

namespace fdss {

/// Dimensions of one DFT-s-OFDM symbol with spectrum extension.
///
/// The extension size ne = nsc - ndata is derived, never stored. shift_l may be
/// any integer and is applied modulo ndata.
struct WaveformConfig {
    int ndata = 0;
    int nsc = 0;
    int nfft = 0;
    int ncp = 0;
    long shift_l = 0;

    int ne() const { return nsc - ndata; }
    /// shift_l reduced to [0, ndata).
    int shift_mod() const;
    /// Samples per pulse spacing, nfft / ndata; only meaningful when divisible.
    bool pulses_aligned() const { return ndata > 0 && nfft % ndata == 0; }

    /// Throws ConfigError naming the violated rule.
    void validate() const;

    static WaveformConfig with_extension(int nsc, int ne, int nfft, int ncp = 0, long shift_l = 0);
};

struct OfdmSymbol {
    /// s[n] for n in [0, nfft); the cyclic prefix is not stored.
    CVec samples;
};

/// Unitary DFT: X[h] = 1/sqrt(N) sum_m x[m] exp(-j 2 pi h m / N).
CVec dft_precode(std::span<const cplx> x);

/// Unitary inverse DFT, the inverse of dft_precode.
CVec idft_despread(std::span<const cplx> X);

/// X_se[k] = X[(k + L) mod ndata] for k in [0, nsc).
CVec spectrum_extend(std::span<const cplx> X, int nsc, long shift_l);

/// s[n] = 1/sqrt(nfft) sum_k W[k] X_se[k] exp(j 2 pi n k / nfft).
OfdmSymbol modulate(const WaveformConfig& cfg, const FdssWindow& w, std::span<const cplx> x);

/// Reusable transmitter for Monte Carlo loops. Holds scratch buffers, so one
/// instance per thread.
class Modulator {
public:
    Modulator(const WaveformConfig& cfg, const FdssWindow& w);

    /// Writes nfft samples into `out`.
    void run(std::span<const cplx> x, std::span<cplx> out);

    const WaveformConfig& config() const { return cfg_; }

private:
    WaveformConfig cfg_;
    std::vector<double> coeffs_;
    CVec spread_;
    CVec grid_;
};

/// Kernel pulse p0[n] = 1/sqrt(ndata) sum_k W[k] exp(j 2 pi k n / nfft).
CVec pulse_kernel(const WaveformConfig& cfg, const FdssWindow& w);

/// p0 evaluated at a real-valued time instant; used for non-integral shifts.
cplx pulse_kernel_at(const WaveformConfig& cfg, const FdssWindow& w, double t);

/// p_m[n] = exp(-j 2 pi L m / ndata) p0[(n - (nfft/ndata) m) mod nfft].
/// Requires nfft divisible by ndata.
std::vector<CVec> pulses(const WaveformConfig& cfg, const FdssWindow& w);

/// Prepends the last ncp samples.
CVec with_cyclic_prefix(std::span<const cplx> samples, int ncp);

}  // namespace fdss
