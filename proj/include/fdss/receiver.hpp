#pragma once

#include <span>
#include <vector>

#include "fdss/types.hpp"
#include "fdss/waveform.hpp"

namespace fdss {

/// Y[k] = 1/sqrt(nfft) sum_n y[n] exp(-j 2 pi k n / nfft), k in [0, nsc).
CVec demodulate_fft(std::span<const cplx> y, const WaveformConfig& cfg);

/// Combined per-symbol channel gains G[k], k in [0, ndata).
struct CombinedGains {
    std::vector<double> g;
};

/// G[k] = sum of |H[k + i ndata]|^2 over all repetitions inside the allocation.
/// For ne <= ndata this is |H[k]|^2 + |H[k+ndata]|^2 for k < ne and |H[k]|^2 otherwise.
CombinedGains combined_gains(std::span<const cplx> H, const WaveformConfig& cfg);

/// Gains of the receiver that keeps only subcarriers ne/2 .. ne/2+ndata-1.
/// Rejects odd ne.
CombinedGains basic_gains(std::span<const cplx> H, const WaveformConfig& cfg);

struct MrcOutput {
    CVec combined;               // R~[k]
    CombinedGains gains;         // G[k]
    std::vector<double> noise_variance;  // variance of the combined noise, equal to G[k]
};

/// R[k] = H*[k] Y[k], then repeated symbols summed.
MrcOutput mrc_combine(std::span<const cplx> Y, std::span<const cplx> H, const WaveformConfig& cfg);

/// MMSE scaling by 1/(G+1), shift reversal in frequency, unitary IDFT.
CVec mmse_despread(std::span<const cplx> combined, const CombinedGains& G, const WaveformConfig& cfg);

struct RateResult {
    double g0 = 0.0;
    double sinr_eff = 0.0;
    double rate_bpcu = 0.0;
};

/// g0 = mean G/(G+1), sinr = g0/(1-g0), rate = ndata/nsc log2(1/(1-g0)).
/// g0 is saturated at 1 - 2^-53 so infinite gains still produce finite values.
RateResult effective_sinr(const CombinedGains& G, int nsc);

RateResult effective_sinr_basic(std::span<const cplx> H, const WaveformConfig& cfg);

/// Mean of Q(sqrt(sinr)).
double ber_qpsk_theoretical(std::span<const double> sinr_samples);

/// Gaussian tail Q(x).
double q_function(double x);

/// Decomposition r[m] = g0 x[m] + ICI[m] + n[m] of the despread output.
struct SinrDecomposition {
    CVec g;  // g_a for a in [0, ndata)
    double g0 = 0.0;
    double sigma2_ici = 0.0;
    double sigma2_noise = 0.0;
};

SinrDecomposition decompose_sinr(const CombinedGains& G, const WaveformConfig& cfg);

/// Order-independent accumulator for averaging rates across realizations.
class KahanSum {
public:
    void add(double v);
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace fdss
