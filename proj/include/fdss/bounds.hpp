#pragma once

#include <vector>

#include "fdss/constellation.hpp"
#include "fdss/waveform.hpp"
#include "fdss/window.hpp"

namespace fdss {

enum class BoundVariant { U, GU, QamApprox, Corrected };

struct BoundResult {
    double value_db = 0.0;
    /// Maximizing sample index, reduced to [0, nfft/ndata) when the periodic search applies.
    int argmax_n = 0;
    BoundVariant variant = BoundVariant::U;
    double k_db = 0.0;  // Corrected only
};

/// Phase-combining weights u_ij. They depend on i - j only and are stored by |i - j|.
class UMatrix {
public:
    UMatrix(const Constellation& c, const WaveformConfig& cfg);
    /// All-ones weights (general bound).
    static UMatrix ones(int ndata);

    double operator()(int i, int j) const { return by_distance_[static_cast<std::size_t>(i > j ? i - j : j - i)]; }
    int size() const { return static_cast<int>(by_distance_.size()); }
    const std::vector<double>& by_distance() const { return by_distance_; }

    /// True when u_d == u_{ndata-d} for every d, i.e. the weights survive the
    /// cyclic relabeling used by the periodic max search.
    bool cyclically_consistent() const;

private:
    UMatrix() = default;
    std::vector<double> by_distance_;
};

UMatrix u_matrix(const Constellation& c, const WaveformConfig& cfg);

/// Max over n of (A^2/nsc) sum_ij |p_i[n]||p_j[n]| u_ij, in dB. The search covers
/// nfft/ndata consecutive samples; requires nfft divisible by ndata.
BoundResult papr_upper_u(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w);

/// As papr_upper_u with u_ij = 1.
BoundResult papr_upper_gu(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w);

/// QAM peak power (dB) plus the QPSK bound.
BoundResult papr_upper_qam_approx(const Constellation& qam, const WaveformConfig& cfg, const FdssWindow& w);

/// Bound expression evaluated at every n in [0, nfft); the oracle for the periodic search.
BoundResult papr_bound_exhaustive(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                  const UMatrix& u);

/// Bound expression restricted to n in [0, nfft/ndata).
BoundResult papr_bound_periodic(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                const UMatrix& u);

/// Round-to-nearest with exact halves rounded toward negative infinity.
long round_half_down(double x);

/// Shift minimizing neighbouring-pulse phase interaction: for pi/2-BPSK
/// round(lambda/2 ndata - (ne-1)/2), for QAM round((2 lambda + 1)/8 ndata - (ne-1)/2),
/// reduced modulo ndata.
long optimal_shift(const Constellation& c, int ndata, int ne, long lambda);
long optimal_shift_pi2bpsk(int ndata, int ne, long lambda);
long optimal_shift_qam(int ndata, int ne, long lambda);

/// Analytic phase of p_{m+1}/p_m modulo pi, in [0, pi).
double neighbor_phase_diff(const WaveformConfig& cfg);

/// arg(p_{m+1}[n] / p_m[n]) modulo pi from explicit pulses.
double neighbor_phase_diff_numeric(const WaveformConfig& cfg, const FdssWindow& w, int m, int n);

/// bound_db - k_db (1 - ne/nsc).
double corrected_bound(double bound_db, double k_db, int ne, int nsc);

/// x reduced to [0, period).
double wrap_mod(double x, double period);

}  // namespace fdss
