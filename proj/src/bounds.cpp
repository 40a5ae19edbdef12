#include "fdss/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fdss {

double wrap_mod(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

UMatrix::UMatrix(const Constellation& c, const WaveformConfig& cfg) {
    const int ndata = cfg.ndata;
    const double step = c.phi - (2.0 * static_cast<double>(cfg.shift_mod()) + cfg.ne() - 1.0) / ndata * kPi;
    by_distance_.resize(static_cast<std::size_t>(ndata));
    for (int d = 0; d < ndata; ++d) {
        double best = 0.0;
        for (double omega : c.omega_set) best = std::max(best, std::abs(std::cos(d * step + omega)));
        by_distance_[static_cast<std::size_t>(d)] = best;
    }
}

UMatrix UMatrix::ones(int ndata) {
    UMatrix u;
    u.by_distance_.assign(static_cast<std::size_t>(ndata), 1.0);
    return u;
}

bool UMatrix::cyclically_consistent() const {
    const std::size_t n = by_distance_.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (std::abs(by_distance_[d] - by_distance_[n - d]) > 1e-12) return false;
    }
    return true;
}

UMatrix u_matrix(const Constellation& c, const WaveformConfig& cfg) { return UMatrix(c, cfg); }

namespace {

void require_aligned(const WaveformConfig& cfg) {
    cfg.validate();
    if (!cfg.pulses_aligned()) {
        throw ConfigError("PAPR bound: nfft (" + std::to_string(cfg.nfft) + ") must be divisible by ndata (" +
                          std::to_string(cfg.ndata) + ")");
    }
}

// Pulse magnitudes at one sample: a_i = |p0[(n - step i) mod nfft]|.
class BoundEvaluator {
public:
    BoundEvaluator(const WaveformConfig& cfg, const FdssWindow& w, const UMatrix& u)
        : cfg_(cfg), u_(u.by_distance()), mag_(static_cast<std::size_t>(cfg.nfft)), a_(static_cast<std::size_t>(cfg.ndata)) {
        const CVec p0 = pulse_kernel(cfg, w);
        for (std::size_t n = 0; n < p0.size(); ++n) mag_[n] = std::abs(p0[n]);
    }

    // sum_ij a_i a_j u_|i-j|
    double at(int n) {
        const int step = cfg_.nfft / cfg_.ndata;
        const int ndata = cfg_.ndata;
        for (int i = 0; i < ndata; ++i) {
            int idx = (n - step * i) % cfg_.nfft;
            if (idx < 0) idx += cfg_.nfft;
            a_[static_cast<std::size_t>(i)] = mag_[static_cast<std::size_t>(idx)];
        }
        double diag = 0.0;
        for (double v : a_) diag += v * v;
        double total = u_[0] * diag;
        for (int d = 1; d < ndata; ++d) {
            double cross = 0.0;
            for (int i = 0; i + d < ndata; ++i) cross += a_[static_cast<std::size_t>(i)] * a_[static_cast<std::size_t>(i + d)];
            total += 2.0 * u_[static_cast<std::size_t>(d)] * cross;
        }
        return total;
    }

private:
    const WaveformConfig& cfg_;
    const std::vector<double>& u_;
    std::vector<double> mag_;
    std::vector<double> a_;
};

BoundResult scan(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w, const UMatrix& u, int span,
                 BoundVariant variant) {
    BoundEvaluator eval(cfg, w, u);
    double best = -1.0;
    int arg = 0;
    for (int n = 0; n < span; ++n) {
        const double v = eval.at(n);
        if (v > best) {
            best = v;
            arg = n;
        }
    }
    return BoundResult{db10(c.peak_amplitude_sq / cfg.nsc * best), arg, variant, 0.0};
}

}  // namespace

BoundResult papr_bound_exhaustive(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                  const UMatrix& u) {
    require_aligned(cfg);
    return scan(c, cfg, w, u, cfg.nfft, BoundVariant::U);
}

BoundResult papr_bound_periodic(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                const UMatrix& u) {
    require_aligned(cfg);
    // Shifting n by nfft/ndata relabels pulses cyclically; the weights must agree
    // across the wrap for the short scan to cover every sample.
    if (!u.cyclically_consistent()) return scan(c, cfg, w, u, cfg.nfft, BoundVariant::U);
    return scan(c, cfg, w, u, cfg.nfft / cfg.ndata, BoundVariant::U);
}

BoundResult papr_upper_u(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w) {
    require_aligned(cfg);
    return papr_bound_periodic(c, cfg, w, UMatrix(c, cfg));
}

BoundResult papr_upper_gu(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w) {
    require_aligned(cfg);
    BoundResult r = papr_bound_periodic(c, cfg, w, UMatrix::ones(cfg.ndata));
    r.variant = BoundVariant::GU;
    return r;
}

BoundResult papr_upper_qam_approx(const Constellation& qam, const WaveformConfig& cfg, const FdssWindow& w) {
    if (qam.kind == Modulation::Pi2Bpsk) throw ConfigError("QAM bound approximation needs a QAM constellation");
    BoundResult r = papr_upper_u(make_constellation(Modulation::Qpsk), cfg, w);
    r.value_db += db10(qam.peak_amplitude_sq);
    r.variant = BoundVariant::QamApprox;
    return r;
}

long round_half_down(double x) { return static_cast<long>(std::ceil(x - 0.5)); }

namespace {
long reduce(long v, int ndata) {
    long r = v % ndata;
    return r < 0 ? r + ndata : r;
}
}  // namespace

long optimal_shift_pi2bpsk(int ndata, int ne, long lambda) {
    if (ndata < 1) throw ConfigError("optimal_shift: ndata must be >= 1");
    return reduce(round_half_down(static_cast<double>(lambda) / 2.0 * ndata - (ne - 1.0) / 2.0), ndata);
}

long optimal_shift_qam(int ndata, int ne, long lambda) {
    if (ndata < 1) throw ConfigError("optimal_shift: ndata must be >= 1");
    return reduce(round_half_down((2.0 * static_cast<double>(lambda) + 1.0) / 8.0 * ndata - (ne - 1.0) / 2.0), ndata);
}

long optimal_shift(const Constellation& c, int ndata, int ne, long lambda) {
    return c.kind == Modulation::Pi2Bpsk ? optimal_shift_pi2bpsk(ndata, ne, lambda) : optimal_shift_qam(ndata, ne, lambda);
}

double neighbor_phase_diff(const WaveformConfig& cfg) {
    return wrap_mod(-2.0 * kPi / cfg.ndata * (static_cast<double>(cfg.shift_l) + (cfg.ne() - 1.0) / 2.0), kPi);
}

double neighbor_phase_diff_numeric(const WaveformConfig& cfg, const FdssWindow& w, int m, int n) {
    const double spacing = static_cast<double>(cfg.nfft) / cfg.ndata;
    auto pulse = [&](int idx) {
        const cplx phase = std::polar(1.0, -2.0 * kPi * static_cast<double>(cfg.shift_l) * idx / cfg.ndata);
        return phase * pulse_kernel_at(cfg, w, n - spacing * idx);
    };
    return wrap_mod(std::arg(pulse(m + 1) / pulse(m)), kPi);
}

double corrected_bound(double bound_db, double k_db, int ne, int nsc) {
    return bound_db - k_db * (1.0 - static_cast<double>(ne) / nsc);
}

}  // namespace fdss
