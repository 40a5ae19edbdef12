#include "fdss/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "fdss/metrics.hpp"
#include "fdss/parallel.hpp"
#include "fdss/random.hpp"
#include "fdss/receiver.hpp"

namespace fdss {

long ShiftPolicy::shift_for(int ndata, int ne) const {
    switch (kind) {
        case Kind::Fixed: return value;
        case Kind::Pi2Bpsk: return optimal_shift_pi2bpsk(ndata, ne, lambda);
        case Kind::Qam: return optimal_shift_qam(ndata, ne, lambda);
    }
    return 0;
}

std::string ShiftPolicy::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Fixed: os << "fixed(" << value << ")"; break;
        case Kind::Pi2Bpsk: os << "pi2bpsk(lambda=" << lambda << ")"; break;
        case Kind::Qam: os << "qam(lambda=" << lambda << ")"; break;
    }
    return os.str();
}

std::string to_string(SearchMethod m) {
    switch (m) {
        case SearchMethod::BoundU: return "bound_u";
        case SearchMethod::QamApprox: return "qam_approx";
        case SearchMethod::CorrectedBound: return "corrected_bound";
        case SearchMethod::MonteCarloCcdf: return "monte_carlo";
        case SearchMethod::Capacity: return "capacity";
    }
    return "?";
}

namespace {

constexpr std::size_t kTrialChunk = 1024;

}  // namespace

std::vector<double> papr_samples(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                 std::uint64_t trials, std::uint64_t seed, unsigned threads, PaprMeasure measure) {
    if (trials == 0) throw ConfigError("Monte Carlo PAPR: trials must be >= 1");
    cfg.validate();
    const SeedStream symbols(seed, kSymbolStream);
    std::vector<double> values(trials);
    const std::size_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        Modulator mod(cfg, w);
        CVec out(static_cast<std::size_t>(cfg.nfft));
        const std::size_t end = std::min<std::size_t>(trials, (chunk + 1) * kTrialChunk);
        for (std::size_t t = chunk * kTrialChunk; t < end; ++t) {
            auto rng = symbols.engine(t);
            const CVec x = draw_symbols(c, static_cast<std::size_t>(cfg.ndata), rng);
            mod.run(x, out);
            values[t] = measure ? measure(out, cfg) : papr_statistical(out, cfg);
        }
    });
    return values;
}

namespace {

void check_grid(const std::vector<int>& grid, int nsc) {
    if (grid.empty()) throw ConfigError("SE search: empty ne grid");
    for (int ne : grid) {
        if (ne < 0 || ne > nsc - 1) {
            throw ConfigError("SE search: ne=" + std::to_string(ne) + " outside [0, " + std::to_string(nsc - 1) + "]");
        }
    }
}

int bound_nfft(const PaprSearchOptions& options, int ndata) {
    return options.bound_oversampling ? *options.bound_oversampling * ndata : options.nfft;
}

template <typename Better>
void pick_extremum(SeSearchResult& r, Better better) {
    if (r.curve.empty()) throw ConfigError("SE search: empty feasible grid");
    std::sort(r.curve.begin(), r.curve.end());
    auto best = r.curve.front();
    for (const auto& p : r.curve) {
        if (better(p.second, best.second)) best = p;
    }
    r.ne_opt = best.first;
    r.objective_at_opt = best.second;
}

}  // namespace

std::vector<double> monte_carlo_papr_levels(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w,
                                            const std::vector<double>& levels, std::uint64_t trials,
                                            std::uint64_t seed, unsigned threads) {
    auto values = papr_samples(c, cfg, w, trials, seed, threads);
    std::sort(values.begin(), values.end());
    std::vector<double> out;
    out.reserve(levels.size());
    for (double level : levels) out.push_back(quantile_of_sorted(values, level));
    return out;
}

double monte_carlo_papr(const Constellation& c, const WaveformConfig& cfg, const FdssWindow& w, double level,
                        std::uint64_t trials, std::uint64_t seed, unsigned threads) {
    return monte_carlo_papr_levels(c, cfg, w, {level}, trials, seed, threads).front();
}

double calibrate_bound_gap(const Constellation& c, int nsc, const FdssWindow& w, const PaprSearchOptions& options,
                           const ShiftPolicy& shift) {
    const long l = shift.shift_for(nsc, 0);
    const int nfft_b = bound_nfft(options, nsc);
    const auto bound_cfg = WaveformConfig::with_extension(nsc, 0, nfft_b, 0, l);
    const double bound = options.method == SearchMethod::QamApprox ? papr_upper_qam_approx(c, bound_cfg, w).value_db
                                                                   : papr_upper_u(c, bound_cfg, w).value_db;
    const auto sim_cfg = WaveformConfig::with_extension(nsc, 0, options.nfft, 0, l);
    const double sim = monte_carlo_papr(c, sim_cfg, w, options.ccdf_level, options.calibration_trials, options.seed,
                                        options.threads);
    return std::max(0.0, bound - sim);
}

SeSearchResult search_ne_papr(const Constellation& c, int nsc, const FdssWindow& w, const PaprSearchOptions& options,
                              const ShiftPolicy& shift, const std::vector<int>& ne_grid) {
    check_grid(ne_grid, nsc);
    if (w.nsc() != static_cast<std::size_t>(nsc)) throw ConfigError("SE search: window length != nsc");
    SeSearchResult r;
    r.method = options.method;
    std::vector<int> grid = ne_grid;

    if (options.method == SearchMethod::MonteCarloCcdf) {
        r.level = options.ccdf_level;
        auto eval = [&](int ne) {
            const int ndata = nsc - ne;
            const auto cfg = WaveformConfig::with_extension(nsc, ne, options.nfft, 0, shift.shift_for(ndata, ne));
            return monte_carlo_papr(c, cfg, w, options.ccdf_level, options.trials, options.seed, options.threads);
        };
        std::set<int> done;
        for (int ne : grid) {
            if (done.insert(ne).second) r.curve.emplace_back(ne, eval(ne));
        }
        pick_extremum(r, std::less<>());
        if (options.refine_radius > 0) {
            const int centre = r.ne_opt;
            for (int ne = std::max(0, centre - options.refine_radius);
                 ne <= std::min(nsc - 1, centre + options.refine_radius); ++ne) {
                if (done.insert(ne).second) r.curve.emplace_back(ne, eval(ne));
            }
            pick_extremum(r, std::less<>());
        }
        return r;
    }
    if (options.method == SearchMethod::Capacity) throw ConfigError("search_ne_papr: capacity is not a PAPR method");

    SearchMethod method = options.method;
    bool corrected = method == SearchMethod::CorrectedBound;
    const bool guarded = method == SearchMethod::BoundU || method == SearchMethod::QamApprox;
    if (guarded && ripple_db(w) > options.guard_ripple_db) {
        if (options.guard == LocalMinGuard::RestrictRange) {
            std::erase_if(grid, [&](int ne) { return ne > 0.3 * nsc; });
        } else if (options.guard == LocalMinGuard::CorrectedBound) {
            corrected = true;
            // The QAM approximation keeps its label; k_db > 0 marks the correction.
            if (method == SearchMethod::BoundU) method = SearchMethod::CorrectedBound;
        }
    }
    r.method = method;
    if (corrected) {
        PaprSearchOptions cal = options;
        cal.method = method == SearchMethod::QamApprox ? method : SearchMethod::BoundU;
        r.k_db = options.k_db ? *options.k_db : calibrate_bound_gap(c, nsc, w, cal, shift);
    }

    for (int ne : grid) {
        const int ndata = nsc - ne;
        const int nfft = bound_nfft(options, ndata);
        if (nfft % ndata != 0 || nfft < 4 * ndata || nfft < nsc) continue;
        const auto cfg = WaveformConfig::with_extension(nsc, ne, nfft, 0, shift.shift_for(ndata, ne));
        double value = 0.0;
        switch (method) {
            case SearchMethod::BoundU: value = papr_upper_u(c, cfg, w).value_db; break;
            case SearchMethod::QamApprox: value = papr_upper_qam_approx(c, cfg, w).value_db; break;
            case SearchMethod::CorrectedBound: value = papr_upper_u(c, cfg, w).value_db; break;
            default: break;
        }
        if (corrected) value = corrected_bound(value, r.k_db, ne, nsc);
        r.curve.emplace_back(ne, value);
    }
    pick_extremum(r, std::less<>());
    return r;
}

std::vector<CVec> draw_channel_responses(const ChannelProfile& profile, int nsc, const CapacityOptions& options) {
    if (options.trials == 0) throw ConfigError("capacity: trials must be >= 1");
    WaveformConfig cfg{nsc, nsc, options.nfft, options.ncp, 0};
    if (profile.kind == ChannelKind::Awgn) return {CVec(static_cast<std::size_t>(nsc), cplx(1.0, 0.0))};
    const auto taps = quantize_profile(profile, cfg);
    const SeedStream stream(options.seed, kChannelStream);
    std::vector<CVec> out(options.trials);
    parallel_for(options.trials, options.threads, [&](std::size_t t) {
        auto rng = stream.engine(t);
        out[t] = realize(taps, cfg, rng).freq_response;
    });
    return out;
}

double mean_rate(const std::vector<CVec>& responses, const FdssWindow& w, int ne, double snr_db, unsigned threads) {
    if (responses.empty()) throw ConfigError("mean_rate: no channel responses");
    const int nsc = static_cast<int>(w.nsc());
    const double snr = from_db10(snr_db);
    const WaveformConfig cfg{nsc - ne, nsc, std::max(nsc, 4 * (nsc - ne)), 0, 0};
    std::vector<double> rates(responses.size());
    parallel_for(responses.size(), threads, [&](std::size_t t) {
        const auto& hbar = responses[t];
        CVec h(hbar.size());
        for (std::size_t k = 0; k < h.size(); ++k) h[k] = std::sqrt(snr) * w.coeffs[k] * hbar[k];
        rates[t] = effective_sinr(combined_gains(h, cfg), nsc).rate_bpcu;
    });
    KahanSum acc;
    for (double v : rates) acc.add(v);
    return acc.value() / static_cast<double>(rates.size());
}

SeSearchResult search_ne_capa(const std::vector<CVec>& responses, const FdssWindow& w, double snr_db,
                              const std::vector<int>& ne_grid, unsigned threads) {
    const int nsc = static_cast<int>(w.nsc());
    check_grid(ne_grid, nsc);
    SeSearchResult r;
    r.method = SearchMethod::Capacity;
    r.snr_db = snr_db;
    std::set<int> done;
    for (int ne : ne_grid) {
        if (done.insert(ne).second) r.curve.emplace_back(ne, mean_rate(responses, w, ne, snr_db, threads));
    }
    pick_extremum(r, std::greater<>());
    return r;
}

SeSearchResult search_ne_capa(int nsc, const FdssWindow& w, const ChannelProfile& profile, double snr_db,
                              const CapacityOptions& options, const std::vector<int>& ne_grid) {
    if (w.nsc() != static_cast<std::size_t>(nsc)) throw ConfigError("SE search: window length != nsc");
    check_grid(ne_grid, nsc);
    const auto responses = draw_channel_responses(profile, nsc, options);
    return search_ne_capa(responses, w, snr_db, ne_grid, options.threads);
}

TradeoffReport tradeoff_report(const Constellation& c, int nsc, const FdssWindow& w, const ChannelProfile& profile,
                               double snr_db, const TradeoffOptions& options) {
    std::vector<int> grid = options.ne_grid;
    if (grid.empty()) {
        for (int ne = 0; ne <= static_cast<int>(0.6 * nsc); ++ne) grid.push_back(ne);
    }
    TradeoffReport rep;
    rep.snr_db = snr_db;
    const auto papr = search_ne_papr(c, nsc, w, options.papr, options.shift, grid);
    rep.ne_papr = papr.ne_opt;

    const auto responses = draw_channel_responses(profile, nsc, options.capacity);
    const unsigned threads = options.capacity.threads;
    const auto capa = search_ne_capa(responses, w, snr_db, grid, threads);
    rep.ne_capa = capa.ne_opt;
    rep.rate_plain = mean_rate(responses, flat_window(static_cast<std::size_t>(nsc)), 0, snr_db, threads);
    rep.rate_no_se = mean_rate(responses, w, 0, snr_db, threads);
    rep.rate_at_ne_capa = capa.objective_at_opt;
    rep.rate_at_ne_papr = mean_rate(responses, w, rep.ne_papr, snr_db, threads);
    rep.capa_not_above_papr = rep.ne_capa <= rep.ne_papr;

    auto bound_at = [&](int ne) {
        const int ndata = nsc - ne;
        const int nfft = options.papr.bound_oversampling ? *options.papr.bound_oversampling * ndata : options.papr.nfft;
        if (nfft % ndata != 0) return std::nan("");
        const auto cfg = WaveformConfig::with_extension(nsc, ne, nfft, 0, options.shift.shift_for(ndata, ne));
        return papr_upper_u(c, cfg, w).value_db;
    };
    rep.bound_at_ne_papr_db = bound_at(rep.ne_papr);
    rep.bound_at_ne_capa_db = bound_at(rep.ne_capa);

    if (options.papr_trials > 0) {
        auto sim_at = [&](int ne) {
            const int ndata = nsc - ne;
            const auto cfg = WaveformConfig::with_extension(nsc, ne, options.papr.nfft, 0, options.shift.shift_for(ndata, ne));
            return monte_carlo_papr(c, cfg, w, 1e-3, options.papr_trials, options.papr.seed, options.papr.threads);
        };
        rep.papr_at_ne_papr_db = sim_at(rep.ne_papr);
        rep.papr_at_ne_capa_db = sim_at(rep.ne_capa);
        rep.papr_no_se_db = sim_at(0);
    }
    return rep;
}

}  // namespace fdss
