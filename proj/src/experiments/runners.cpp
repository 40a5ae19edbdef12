#include <algorithm>
#include <bit>
#include <cmath>

#include "fdss/bounds.hpp"
#include "fdss/metrics.hpp"
#include "fdss/parallel.hpp"
#include "fdss/random.hpp"
#include "fdss/receiver.hpp"
#include "output.hpp"

namespace fdss::exp {

namespace {

using nlohmann::ordered_json;

// One evaluation point of a papr-ccdf or bound sweep.
struct Point {
    int ne = 0;
    long shift = 0;
    double ripple = 0.0;
    FdssWindow window;
};

std::vector<Point> sweep_points(const ExperimentConfig& cfg, const std::string& command, bool allow_ripple) {
    std::vector<Point> pts;
    auto at = [&](int ne, std::optional<long> shift, const FdssWindow& w) {
        Point p;
        p.ne = ne;
        p.shift = shift ? *shift : cfg.shift.shift_for(cfg.nsc - ne, ne);
        p.window = w;
        p.ripple = ripple_db(w);
        pts.push_back(std::move(p));
    };
    switch (cfg.sweep.axis) {
        case SweepAxis::None: at(cfg.ne, std::nullopt, cfg.window.build(cfg.nsc)); break;
        case SweepAxis::Ne: {
            const auto w = cfg.window.build(cfg.nsc);
            for (double v : cfg.sweep.values) at(static_cast<int>(v), std::nullopt, w);
            break;
        }
        case SweepAxis::Shift: {
            const auto w = cfg.window.build(cfg.nsc);
            for (double v : cfg.sweep.values) at(cfg.ne, static_cast<long>(v), w);
            break;
        }
        case SweepAxis::Ripple:
            if (!allow_ripple) throw ConfigError(command + ": ripple axis not supported");
            for (double v : cfg.sweep.values) at(cfg.ne, std::nullopt, cfg.window.with_ripple(v).build(cfg.nsc));
            break;
        case SweepAxis::Snr: throw ConfigError(command + ": snr axis not supported");
    }
    return pts;
}

PaprMeasure measure_for(PaprKind kind) {
    switch (kind) {
        case PaprKind::Statistical: return nullptr;
        case PaprKind::Instantaneous:
            return [](std::span<const cplx> s, const WaveformConfig&) { return papr_instantaneous(s); };
        case PaprKind::CubicMetric: return [](std::span<const cplx> s, const WaveformConfig&) { return cubic_metric(s); };
    }
    return nullptr;
}

const char* measure_name(PaprKind kind) {
    switch (kind) {
        case PaprKind::Statistical: return "papr_db";
        case PaprKind::Instantaneous: return "papr_inst_db";
        case PaprKind::CubicMetric: return "cm_db";
    }
    return "value_db";
}

// Nfft used by pulse-based bounds at one grid point; 0 when infeasible.
int bound_nfft(const ExperimentConfig& cfg, int ndata) {
    const int nfft = cfg.bound_oversampling ? *cfg.bound_oversampling * ndata : cfg.nfft;
    if (nfft % ndata != 0 || nfft < 4 * ndata || nfft < cfg.nsc) return 0;
    return nfft;
}

PaprSearchOptions search_options(const ExperimentConfig& cfg) {
    PaprSearchOptions o;
    o.method = cfg.optimizer.method;
    o.nfft = cfg.nfft;
    o.bound_oversampling = cfg.bound_oversampling;
    o.ccdf_level = cfg.optimizer.ccdf_level;
    o.trials = cfg.metric.trials;
    o.seed = cfg.metric.seed;
    o.threads = cfg.threads;
    o.k_db = cfg.k_db;
    o.calibration_trials = cfg.metric.trials;
    o.guard = cfg.optimizer.guard;
    o.refine_radius = cfg.optimizer.refine_radius;
    return o;
}

CapacityOptions capacity_options(const ExperimentConfig& cfg) {
    CapacityOptions o;
    o.nfft = cfg.nfft;
    o.ncp = cfg.ncp;
    o.trials = cfg.metric.trials;
    o.seed = cfg.metric.seed;
    o.threads = cfg.threads;
    return o;
}

std::vector<double> snr_list(const ExperimentConfig& cfg) {
    return cfg.sweep.axis == SweepAxis::Snr ? cfg.sweep.values : cfg.snr_db;
}

std::vector<int> ne_list(const ExperimentConfig& cfg) {
    if (cfg.sweep.axis != SweepAxis::Ne) return {cfg.ne};
    std::vector<int> v;
    for (double x : cfg.sweep.values) v.push_back(static_cast<int>(x));
    return v;
}

std::string s(double v) { return fmt_double(v); }
std::string s(long v) { return std::to_string(v); }
std::string s(int v) { return std::to_string(v); }
std::string s(std::uint64_t v) { return std::to_string(v); }

}  // namespace

RunOutput run_papr_ccdf(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto c = make_constellation(cfg.modulation);
    const auto pts = sweep_points(cfg, "papr-ccdf", true);
    for (const auto& p : pts) cfg.waveform_for(p.ne, p.shift).validate();

    const std::string name = measure_name(cfg.metric.papr);
    std::vector<std::string> header{"ne", "L", "ripple_db"};
    for (double level : cfg.metric.levels) header.push_back(level_column(name, level));
    header.push_back("mean_db");
    header.push_back("max_db");
    CsvTable summary(header);
    CsvTable curves({"ne", "L", "ripple_db", "threshold_db", "ccdf"});
    ordered_json points = ordered_json::array();

    CcdfOptions copt;
    copt.seed = cfg.metric.seed;
    copt.threshold_step_db = cfg.metric.threshold_step_db;
    for (const auto& p : pts) {
        const auto wf = cfg.waveform_for(p.ne, p.shift);
        auto values = papr_samples(c, wf, p.window, cfg.metric.trials, cfg.metric.seed, cfg.threads,
                                   measure_for(cfg.metric.papr));
        const auto res = ccdf_from_values(std::move(values), cfg.metric.levels, copt);
        std::vector<std::string> row{s(p.ne), s(p.shift), s(p.ripple)};
        ordered_json readouts = ordered_json::object();
        for (const auto& q : res.quantiles) {
            row.push_back(s(q.value_db));
            readouts[level_column(name, q.level)] = q.value_db;
        }
        row.push_back(s(res.mean_db));
        row.push_back(s(res.max_db));
        summary.add_row(std::move(row));
        for (std::size_t i = 0; i < res.curve.thresholds_db.size(); ++i) {
            curves.add_row({s(p.ne), s(p.shift), s(p.ripple), s(res.curve.thresholds_db[i]), s(res.curve.ccdf[i])});
        }
        points.push_back({{"ne", p.ne}, {"L", p.shift}, {"ripple_db", p.ripple}, {"readouts", readouts},
                          {"mean_db", res.mean_db}, {"max_db", res.max_db}});
    }
    ordered_json j;
    j["metadata"] = run_metadata("papr-ccdf", cfg);
    j["measure"] = name;
    j["points"] = points;
    RunOutput out;
    out.files.push_back({cfg.stem + ".csv", summary.str()});
    out.files.push_back({cfg.stem + "_ccdf.csv", curves.str()});
    out.files.push_back({cfg.stem + ".json", dump_json(j)});
    return out;
}

RunOutput run_bound_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto c = make_constellation(cfg.modulation);
    const auto pts = sweep_points(cfg, "bound-sweep", false);

    std::vector<std::pair<const Point*, int>> feasible;
    for (const auto& p : pts) {
        const int nfft = bound_nfft(cfg, cfg.nsc - p.ne);
        if (nfft > 0) feasible.emplace_back(&p, nfft);
    }
    if (feasible.empty()) throw ConfigError("bound-sweep: empty feasible grid (no ndata divides nfft)");

    const auto w = pts.front().window;
    const double k_db = cfg.k_db ? *cfg.k_db : calibrate_bound_gap(c, cfg.nsc, w, search_options(cfg), cfg.shift);

    CsvTable table({"ne", "L", "nfft", "bound_u_db", "bound_gu_db", "qam_approx_db", "corrected_db"});
    for (const auto& [p, nfft] : feasible) {
        const auto wf = WaveformConfig::with_extension(cfg.nsc, p->ne, nfft, 0, p->shift);
        const double u = papr_upper_u(c, wf, p->window).value_db;
        const double gu = papr_upper_gu(c, wf, p->window).value_db;
        const std::string qam = c.is_qam() ? s(papr_upper_qam_approx(c, wf, p->window).value_db) : std::string();
        table.add_row({s(p->ne), s(p->shift), s(nfft), s(u), s(gu), qam, s(corrected_bound(u, k_db, p->ne, cfg.nsc))});
    }
    ordered_json j;
    j["metadata"] = run_metadata("bound-sweep", cfg);
    j["k_db"] = k_db;
    j["k_db_source"] = cfg.k_db ? "config" : "calibrated";
    j["rows"] = table.rows();
    RunOutput out;
    out.files.push_back({cfg.stem + ".csv", table.str()});
    out.files.push_back({cfg.stem + ".json", dump_json(j)});
    return out;
}

RunOutput run_se_opt(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto c = make_constellation(cfg.modulation);
    const bool capacity = cfg.optimizer.method == SearchMethod::Capacity;
    if (cfg.sweep.axis == SweepAxis::Ne || cfg.sweep.axis == SweepAxis::Shift) {
        throw ConfigError("se-opt: use optimizer.ne_grid for the ne grid; sweep axis must be ripple or snr");
    }
    if (!capacity && cfg.sweep.axis == SweepAxis::Snr) throw ConfigError("se-opt: snr axis needs method capacity");

    std::vector<int> grid = cfg.optimizer.ne_grid;
    if (grid.empty()) {
        const int step = cfg.optimizer.method == SearchMethod::MonteCarloCcdf ? 4 : 1;
        for (int ne = 0; ne <= static_cast<int>(0.6 * cfg.nsc); ne += step) grid.push_back(ne);
    }
    std::vector<WindowSpec> windows;
    if (cfg.sweep.axis == SweepAxis::Ripple) {
        for (double r : cfg.sweep.values) windows.push_back(cfg.window.with_ripple(r));
    } else {
        windows.push_back(cfg.window);
    }
    const auto snrs = capacity ? snr_list(cfg) : std::vector<double>{std::nan("")};

    CsvTable curves({"ripple_db", "snr_db", "ne", "objective"});
    CsvTable optima({"ripple_db", "snr_db", "ne_opt", "ne_opt_fraction", "objective_at_opt", "method", "k_db"});
    ordered_json results = ordered_json::array();

    std::vector<CVec> responses;
    if (capacity) responses = draw_channel_responses(cfg.channel.build(), cfg.nsc, capacity_options(cfg));
    for (const auto& spec : windows) {
        const auto w = spec.build(cfg.nsc);
        const double ripple = ripple_db(w);
        for (double snr : snrs) {
            const auto r = capacity ? search_ne_capa(responses, w, snr, grid, cfg.threads)
                                    : search_ne_papr(c, cfg.nsc, w, search_options(cfg), cfg.shift, grid);
            ordered_json curve = ordered_json::array();
            for (const auto& [ne, v] : r.curve) {
                curves.add_row({s(ripple), capacity ? s(snr) : "", s(ne), s(v)});
                curve.push_back({ne, v});
            }
            const bool has_k = r.method == SearchMethod::CorrectedBound;
            optima.add_row({s(ripple), capacity ? s(snr) : "", s(r.ne_opt), s(static_cast<double>(r.ne_opt) / cfg.nsc),
                            s(r.objective_at_opt), to_string(r.method), has_k ? s(r.k_db) : ""});
            ordered_json item;
            item["ripple_db"] = ripple;
            if (capacity) item["snr_db"] = snr;
            item["method"] = to_string(r.method);
            if (r.method == SearchMethod::MonteCarloCcdf) item["level"] = r.level;
            if (has_k) item["k_db"] = r.k_db;
            item["ne_opt"] = r.ne_opt;
            item["objective_at_opt"] = r.objective_at_opt;
            item["curve"] = curve;
            results.push_back(item);
        }
    }
    ordered_json j;
    j["metadata"] = run_metadata("se-opt", cfg);
    j["results"] = results;
    RunOutput out;
    out.files.push_back({cfg.stem + ".csv", optima.str()});
    out.files.push_back({cfg.stem + "_curves.csv", curves.str()});
    out.files.push_back({cfg.stem + ".json", dump_json(j)});
    return out;
}

RunOutput run_rate_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.sweep.axis == SweepAxis::Shift || cfg.sweep.axis == SweepAxis::Ripple) {
        throw ConfigError("rate-sweep: sweep axis must be ne or snr");
    }
    const auto w = cfg.window.build(cfg.nsc);
    const auto flat = flat_window(static_cast<std::size_t>(cfg.nsc));
    const auto nes = ne_list(cfg);
    const auto snrs = snr_list(cfg);
    const auto responses = draw_channel_responses(cfg.channel.build(), cfg.nsc, capacity_options(cfg));
    const std::size_t n = responses.size();

    struct Stats {
        double rate = 0.0;
        double g0 = 0.0;
        double sinr_db = 0.0;
    };
    auto evaluate = [&](const FdssWindow& win, int ne, double snr_db) {
        const double amp = std::sqrt(from_db10(snr_db));
        const WaveformConfig wf{cfg.nsc - ne, cfg.nsc, cfg.nfft, cfg.ncp, 0};
        std::vector<RateResult> per(n);
        parallel_for(n, cfg.threads, [&](std::size_t t) {
            CVec h(responses[t].size());
            for (std::size_t k = 0; k < h.size(); ++k) h[k] = amp * win.coeffs[k] * responses[t][k];
            per[t] = effective_sinr(combined_gains(h, wf), cfg.nsc);
        });
        KahanSum rate, g0, sinr;
        for (const auto& r : per) {
            rate.add(r.rate_bpcu);
            g0.add(r.g0);
            sinr.add(db10(r.sinr_eff));
        }
        const double dn = static_cast<double>(n);
        return Stats{rate.value() / dn, g0.value() / dn, sinr.value() / dn};
    };

    CsvTable table({"snr_db", "ne", "rate_bpcu", "sinr_eff_db_mean", "g0_mean", "rate_loss_vs_plain"});
    ordered_json per_snr = ordered_json::array();
    for (double snr : snrs) {
        const double plain = evaluate(flat, 0, snr).rate;
        int best_ne = nes.front();
        double best_rate = -1.0;
        for (int ne : nes) {
            const auto st = evaluate(w, ne, snr);
            table.add_row({s(snr), s(ne), s(st.rate), s(st.sinr_db), s(st.g0), s(1.0 - st.rate / plain)});
            if (st.rate > best_rate) {
                best_rate = st.rate;
                best_ne = ne;
            }
        }
        per_snr.push_back({{"snr_db", snr}, {"rate_plain_bpcu", plain}, {"ne_best", best_ne}, {"rate_best_bpcu", best_rate}});
    }
    ordered_json j;
    j["metadata"] = run_metadata("rate-sweep", cfg);
    j["channel_realizations"] = n;
    j["per_snr"] = per_snr;
    RunOutput out;
    out.files.push_back({cfg.stem + ".csv", table.str()});
    out.files.push_back({cfg.stem + ".json", dump_json(j)});
    return out;
}

RunOutput run_ber(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.sweep.axis == SweepAxis::Shift || cfg.sweep.axis == SweepAxis::Ripple) {
        throw ConfigError("ber: sweep axis must be ne or snr");
    }
    const auto c = make_constellation(cfg.modulation);
    const auto w = cfg.window.build(cfg.nsc);
    const auto profile = cfg.channel.build();
    const auto nes = ne_list(cfg);
    const auto snrs = snr_list(cfg);
    for (int ne : nes) cfg.waveform_for(ne, cfg.shift.shift_for(cfg.nsc - ne, ne)).validate();
    const auto taps = quantize_profile(profile, WaveformConfig{cfg.nsc, cfg.nsc, cfg.nfft, cfg.ncp, 0});

    const std::uint64_t blocks = cfg.metric.trials;
    const SeedStream symbols(cfg.metric.seed, kSymbolStream);
    const SeedStream channel(cfg.metric.seed, kChannelStream);
    const SeedStream noise(cfg.metric.seed, kNoiseStream);
    const unsigned bps = c.bits_per_symbol();
    const bool qpsk = cfg.modulation == Modulation::Qpsk;

    CsvTable table({"snr_db", "ne", "L", "bits", "errors", "ber_sim", "ber_theory"});
    ordered_json rows = ordered_json::array();
    for (double snr_db : snrs) {
        const double snr = from_db10(snr_db);
        for (int ne : nes) {
            const auto wf = cfg.waveform_for(ne, cfg.shift.shift_for(cfg.nsc - ne, ne));
            const auto ndata = static_cast<std::size_t>(wf.ndata);
            std::vector<std::uint64_t> errors(blocks, 0);
            std::vector<double> sinr(blocks, 0.0);
            constexpr std::size_t chunk = 64;
            parallel_for((blocks + chunk - 1) / chunk, cfg.threads, [&](std::size_t ci) {
                Modulator mod(wf, w);
                CVec s_time(static_cast<std::size_t>(wf.nfft));
                const std::uint64_t end = std::min<std::uint64_t>(blocks, (ci + 1) * chunk);
                for (std::uint64_t b = ci * chunk; b < end; ++b) {
                    auto rng_sym = symbols.engine(b);
                    auto rng_ch = channel.engine(b);
                    auto rng_noise = noise.engine(b);
                    const auto idx = draw_indices(c, ndata, rng_sym);
                    const auto x = map_indices(c, idx);
                    mod.run(x, s_time);
                    const auto re = realize(taps, wf, rng_ch);
                    const auto y = pass_through(s_time, re, snr, rng_noise);
                    const auto Y = demodulate_fft(y, wf);
                    const auto H = effective_subcarrier_gain(re, w, snr);
                    const auto mrc = mrc_combine(Y, H, wf);
                    const auto xhat = mmse_despread(mrc.combined, mrc.gains, wf);
                    std::uint64_t e = 0;
                    for (std::size_t m = 0; m < ndata; ++m) {
                        e += static_cast<std::uint64_t>(std::popcount(idx[m] ^ hard_decide(c, xhat[m], m)));
                    }
                    errors[b] = e;
                    sinr[b] = effective_sinr(mrc.gains, cfg.nsc).sinr_eff;
                }
            });
            std::uint64_t total = 0;
            for (auto e : errors) total += e;
            const std::uint64_t bits = blocks * ndata * bps;
            const double ber_sim = static_cast<double>(total) / static_cast<double>(bits);
            const double theory = qpsk ? ber_qpsk_theoretical(sinr) : std::nan("");
            table.add_row({s(snr_db), s(ne), s(wf.shift_l), s(bits), s(total), s(ber_sim), qpsk ? s(theory) : ""});
            ordered_json row{{"snr_db", snr_db}, {"ne", ne}, {"bits", bits}, {"errors", total}, {"ber_sim", ber_sim}};
            if (qpsk) row["ber_theory"] = theory;
            rows.push_back(row);
        }
    }
    ordered_json j;
    j["metadata"] = run_metadata("ber", cfg);
    j["blocks"] = blocks;
    j["rows"] = rows;
    RunOutput out;
    out.files.push_back({cfg.stem + ".csv", table.str()});
    out.files.push_back({cfg.stem + ".json", dump_json(j)});
    return out;
}

RunOutput run_window_dump(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.sweep.axis != SweepAxis::None) throw ConfigError("window-dump: sweeps not supported");
    const auto w = cfg.window.build(cfg.nsc);
    CsvTable table({"index", "coefficient"});
    KahanSum energy;
    for (std::size_t k = 0; k < w.coeffs.size(); ++k) {
        table.add_row({s(static_cast<int>(k)), s(w.coeffs[k])});
        energy.add(w.coeffs[k] * w.coeffs[k]);
    }
    ordered_json j;
    j["metadata"] = run_metadata("window-dump", cfg);
    j["family"] = to_string(w.family);
    j["parameter"] = w.parameter;
    j["ripple_db"] = ripple_db(w);
    j["energy"] = energy.value();
    RunOutput out;
    out.files.push_back({cfg.stem + ".csv", table.str()});
    out.files.push_back({cfg.stem + ".json", dump_json(j)});
    return out;
}

}  // namespace fdss::exp
