#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "fdss/experiments.hpp"

namespace fdss::exp {

namespace {

void reject_unknown(const YAML::Node& node, const std::set<std::string>& known, const std::string& where) {
    if (!node.IsMap()) throw ConfigError(where + ": expected a mapping");
    for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!known.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
T get(const YAML::Node& node, const std::string& key, const std::string& where) {
    try {
        return node[key].as<T>();
    } catch (const YAML::Exception&) {
        throw ConfigError(where + "." + key + ": cannot parse value");
    }
}

template <typename T>
void read_opt(const YAML::Node& node, const std::string& key, const std::string& where, T& dst) {
    if (node[key]) dst = get<T>(node, key, where);
}

template <typename T>
void read_opt(const YAML::Node& node, const std::string& key, const std::string& where, std::optional<T>& dst) {
    if (node[key]) dst = get<T>(node, key, where);
}

std::vector<double> read_values(const YAML::Node& node, const std::string& where) {
    if (node.IsSequence()) {
        std::vector<double> v;
        try {
            v = node.as<std::vector<double>>();
        } catch (const YAML::Exception&) {
            throw ConfigError(where + ": expected a list of numbers");
        }
        if (v.empty()) throw ConfigError(where + ": empty list");
        return v;
    }
    if (node["values"]) {
        if (node["start"] || node["stop"]) throw ConfigError(where + ": give either values or start/stop, not both");
        auto v = get<std::vector<double>>(node, "values", where);
        if (v.empty()) throw ConfigError(where + ".values: empty list");
        return v;
    }
    if (!node["start"] || !node["stop"]) throw ConfigError(where + ": needs values or start/stop");
    const double start = get<double>(node, "start", where);
    const double stop = get<double>(node, "stop", where);
    double step = 1.0;
    read_opt(node, "step", where, step);
    if (!(step > 0.0)) throw ConfigError(where + ".step: must be > 0");
    if (stop < start) throw ConfigError(where + ": stop < start");
    std::vector<double> v;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) v.push_back(start + static_cast<double>(i) * step);
    return v;
}

WindowSpec parse_window(const YAML::Node& n) {
    reject_unknown(n, {"family", "beta", "kappa", "ripple_db"}, "window");
    WindowSpec w;
    const auto family = n["family"] ? get<std::string>(n, "family", "window") : std::string("flat");
    if (family == "flat") {
        w.family = WindowFamily::Flat;
    } else if (family == "hann") {
        w.family = WindowFamily::DeformedHann;
    } else if (family == "kaiser") {
        w.family = WindowFamily::Kaiser;
    } else {
        throw ConfigError("window.family: expected flat, hann or kaiser, got '" + family + "'");
    }
    read_opt(n, "beta", "window", w.beta);
    read_opt(n, "kappa", "window", w.kappa);
    read_opt(n, "ripple_db", "window", w.ripple_db);
    return w;
}

ChannelSpec parse_channel(const YAML::Node& n) {
    reject_unknown(n, {"kind", "delay_spread_ns", "scs_khz"}, "channel");
    ChannelSpec c;
    const auto profile = n["kind"] ? get<std::string>(n, "kind", "channel") : std::string("awgn");
    if (profile == "awgn") {
        c.kind = ChannelKind::Awgn;
    } else if (profile == "tdlc" || profile == "tdl-c") {
        c.kind = ChannelKind::TdlC;
    } else {
        throw ConfigError("channel.kind: expected awgn or tdlc, got '" + profile + "'");
    }
    read_opt(n, "delay_spread_ns", "channel", c.delay_spread_ns);
    read_opt(n, "scs_khz", "channel", c.scs_khz);
    return c;
}

ShiftPolicy parse_shift(const YAML::Node& n) {
    if (n.IsScalar()) {
        try {
            return ShiftPolicy::fixed(n.as<long>());
        } catch (const YAML::Exception&) {
            throw ConfigError("waveform.shift: expected an integer or a mapping");
        }
    }
    reject_unknown(n, {"policy", "value", "lambda"}, "waveform.shift");
    const auto policy = n["policy"] ? get<std::string>(n, "policy", "waveform.shift") : std::string("fixed");
    long value = 0;
    long lambda = 0;
    read_opt(n, "value", "waveform.shift", value);
    read_opt(n, "lambda", "waveform.shift", lambda);
    if (policy == "fixed") return ShiftPolicy::fixed(value);
    if (policy == "symmetric") return ShiftPolicy::symmetric();
    if (policy == "pi2bpsk") return ShiftPolicy::pi2bpsk(lambda);
    if (policy == "qam") return ShiftPolicy::qam(lambda);
    throw ConfigError("waveform.shift.policy: expected fixed, symmetric, pi2bpsk or qam, got '" + policy + "'");
}

SearchMethod parse_method(const std::string& s) {
    if (s == "bound_u") return SearchMethod::BoundU;
    if (s == "qam_approx") return SearchMethod::QamApprox;
    if (s == "corrected_bound") return SearchMethod::CorrectedBound;
    if (s == "monte_carlo") return SearchMethod::MonteCarloCcdf;
    if (s == "capacity") return SearchMethod::Capacity;
    throw ConfigError("optimizer.method: unknown method '" + s + "'");
}

LocalMinGuard parse_guard(const std::string& s) {
    if (s == "none") return LocalMinGuard::None;
    if (s == "restrict_range") return LocalMinGuard::RestrictRange;
    if (s == "corrected_bound") return LocalMinGuard::CorrectedBound;
    throw ConfigError("optimizer.guard: expected none, restrict_range or corrected_bound, got '" + s + "'");
}

}  // namespace

FdssWindow WindowSpec::build(int nsc) const {
    const auto n = static_cast<std::size_t>(nsc);
    switch (family) {
        case WindowFamily::Flat: return flat_window(n);
        case WindowFamily::DeformedHann:
            return deformed_hann(n, beta ? *beta : hann_beta_for_ripple(*ripple_db));
        case WindowFamily::Kaiser:
            return kaiser(n, kappa ? *kappa : kaiser_kappa_for_ripple(n, *ripple_db));
    }
    throw ConfigError("window: unknown family");
}

WindowSpec WindowSpec::with_ripple(double ripple) const {
    WindowSpec w;
    w.family = family;
    w.ripple_db = ripple;
    return w;
}

ChannelProfile ChannelSpec::build() const {
    if (kind == ChannelKind::Awgn) return ChannelProfile::awgn();
    return ChannelProfile::tdl_c(delay_spread_ns * 1e-9, scs_khz * 1e3);
}

WaveformConfig ExperimentConfig::waveform_for(int ne_value, long shift_l) const {
    return WaveformConfig::with_extension(nsc, ne_value, nfft, ncp, shift_l);
}

void ExperimentConfig::validate() const {
    if (nsc < 1) throw ConfigError("waveform.nsc: must be >= 1");
    if (ne < 0 || ne > nsc - 1) throw ConfigError("waveform.ne: must lie in [0, nsc-1]");
    if (nfft < nsc) throw ConfigError("waveform.nfft: must be >= nsc");
    if (ncp < 0) throw ConfigError("waveform.ncp: must be >= 0");
    if (metric.trials == 0) throw ConfigError("metric.trials: must be >= 1");
    if (metric.levels.empty()) throw ConfigError("metric.levels: empty list");
    for (double p : metric.levels) {
        if (!(p > 0.0 && p < 1.0)) throw ConfigError("metric.levels: each level must lie in (0, 1)");
    }
    if (!(metric.threshold_step_db > 0.0)) throw ConfigError("metric.threshold_step_db: must be > 0");
    if (snr_db.empty()) throw ConfigError("snr_db: empty list");
    if (bound_oversampling && *bound_oversampling < 4) throw ConfigError("bound.oversampling: must be >= 4");
    if (optimizer.refine_radius < 0) throw ConfigError("optimizer.refine_radius: must be >= 0");
    if (!(optimizer.ccdf_level > 0.0 && optimizer.ccdf_level < 1.0)) {
        throw ConfigError("optimizer.ccdf_level: must lie in (0, 1)");
    }
    if (stem.empty() || stem.find('/') != std::string::npos) throw ConfigError("output.stem: must be a plain file stem");

    switch (window.family) {
        case WindowFamily::Flat:
            if (window.beta || window.kappa || window.ripple_db) {
                throw ConfigError("window: flat takes no shaping parameter");
            }
            break;
        case WindowFamily::DeformedHann:
            if (window.kappa) throw ConfigError("window: kappa is a kaiser parameter");
            if (window.beta.has_value() == window.ripple_db.has_value() && sweep.axis != SweepAxis::Ripple) {
                throw ConfigError("window: hann needs exactly one of beta or ripple_db");
            }
            break;
        case WindowFamily::Kaiser:
            if (window.beta) throw ConfigError("window: beta is a hann parameter");
            if (window.kappa.has_value() == window.ripple_db.has_value() && sweep.axis != SweepAxis::Ripple) {
                throw ConfigError("window: kaiser needs exactly one of kappa or ripple_db");
            }
            break;
    }
    if (window.ripple_db && !(*window.ripple_db < 0.0)) throw ConfigError("window.ripple_db: must be < 0");

    if (channel.kind == ChannelKind::TdlC) {
        if (!(channel.delay_spread_ns >= 0.0)) throw ConfigError("channel.delay_spread_ns: must be >= 0");
        if (!(channel.scs_khz > 0.0)) throw ConfigError("channel.scs_khz: must be > 0");
        const auto cfg0 = WaveformConfig{nsc, nsc, nfft, ncp, 0};
        quantize_profile(channel.build(), cfg0);
    }

    for (double v : sweep.values) {
        switch (sweep.axis) {
            case SweepAxis::Ne:
                if (v != std::floor(v) || v < 0 || v > nsc - 1) {
                    throw ConfigError("sweep.values: ne must be an integer in [0, nsc-1]");
                }
                break;
            case SweepAxis::Shift:
                if (v != std::floor(v)) throw ConfigError("sweep.values: L must be an integer");
                break;
            case SweepAxis::Ripple:
                if (window.family == WindowFamily::Flat) throw ConfigError("sweep: ripple axis needs a hann or kaiser window");
                if (!(v < 0.0)) throw ConfigError("sweep.values: ripple must be < 0 dB");
                break;
            default: break;
        }
    }
    for (int v : optimizer.ne_grid) {
        if (v < 0 || v > nsc - 1) throw ConfigError("optimizer.ne_grid: values must lie in [0, nsc-1]");
    }
    if (sweep.axis != SweepAxis::None && sweep.values.empty()) throw ConfigError("sweep.values: empty list");

    // Build the base window once so family-level errors surface before compute.
    if (sweep.axis != SweepAxis::Ripple) window.build(nsc);
    else window.with_ripple(sweep.values.front()).build(nsc);
    (void)make_constellation(modulation);
}

ExperimentConfig parse_config(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("config: YAML parse error: ") + e.what());
    }
    if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    reject_unknown(root, {"description", "waveform", "constellation", "window", "channel", "metric", "sweep", "snr_db",
                          "bound", "optimizer", "output", "threads"},
                   "config");
    ExperimentConfig cfg;

    if (const auto w = root["waveform"]) {
        reject_unknown(w, {"nsc", "ne", "nfft", "ncp", "shift"}, "waveform");
        read_opt(w, "nsc", "waveform", cfg.nsc);
        read_opt(w, "ne", "waveform", cfg.ne);
        read_opt(w, "nfft", "waveform", cfg.nfft);
        read_opt(w, "ncp", "waveform", cfg.ncp);
        if (w["shift"]) cfg.shift = parse_shift(w["shift"]);
    }
    if (root["constellation"]) {
        try {
            cfg.modulation = parse_modulation(get<std::string>(root, "constellation", "config"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("constellation: ") + e.what());
        }
    }
    if (root["window"]) cfg.window = parse_window(root["window"]);
    if (root["channel"]) cfg.channel = parse_channel(root["channel"]);
    if (const auto m = root["metric"]) {
        reject_unknown(m, {"levels", "trials", "seed", "papr", "threshold_step_db"}, "metric");
        read_opt(m, "levels", "metric", cfg.metric.levels);
        read_opt(m, "trials", "metric", cfg.metric.trials);
        read_opt(m, "seed", "metric", cfg.metric.seed);
        read_opt(m, "threshold_step_db", "metric", cfg.metric.threshold_step_db);
        if (m["papr"]) {
            const auto kind = get<std::string>(m, "papr", "metric");
            if (kind == "statistical") cfg.metric.papr = PaprKind::Statistical;
            else if (kind == "instantaneous") cfg.metric.papr = PaprKind::Instantaneous;
            else if (kind == "cm") cfg.metric.papr = PaprKind::CubicMetric;
            else throw ConfigError("metric.papr: expected statistical, instantaneous or cm, got '" + kind + "'");
        }
    }
    if (const auto s = root["sweep"]) {
        reject_unknown(s, {"axis", "values", "start", "stop", "step"}, "sweep");
        const auto axis = get<std::string>(s, "axis", "sweep");
        if (axis == "ne") cfg.sweep.axis = SweepAxis::Ne;
        else if (axis == "L") cfg.sweep.axis = SweepAxis::Shift;
        else if (axis == "ripple") cfg.sweep.axis = SweepAxis::Ripple;
        else if (axis == "snr") cfg.sweep.axis = SweepAxis::Snr;
        else throw ConfigError("sweep.axis: expected ne, L, ripple or snr, got '" + axis + "'");
        cfg.sweep.values = read_values(s, "sweep");
    }
    if (root["snr_db"]) {
        const auto n = root["snr_db"];
        cfg.snr_db = n.IsScalar() ? std::vector<double>{get<double>(root, "snr_db", "config")}
                                  : get<std::vector<double>>(root, "snr_db", "config");
    }
    if (const auto b = root["bound"]) {
        reject_unknown(b, {"oversampling", "k_db"}, "bound");
        read_opt(b, "oversampling", "bound", cfg.bound_oversampling);
        read_opt(b, "k_db", "bound", cfg.k_db);
    }
    if (const auto o = root["optimizer"]) {
        reject_unknown(o, {"method", "guard", "refine_radius", "ccdf_level", "ne_grid"}, "optimizer");
        if (o["method"]) cfg.optimizer.method = parse_method(get<std::string>(o, "method", "optimizer"));
        if (o["guard"]) cfg.optimizer.guard = parse_guard(get<std::string>(o, "guard", "optimizer"));
        read_opt(o, "refine_radius", "optimizer", cfg.optimizer.refine_radius);
        read_opt(o, "ccdf_level", "optimizer", cfg.optimizer.ccdf_level);
        if (o["ne_grid"]) {
            for (double v : read_values(o["ne_grid"], "optimizer.ne_grid")) {
                if (v != std::floor(v)) throw ConfigError("optimizer.ne_grid: values must be integers");
                cfg.optimizer.ne_grid.push_back(static_cast<int>(v));
            }
        }
    }
    if (const auto out = root["output"]) {
        reject_unknown(out, {"dir", "stem"}, "output");
        if (out["dir"]) cfg.out_dir = get<std::string>(out, "dir", "output");
        read_opt(out, "stem", "output", cfg.stem);
    }
    read_opt(root, "threads", "config", cfg.threads);
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void apply_overrides(ExperimentConfig& cfg, const CliOverrides& o) {
    if (o.seed) cfg.metric.seed = *o.seed;
    if (o.trials) cfg.metric.trials = *o.trials;
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.threads) cfg.threads = *o.threads;
}

}  // namespace fdss::exp
