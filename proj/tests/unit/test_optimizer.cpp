#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fdss/metrics.hpp"
#include "fdss/optimizer.hpp"

using namespace fdss;

namespace {

std::vector<int> range(int lo, int hi, int step = 1) {
    std::vector<int> g;
    for (int n = lo; n <= hi; n += step) g.push_back(n);
    return g;
}

FdssWindow hann_at(int nsc, double ripple) { return deformed_hann(nsc, std::pow(10.0, ripple / 20.0)); }

PaprSearchOptions monte_carlo(std::uint64_t trials) {
    PaprSearchOptions o;
    o.method = SearchMethod::MonteCarloCcdf;
    o.nfft = 512;
    o.trials = trials;
    return o;
}

PaprSearchOptions bound_options() {
    PaprSearchOptions o;
    o.bound_oversampling = 16;
    o.calibration_trials = 20000;
    return o;
}

}  // namespace

TEST_CASE("shift policies") {
    CHECK(ShiftPolicy::fixed(3).shift_for(86, 10) == 3);
    CHECK(ShiftPolicy::qam().shift_for(86, 10) == optimal_shift_qam(86, 10, 0));
    CHECK(ShiftPolicy::symmetric().shift_for(86, 10) == 86 - 5);
    CHECK(ShiftPolicy::pi2bpsk(0).shift_for(86, 10) == ShiftPolicy::pi2bpsk(2).shift_for(86, 10));
    CHECK(ShiftPolicy::qam(1).describe() != ShiftPolicy::qam(0).describe());
    CHECK(to_string(SearchMethod::MonteCarloCcdf) == "monte_carlo");
}

TEST_CASE("papr samples use per-trial streams") {
    const auto c = make_constellation(Modulation::Qpsk);
    const auto cfg = WaveformConfig::with_extension(24, 4, 128, 0, 0);
    const auto w = kaiser(24, 2.0);
    const auto a = papr_samples(c, cfg, w, 3000, 11, 1);
    const auto b = papr_samples(c, cfg, w, 1500, 11, 4);
    for (std::size_t t = 0; t < b.size(); ++t) CHECK(a[t] == b[t]);
    const auto cm = papr_samples(c, cfg, w, 10, 11, 1, [](std::span<const cplx> s, const WaveformConfig&) {
        return cubic_metric(s);
    });
    CHECK(cm.size() == 10);
    CHECK(cm[0] != a[0]);
    CHECK(monte_carlo_papr(c, cfg, w, 1e-2, 3000, 11, 1) == monte_carlo_papr(c, cfg, w, 1e-2, 3000, 11, 3));
    CHECK_THROWS_AS(papr_samples(c, cfg, w, 0, 11), ConfigError);
}

TEST_CASE("simulated qpsk optimum stays near 10 to 40 percent for hann windows") {
    const auto c = make_constellation(Modulation::Qpsk);
    auto o = monte_carlo(10000);
    o.refine_radius = 2;
    int previous = -1;
    for (double ripple : {-2.0, -8.0, -14.0, -20.0}) {
        const auto r = search_ne_papr(c, 96, hann_at(96, ripple), o, ShiftPolicy::fixed(0), range(0, 56, 4));
        INFO("ripple " << ripple << " ne_opt " << r.ne_opt);
        CHECK(r.ne_opt >= 10);
        CHECK(r.ne_opt <= 43);  // heaviest shaping lands just above 40 %
        CHECK(r.method == SearchMethod::MonteCarloCcdf);
        CHECK(r.curve.size() > 15);  // refinement added neighbours
        CHECK(r.ne_opt > previous);  // more shaping, larger extension
        previous = r.ne_opt;
    }
}

TEST_CASE("simulated pi/2-bpsk optimum is small under moderate shaping") {
    const auto c = make_constellation(Modulation::Pi2Bpsk);
    const auto o = monte_carlo(10000);
    for (double ripple : {-2.0, -5.0, -8.0}) {
        const auto r = search_ne_papr(c, 96, hann_at(96, ripple), o, ShiftPolicy::symmetric(), range(0, 24));
        INFO("ripple " << ripple << " ne_opt " << r.ne_opt);
        CHECK(r.ne_opt >= 2);
        CHECK(r.ne_opt <= 10);
    }
}

TEST_CASE("bound optimum scales with bandwidth") {
    const auto c = make_constellation(Modulation::Qpsk);
    auto o = bound_options();
    o.nfft = 4096;
    for (double ripple : {-11.0, -14.0}) {
        const auto small = search_ne_papr(c, 96, hann_at(96, ripple), o, ShiftPolicy::fixed(0), range(0, 57));
        const auto large = search_ne_papr(c, 600, hann_at(600, ripple), o, ShiftPolicy::fixed(0), range(0, 360));
        INFO("ripple " << ripple << ": " << small.ne_opt << "/96 vs " << large.ne_opt << "/600");
        CHECK(std::abs(small.ne_opt / 96.0 - large.ne_opt / 600.0) < 0.03);
    }
}

TEST_CASE("optimum is largely independent of the qam order") {
    const auto qpsk = make_constellation(Modulation::Qpsk);
    const auto qam16 = make_constellation(Modulation::Qam16);
    for (double ripple : {-2.0, -8.0, -14.0, -20.0}) {
        const auto w = hann_at(96, ripple);
        auto o = bound_options();
        const auto a = search_ne_papr(qpsk, 96, w, o, ShiftPolicy::fixed(0), range(0, 57));
        o.method = SearchMethod::QamApprox;
        const auto b = search_ne_papr(qam16, 96, w, o, ShiftPolicy::fixed(0), range(0, 57));
        INFO("ripple " << ripple << ": " << a.ne_opt << " vs " << b.ne_opt);
        CHECK(std::abs(a.ne_opt - b.ne_opt) <= 2);
    }
}

TEST_CASE("weak-shaping guard") {
    const auto c = make_constellation(Modulation::Qpsk);
    const auto w = hann_at(96, -2.0);
    auto o = bound_options();
    o.guard = LocalMinGuard::None;
    const auto raw = search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), range(0, 57));
    CHECK(raw.method == SearchMethod::BoundU);
    CHECK(raw.ne_opt > 0.4 * 96);  // the spurious far minimum

    o.guard = LocalMinGuard::RestrictRange;
    const auto restricted = search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), range(0, 57));
    CHECK(restricted.ne_opt <= 0.3 * 96);
    for (const auto& [ne, v] : restricted.curve) CHECK(ne <= 0.3 * 96);

    o.guard = LocalMinGuard::CorrectedBound;
    o.k_db = 4.0;
    const auto corrected = search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), range(0, 57));
    CHECK(corrected.method == SearchMethod::CorrectedBound);
    CHECK(corrected.k_db == 4.0);
    for (std::size_t i = 0; i < corrected.curve.size(); ++i) {
        const auto [ne, v] = corrected.curve[i];
        CHECK(v == doctest::Approx(corrected_bound(raw.curve[i].second, 4.0, ne, 96)).epsilon(1e-14));
    }

    // Strong shaping leaves the bound untouched.
    const auto strong = search_ne_papr(c, 96, hann_at(96, -14.0), o, ShiftPolicy::fixed(0), range(0, 57));
    CHECK(strong.method == SearchMethod::BoundU);
}

TEST_CASE("papr search grid errors") {
    const auto c = make_constellation(Modulation::Qpsk);
    const auto w = kaiser(96, 2.0);
    PaprSearchOptions o;
    o.k_db = 0.0;
    CHECK_THROWS_AS(search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), {}), ConfigError);
    CHECK_THROWS_AS(search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), {96}), ConfigError);
    CHECK_THROWS_AS(search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), {-1}), ConfigError);
    // Nfft 2048 without oversampling: ndata 95, 93, 91 never divide it.
    CHECK_THROWS_AS(search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), {1, 3, 5}), ConfigError);
    const auto single = search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), {1, 3, 32});
    CHECK(single.ne_opt == 32);
    CHECK(single.curve.size() == 1);
    o.method = SearchMethod::Capacity;
    CHECK_THROWS_AS(search_ne_papr(c, 96, w, o, ShiftPolicy::fixed(0), {0}), ConfigError);
}

TEST_CASE("capacity optimum") {
    CapacityOptions co;
    co.trials = 2000;
    const auto responses = draw_channel_responses(ChannelProfile::tdl_c(300e-9, 15e3), 96, co);
    CHECK(responses.size() == 2000);
    const auto w = hann_at(96, -11.0);
    const auto grid = range(0, 57);
    int previous = 96;
    std::vector<int> optima;
    for (double snr : {-5.0, 0.0, 5.0, 15.0, 30.0}) {
        const auto r = search_ne_capa(responses, w, snr, grid);
        CHECK(r.method == SearchMethod::Capacity);
        CHECK(r.snr_db == snr);
        CHECK(r.ne_opt <= previous);
        optima.push_back(r.ne_opt);
        previous = r.ne_opt;
    }
    CHECK(optima[0] > optima[1]);
    CHECK(optima[1] > optima[2]);
    CHECK(optima.back() == 0);

    for (double snr : {0.0, 5.0, 15.0}) CHECK(search_ne_capa(responses, flat_window(96), snr, grid).ne_opt == 0);

    // Overload drawing its own responses matches the shared-response path.
    const auto direct = search_ne_capa(96, w, ChannelProfile::tdl_c(300e-9, 15e3), 5.0, co, grid);
    CHECK(direct.ne_opt == optima[2]);
    CHECK(direct.objective_at_opt == search_ne_capa(responses, w, 5.0, grid).objective_at_opt);

    CHECK_THROWS_AS(search_ne_capa(responses, w, 5.0, {}), ConfigError);
    co.trials = 0;
    CHECK_THROWS_AS(draw_channel_responses(ChannelProfile::tdl_c(300e-9, 15e3), 96, co), ConfigError);
}

TEST_CASE("mean rate on awgn") {
    CapacityOptions co;
    const auto responses = draw_channel_responses(ChannelProfile::awgn(), 48, co);
    CHECK(responses.size() == 1);
    CHECK(mean_rate(responses, flat_window(48), 0, 10.0) == doctest::Approx(std::log2(11.0)).epsilon(1e-12));
    CHECK(mean_rate(responses, flat_window(48), 12, 10.0) < std::log2(11.0));
    CHECK_THROWS_AS(mean_rate({}, flat_window(48), 0, 10.0), ConfigError);
}

TEST_CASE("tradeoff report with a flat window at high snr") {
    TradeoffOptions o;
    o.papr = bound_options();
    o.capacity.trials = 500;
    o.ne_grid = range(0, 40);
    const auto c = make_constellation(Modulation::Qpsk);
    const auto r = tradeoff_report(c, 96, flat_window(96), ChannelProfile::tdl_c(300e-9, 15e3), 30.0, o);
    CHECK(r.ne_capa == 0);
    CHECK(r.rate_no_se == r.rate_plain);
    CHECK(r.rate_at_ne_capa == r.rate_plain);
    CHECK(r.loss_no_se() == 0.0);
    CHECK(r.loss_at_ne_capa() == 0.0);
    // Extension still lowers PAPR without shaping, at a rate cost.
    CHECK(r.ne_papr > 0);
    CHECK(r.loss_at_ne_papr() > 0.0);
    CHECK(r.capa_not_above_papr);
    CHECK_FALSE(r.papr_at_ne_papr_db.has_value());
}
