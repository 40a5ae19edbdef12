#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "fdss/channel.hpp"
#include "fdss/fft.hpp"
#include "fdss/random.hpp"

using namespace fdss;

TEST_CASE("awgn profile is a unit tap") {
    const auto cfg = WaveformConfig::with_extension(96, 10, 2048, 0, 0);
    std::mt19937_64 rng(1);
    const auto re = realize(ChannelProfile::awgn(), cfg, rng);
    REQUIRE(re.taps.size() == 1);
    CHECK(re.delays[0] == 0);
    REQUIRE(re.freq_response.size() == 96);
    for (const auto& h : re.freq_response) CHECK(h == cplx(1.0, 0.0));

    // Quantized form stays deterministic and draws nothing.
    const auto taps = quantize_profile(ChannelProfile::awgn(), cfg);
    REQUIRE(taps.size() == 1);
    CHECK(taps[0].fixed);
    const auto before = rng;
    CHECK(realize(taps, cfg, rng).freq_response == re.freq_response);
    CHECK(rng == before);
}

TEST_CASE("tdl-c profile table and quantization") {
    const auto p = ChannelProfile::tdl_c(300e-9, 15e3);
    CHECK(p.taps.size() == 24);
    double total = 0.0;
    double max_delay = 0.0;
    for (const auto& t : p.taps) {
        total += t.mean_power;
        max_delay = std::max(max_delay, t.delay_s);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(max_delay == doctest::Approx(8.6523 * 300e-9).epsilon(1e-12));

    const auto cfg = WaveformConfig::with_extension(96, 0, 2048, 144, 0);
    const auto taps = quantize_profile(p, cfg);
    double qtotal = 0.0;
    for (std::size_t i = 0; i < taps.size(); ++i) {
        qtotal += taps[i].mean_power;
        if (i > 0) CHECK(taps[i].delay > taps[i - 1].delay);
    }
    CHECK(qtotal == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(taps.size() < 24);  // several taps share a sample at 30.72 MHz
    CHECK(taps.back().delay == static_cast<int>(std::lround(8.6523 * 300e-9 * 2048 * 15e3)));

    // Delay beyond the cyclic prefix.
    CHECK_THROWS_AS(quantize_profile(p, WaveformConfig::with_extension(96, 0, 2048, 40, 0)), ConfigError);
    CHECK_THROWS_AS(ChannelProfile::tdl_c(-1e-9, 15e3), ConfigError);
    CHECK_THROWS_AS(ChannelProfile::tdl_c(300e-9, 0.0), ConfigError);
}

TEST_CASE("tdl-c draws are normalized and frequency selective") {
    const auto p = ChannelProfile::tdl_c(300e-9, 15e3);
    const auto cfg = WaveformConfig::with_extension(96, 0, 2048, 144, 0);
    const auto taps = quantize_profile(p, cfg);
    const SeedStream stream(5, kChannelStream);
    double energy = 0.0;
    const int draws = 100000;
    for (int t = 0; t < draws; ++t) {
        auto rng = stream.engine(static_cast<std::uint64_t>(t));
        const auto re = realize(taps, cfg, rng);
        for (const auto& h : re.taps) energy += std::norm(h);
    }
    CHECK(energy / draws == doctest::Approx(1.0).epsilon(0.01));

    auto rng = stream.engine(0);
    const auto re = realize(taps, cfg, rng);
    double lo = 1e9, hi = 0.0;
    for (const auto& h : re.freq_response) {
        lo = std::min(lo, std::abs(h));
        hi = std::max(hi, std::abs(h));
    }
    CHECK(hi / lo > 1.5);

    // Same stream index gives the same block.
    auto again = stream.engine(0);
    CHECK(realize(taps, cfg, again).freq_response == re.freq_response);
}

TEST_CASE("frequency response inverts to the sampled taps") {
    const auto p = ChannelProfile::tdl_c(300e-9, 15e3);
    const auto cfg = WaveformConfig::with_extension(96, 0, 512, 40, 0);
    std::mt19937_64 rng(9);
    const auto re = realize(p, cfg, rng);
    const CVec full = frequency_response(re.delays, re.taps, 512, 512);
    for (std::size_t k = 0; k < 96; ++k) CHECK(std::abs(full[k] - re.freq_response[k]) < 1e-12);
    CVec impulse(512);
    fft::inverse(full, impulse);
    for (auto& v : impulse) v /= 512.0;
    CVec expected(512, 0.0);
    for (std::size_t i = 0; i < re.taps.size(); ++i) expected[static_cast<std::size_t>(re.delays[i])] += re.taps[i];
    for (std::size_t n = 0; n < 512; ++n) CHECK(std::abs(impulse[n] - expected[n]) < 1e-9);
}

TEST_CASE("effective subcarrier gain") {
    const auto cfg = WaveformConfig::with_extension(24, 4, 256, 32, 0);
    std::mt19937_64 rng(2);
    const auto awgn = realize(ChannelProfile::awgn(), cfg, rng);
    for (const auto& h : effective_subcarrier_gain(awgn, flat_window(24), 4.0)) CHECK(std::abs(h - 2.0) < 1e-15);
    for (const auto& h : effective_subcarrier_gain(awgn, flat_window(24), 0.0)) CHECK(h == cplx(0.0, 0.0));

    const auto re = realize(ChannelProfile::tdl_c(300e-9, 15e3), cfg, rng);
    const auto w = kaiser(24, 2.0);
    const auto H = effective_subcarrier_gain(re, w, 3.0);
    for (std::size_t k = 0; k < 24; ++k) CHECK(std::abs(H[k] - std::sqrt(3.0) * w.coeffs[k] * re.freq_response[k]) < 1e-14);
    CHECK_THROWS_AS(effective_subcarrier_gain(re, flat_window(23), 1.0), ConfigError);
}

TEST_CASE("pass-through is a circular convolution plus unit noise") {
    const auto cfg = WaveformConfig::with_extension(24, 0, 128, 32, 0);
    std::mt19937_64 rng(4);
    const auto re = realize(ChannelProfile::tdl_c(300e-9, 15e3), cfg, rng);
    CVec s(128);
    std::normal_distribution<double> g;
    for (auto& v : s) v = cplx(g(rng), g(rng));

    // Noise-free part: difference of two runs with the same noise seed and scaled inputs.
    std::mt19937_64 n1(7), n2(7);
    const auto y1 = pass_through(s, re, 2.0, n1);
    CVec zero(128, 0.0);
    const auto z = pass_through(zero, re, 2.0, n2);
    for (std::size_t n = 0; n < 128; ++n) {
        cplx acc(0.0, 0.0);
        for (std::size_t p = 0; p < re.taps.size(); ++p) {
            acc += std::sqrt(2.0) * re.taps[p] * s[(n + 128 - static_cast<std::size_t>(re.delays[p])) % 128];
        }
        CHECK(std::abs(y1[n] - z[n] - acc) < 1e-12);
    }
    double var = 0.0;
    std::mt19937_64 n3(8);
    CVec big(1 << 16, 0.0);
    for (const auto& v : pass_through(big, re, 1.0, n3)) var += std::norm(v);
    CHECK(var / (1 << 16) == doctest::Approx(1.0).epsilon(0.02));
}
