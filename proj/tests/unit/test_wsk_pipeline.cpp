#include "ebc/wsk_pipeline.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <sstream>

namespace {

ebc::DenseTrace tone(double f, double rate, double amp = 1.0) {
    ebc::DenseTrace t{rate, {}, 0.0};
    const auto n = static_cast<std::size_t>(rate);
    for (std::size_t k = 0; k < n; ++k) {
        t.values.push_back(amp * std::sin(2 * std::numbers::pi * f * static_cast<double>(k) / rate));
    }
    return t;
}

double central_rms(const std::vector<double>& v) {
    const std::size_t a = v.size() / 10;
    const std::size_t b = v.size() - a;
    double acc = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        acc += v[i] * v[i];
    }
    return std::sqrt(acc / static_cast<double>(b - a));
}

// Prewarped analog Butterworth magnitude.
double butterworth_mag(double f, double fc, double rate, int order) {
    const double r = std::tan(std::numbers::pi * f / rate) / std::tan(std::numbers::pi * fc / rate);
    return 1.0 / std::sqrt(1.0 + std::pow(r, 2 * order));
}

} // namespace

TEST_CASE("config validation") {
    CHECK(ebc::WskConfig::make(2000.0, 5).symbol_rate() == 10000.0);
    CHECK_THROWS_AS(ebc::WskConfig::make(0.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(ebc::WskConfig::make(2000.0, 0), std::invalid_argument);
}

TEST_CASE("butterworth magnitude response") {
    const double rate = 16000.0;
    for (double fc : {200.0, 1000.0, 2000.0}) {
        const auto sos = ebc::butterworth_lowpass(8, fc, rate);
        CHECK(sos.size() == 4);
        CHECK(ebc::cascade_gain(sos, 0.0, rate) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ebc::cascade_gain(sos, fc, rate) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
        for (double f : {0.3 * fc, 0.9 * fc, 1.5 * fc, 3.0 * fc}) {
            if (f < rate / 2) {
                CHECK(ebc::cascade_gain(sos, f, rate) == doctest::Approx(butterworth_mag(f, fc, rate, 8)).epsilon(1e-7));
            }
        }
    }
    CHECK_THROWS(ebc::butterworth_lowpass(7, 1000.0, rate));
    CHECK_THROWS(ebc::butterworth_lowpass(8, 8000.0, rate));
}

TEST_CASE("antialias: DC passes unchanged") {
    ebc::DenseTrace dc{16000.0, std::vector<double>(16000, 1.0), 0.0};
    const auto y = ebc::antialias(dc, 2000.0);
    REQUIRE(y.values.size() == 16000);
    for (double v : y.values) {
        CHECK(std::abs(v - 1.0) < 1e-6);
    }
}

TEST_CASE("antialias: tone at the cutoff is halved") {
    const auto y = ebc::antialias(tone(1000.0, 16000.0), 2000.0);
    CHECK(central_rms(y.values) / central_rms(tone(1000.0, 16000.0).values) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("antialias: tone two octaves up is suppressed by at least 90 dB") {
    const auto x = tone(4000.0, 16000.0);
    const auto y = ebc::antialias(x, 2000.0);
    CHECK(20 * std::log10(central_rms(y.values) / central_rms(x.values)) <= -90.0);
}

TEST_CASE("antialias rejects cutoffs at or above the grid Nyquist") {
    ebc::DenseTrace t{16000.0, std::vector<double>(100, 0.0), 0.0};
    CHECK_THROWS_AS(ebc::antialias(t, 16000.0), std::invalid_argument);
}

TEST_CASE("filtfilt is zero phase") {
    const auto x = tone(300.0, 16000.0);
    const auto sos = ebc::butterworth_lowpass(8, 1000.0, 16000.0);
    const auto y = ebc::filtfilt(sos, x.values, 200);
    const double g = std::pow(ebc::cascade_gain(sos, 300.0, 16000.0), 2);
    for (std::size_t k = 1600; k < 14400; k += 37) {
        CHECK(y[k] == doctest::Approx(g * x.values[k]).epsilon(1e-6).scale(1.0));
    }
}

TEST_CASE("uniform sampling") {
    ebc::DenseTrace t{16000.0, {}, 0.0};
    for (int k = 0; k < 16000; ++k) {
        t.values.push_back(k);
    }
    const auto a = ebc::uniform_sample(t, 1600.0);
    REQUIRE(a.size() == 1600);
    CHECK(a[3] == 30.0);
    const auto b = ebc::uniform_sample(t, 400.0);
    REQUIRE(b.size() == 400);
    CHECK(b[5] == 200.0);
    // non-integral ratio falls back to linear interpolation on a line
    const auto c = ebc::uniform_sample(t, 3000.0);
    REQUIRE(c.size() == 3000);
    CHECK(c[7] == doctest::Approx(7 * 16000.0 / 3000.0));
    ebc::DenseTrace k{16000.0, std::vector<double>(16000, 2.5), 0.0};
    const auto d = ebc::uniform_sample(k, 800.0);
    CHECK(std::ranges::all_of(d, [](double v) { return v == 2.5; }));
}

TEST_CASE("quantizer") {
    CHECK(ebc::quantizer_step(3, 4.0) == 1.0);
    CHECK(ebc::quantize(0.0, 3, 4.0) == 4);
    CHECK(ebc::dequantize(4, 3, 4.0) == 0.5);
    CHECK(ebc::quantize(-4.0, 3, 4.0) == 0);
    CHECK(ebc::dequantize(0, 3, 4.0) == -3.5);
    CHECK(ebc::quantize(4.0, 3, 4.0) == 7);
    CHECK(ebc::dequantize(7, 3, 4.0) == 3.5);
    CHECK(ebc::quantize(100.0, 8, 4.0) == 255);
    CHECK(ebc::quantize(-100.0, 8, 4.0) == 0);
    // error bounded by half a step inside the range
    for (int b = 3; b <= 8; ++b) {
        const double q = ebc::quantizer_step(b, 4.0);
        for (double x = -3.999; x < 4.0; x += 0.0137) {
            CHECK(std::abs(ebc::dequantize(ebc::quantize(x, b, 4.0), b, 4.0) - x) <= q / 2 + 1e-12);
        }
    }
}

TEST_CASE("wsk_encode") {
    ebc::DenseTrace z{16000.0, std::vector<double>(16000, 0.0), 0.0};
    for (int b = 3; b <= 8; ++b) {
        const auto s = ebc::wsk_encode(z, ebc::WskConfig::make(800.0, b));
        REQUIRE(s.indices.size() == 800);
        CHECK(std::ranges::all_of(s.indices, [b](std::uint32_t i) { return i == (1u << (b - 1)); }));
    }
    const auto s = ebc::wsk_encode(tone(50.0, 16000.0, 3.9), ebc::WskConfig::make(1000.0, 4));
    CHECK(s.indices.size() == 1000);
    CHECK(std::ranges::all_of(s.indices, [](std::uint32_t i) { return i < 16; }));
    std::ostringstream os;
    ebc::write_symbol_stream(os, ebc::wsk_encode(z, ebc::WskConfig::make(400.0, 3)));
    CHECK(os.str().substr(0, 6) == "4,4,4,");
}

TEST_CASE("trace rate for a sampling rate") {
    CHECK(ebc::wsk_trace_rate(2000.0) == 16000.0);
    CHECK(ebc::wsk_trace_rate(1400.0) == 16800.0);
    CHECK(ebc::wsk_trace_rate(400.0) == 16000.0);
    CHECK(ebc::wsk_trace_rate(3000.0) == 18000.0);
}
