#include "ebc/reconstruction.hpp"

#include "ebc/metrics.hpp"
#include "oracle/sod_oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace {

double central_nmse(const std::vector<double>& ref, const std::vector<double>& est) {
    const std::size_t a = ref.size() / 10;
    const std::size_t b = ref.size() - a;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        num += (ref[i] - est[i]) * (ref[i] - est[i]);
        den += ref[i] * ref[i];
    }
    return num / den;
}

} // namespace

TEST_CASE("linear interpolation examples") {
    const auto r = ebc::reconstruct_ebc({{0.0, 0.0}, {1.0, 1.0}}, 16000.0, 1.0);
    REQUIRE(r.values.size() == 16000);
    CHECK(r.values[8000] == doctest::Approx(0.5));
    CHECK(r.source == ebc::ReconstructionSource::Ebc);

    const auto c = ebc::reconstruct_ebc({{0.5, 2.0}}, 16000.0, 1.0);
    CHECK(std::ranges::all_of(c.values, [](double v) { return v == 2.0; }));

    const auto z = ebc::reconstruct_ebc({}, 16000.0, 1.0);
    CHECK(z.values.size() == 16000);
    CHECK(std::ranges::all_of(z.values, [](double v) { return v == 0.0; }));
}

TEST_CASE("ramp reconstruction is exact between the first and last event") {
    const auto cfg = ebc::SodConfig::with_levels(10);
    const auto s = ebc::sod_encode(oracle::ramp, 1.0, 16000.0, cfg);
    const auto r = ebc::reconstruct_ebc(ebc::events_to_samples(s, cfg), 16000.0, 1.0);
    const double t0 = s.events.front().time;
    const double t1 = s.events.back().time;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < 16000; ++k) {
        const double t = static_cast<double>(k) / 16000.0;
        if (t >= t0 && t <= t1) {
            num += std::pow(r.values[k] - oracle::ramp(t), 2);
            den += std::pow(oracle::ramp(t), 2);
        }
    }
    const double bound = (cfg.delta_l() * cfg.delta_l() / 12.0) / (den / 16000.0);
    CHECK(num / den <= bound);
    CHECK(num / den < 1e-20);
}

TEST_CASE("sinc interpolation of a single sample is the kernel") {
    std::vector<double> v(100, 0.0);
    v[0] = 1.0;
    const auto y = ebc::bandlimited_interpolate(v, 2000.0, 16000.0, 1600);
    for (std::size_t k = 0; k < y.size(); k += 7) {
        CHECK(y[k] == doctest::Approx(ebc::sinc(2000.0 * static_cast<double>(k) / 16000.0)).epsilon(1e-12).scale(1.0));
    }
    // a rate that is not an integer falls back to direct summation; same kernel
    const auto d = ebc::bandlimited_interpolate(v, 1234.5, 16000.0, 200);
    for (std::size_t k = 0; k < d.size(); k += 3) {
        CHECK(d[k] == doctest::Approx(ebc::sinc(1234.5 * static_cast<double>(k) / 16000.0)).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("constant symbols reconstruct to a constant away from the edges") {
    ebc::SymbolStream s{ebc::WskConfig::make(2000.0, 3), std::vector<std::uint32_t>(2000, 4), 1.0};
    const auto r = ebc::reconstruct_wsk(s, 16000.0, 1.0);
    REQUIRE(r.values.size() == 16000);
    CHECK(r.source == ebc::ReconstructionSource::Wsk);
    for (std::size_t k = 1600; k < 14400; ++k) {
        CHECK(std::abs(r.values[k] - 0.5) <= 0.05 * 0.5);
    }
}

TEST_CASE("100 Hz tone through the 8-bit chain") {
    ebc::DenseTrace x{16000.0, {}, 0.0};
    for (int k = 0; k < 16000; ++k) {
        x.values.push_back(3.0 * std::sin(2 * std::numbers::pi * 100.0 * k / 16000.0));
    }
    const auto s = ebc::wsk_encode(x, ebc::WskConfig::make(2000.0, 8));
    const auto r = ebc::reconstruct_wsk(s, 16000.0, 1.0);
    const double q = ebc::quantizer_step(8, 4.0);
    const double floor = (q * q / 12.0) / 4.5;
    CHECK(central_nmse(x.values, r.values) <= 2.0 * floor);
}

TEST_CASE("unquantized reference chain") {
    const auto p = ebc::BandwidthProfile::with_mean(325.0);
    const auto sig = ebc::synthesize_vbw(p, 9);
    const auto ref = ebc::eval_trace(sig, 16000.0);
    const auto rec = ebc::nyquist_reconstruct_reference(sig, 4000.0);
    const double e_ref = *ebc::nmse(ref.values, rec.values);
    CHECK(e_ref <= 1e-3);

    // quantizing adds roughly q^2/12 of error power on top
    const ebc::DenseTrace at4k = ebc::eval_trace(sig, ebc::wsk_trace_rate(4000.0));
    const auto s8 = ebc::wsk_encode(at4k, ebc::WskConfig::make(4000.0, 8));
    const auto r8 = ebc::reconstruct_wsk(s8, 16000.0, 1.0);
    const double e8 = *ebc::nmse(ref.values, r8.values);
    double power = 0.0;
    for (double v : ref.values) {
        power += v * v;
    }
    power /= static_cast<double>(ref.values.size());
    const double q = ebc::quantizer_step(8, 4.0);
    const double excess = e8 - e_ref;
    CHECK(excess > 0.5 * (q * q / 12.0) / power);
    CHECK(excess < 2.0 * (q * q / 12.0) / power);

    const ebc::VbwSignal zero(p, std::vector<double>(ebc::coefficient_count(p), 0.0));
    const auto rz = ebc::nyquist_reconstruct_reference(zero, 4000.0);
    CHECK(std::ranges::all_of(rz.values, [](double v) { return v == 0.0; }));
}
