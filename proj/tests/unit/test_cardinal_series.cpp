#include "ebc/cardinal_series.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using ebc::CardinalSeries;

namespace {

std::vector<double> random_coeffs(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    std::vector<double> c(n);
    for (auto& v : c) {
        v = g(rng);
    }
    return c;
}

// Independent reference: plain double loop with the textbook sinc.
std::vector<double> brute(const std::vector<double>& c, std::int64_t origin, std::int64_t num, std::int64_t den,
                          std::size_t n_out) {
    std::vector<double> y(n_out, 0.0);
    for (std::size_t n = 0; n < n_out; ++n) {
        const double x = static_cast<double>(origin) + static_cast<double>(n) * num / static_cast<double>(den);
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double u = x - static_cast<double>(k);
            y[n] += c[k] * (u == 0.0 ? 1.0 : std::sin(std::numbers::pi * u) / (std::numbers::pi * u));
        }
    }
    return y;
}

} // namespace

TEST_CASE("sinc basics") {
    CHECK(ebc::sinc(0.0) == 1.0);
    CHECK(std::abs(ebc::sinc(1.0)) < 1e-15);
    CHECK(std::abs(ebc::sinc(-3.0)) < 1e-15);
    CHECK(ebc::sinc(0.5) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("lattice evaluation matches brute-force summation") {
    struct Lattice {
        std::size_t k;
        std::int64_t origin, num, den;
        std::size_t n_out;
    };
    const Lattice cases[] = {
        {50, -4, 1, 64, 58 * 64 + 1}, // oversampled warped-time table
        {80, 0, 2000, 16000, 640},    // f_s = 2 kHz onto 16 kHz
        {37, 3, 3, 7, 90},            // non-reduced, shifted
        {20, -10, 1, 1, 45},          // integer abscissae only
        {64, 0, 400, 16000, 2600},    // rate ratio 40
    };
    for (const auto& l : cases) {
        CAPTURE(l.den);
        CAPTURE(l.num);
        const auto c = random_coeffs(l.k, static_cast<unsigned>(l.k));
        const CardinalSeries cs(l.k, l.origin, l.num, l.den, l.n_out);
        const auto fast = cs.evaluate(c);
        const auto ref = brute(c, l.origin, l.num, l.den, l.n_out);
        REQUIRE(fast.size() == ref.size());
        double worst = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            worst = std::max(worst, std::abs(fast[i] - ref[i]));
        }
        CHECK(worst < 1e-11);
    }
}

TEST_CASE("integer abscissae reproduce the coefficients") {
    const auto c = random_coeffs(16, 7);
    const CardinalSeries cs(16, 0, 1, 1, 16);
    const auto y = cs.evaluate(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        CHECK(y[i] == doctest::Approx(c[i]).epsilon(1e-13));
    }
}

TEST_CASE("direct summation agrees with the lattice path") {
    const auto c = random_coeffs(30, 3);
    std::vector<double> x;
    for (int i = 0; i < 200; ++i) {
        x.push_back(-2.0 + i * 0.171875); // 11/64
    }
    const auto d = ebc::cardinal_series_direct(c, x);
    const auto lat = brute(c, -2, 11, 64, 200);
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(d[i] == doctest::Approx(lat[i]).epsilon(1e-12));
    }
}

TEST_CASE("coefficient count mismatch is rejected") {
    const CardinalSeries cs(10, 0, 1, 4, 40);
    std::vector<double> c(9, 1.0);
    CHECK_THROWS(cs.evaluate(c));
}
