#include "ebc/metrics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

TEST_CASE("nmse examples") {
    const std::vector<double> s{1.0, -2.0, 0.5, 3.0};
    const std::vector<double> zero(4, 0.0);
    std::vector<double> twice;
    for (double v : s) {
        twice.push_back(2 * v);
    }
    CHECK(*ebc::nmse(s, s) == 0.0);
    CHECK(*ebc::nmse(s, zero) == doctest::Approx(1.0));
    CHECK(*ebc::nmse(s, twice) == doctest::Approx(1.0));
    CHECK(*ebc::nmse(s, zero, ebc::NmseForm::Pointwise) == doctest::Approx(1.0));
    CHECK_FALSE(ebc::nmse(zero, s).has_value());
    CHECK_THROWS(ebc::nmse(s, std::vector<double>(3, 0.0)));
}

TEST_CASE("nmse forms differ when errors are uneven") {
    const std::vector<double> s{1.0, 10.0};
    const std::vector<double> e{1.5, 10.0};
    CHECK(*ebc::nmse(s, e) == doctest::Approx(0.25 / 101.0));
    CHECK(*ebc::nmse(s, e, ebc::NmseForm::Pointwise) == doctest::Approx(0.125));
}

TEST_CASE("relative power") {
    CHECK(ebc::p_rel(5 * 2000.0, 5, 2000.0) == 1.0);
    CHECK(ebc::p_rel(0.0, 5, 2000.0) == 0.0);
    CHECK(ebc::p_rel(4000.0, 4, 2000.0) == 0.5);
}

TEST_CASE("relative bandwidth") {
    CHECK(*ebc::b_rel(1e-4, 5, 2000.0) == doctest::Approx(1.0));
    CHECK(*ebc::b_rel(1.0 / (6 * 1500.0), 6, 1500.0) == doctest::Approx(1.0));
    CHECK_FALSE(ebc::b_rel(std::nullopt, 5, 2000.0).has_value());
    CHECK_FALSE(ebc::b_rel(0.0, 5, 2000.0).has_value());
}

TEST_CASE("worst-case bandwidth") {
    const double w = ebc::b_rel_worst(8.0 / 9.0, 5, 2000.0, 4.0, 1000.0);
    CHECK(w == doctest::Approx(2 * std::numbers::pi * 4000.0 / (8.0 / 9.0 * 10000.0)));
    CHECK(w == doctest::Approx(2.827).epsilon(1e-3));
    // identical to b_rel evaluated at the spacing bound
    const double tlb = (8.0 / 9.0) / (2 * std::numbers::pi * 4.0 * 1000.0);
    CHECK(*ebc::b_rel(tlb, 5, 2000.0) == doctest::Approx(w).epsilon(1e-12));
}

TEST_CASE("efficiency bundle") {
    const double tlb = (8.0 / 9.0) / (2 * std::numbers::pi * 4.0 * 1000.0);
    const auto f = ebc::efficiency(3000.0, 2 * tlb, 8.0 / 9.0, 5, 2000.0);
    CHECK(f.p_rel == doctest::Approx(0.3));
    CHECK(f.r_symbol == 10000.0);
    REQUIRE(f.b_rel.has_value());
    CHECK(*f.b_rel <= f.b_rel_worst);
    CHECK(*f.b_rel == doctest::Approx(f.b_rel_worst / 2));
    const auto none = ebc::efficiency(0.0, std::nullopt, 8.0 / 9.0, 5, 2000.0);
    CHECK(none.p_rel == 0.0);
    CHECK_FALSE(none.b_rel.has_value());
}
