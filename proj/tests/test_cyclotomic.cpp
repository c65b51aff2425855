#include <catch2/catch_amalgamated.hpp>

#include "nforge/cyclotomic.hpp"

#include <random>

using namespace nforge;

TEST_CASE("cyclotomic polynomials") {
    // Phi_p = 1 + x + ... + x^{p-1}
    CHECK(euler_phi(5) == 4);
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    const auto& p12 = detail::cyclotomic_poly(12);  // x^4 - x^2 + 1
    REQUIRE(p12.size() == 5);
    CHECK(p12[0] == 1);
    CHECK(p12[1] == 0);
    CHECK(p12[2] == -1);
    CHECK(p12[3] == 0);
    CHECK(p12[4] == 1);
}

TEST_CASE("make reduces canonically") {
    // zeta_4^2 = -1
    CHECK(Cyc::make(4, {0, 0, 1}) == Cyc::from_rational(4, -1));
    // 1 + zeta_3 + zeta_3^2 = 0
    CHECK(Cyc::make(3, {1, 1, 1}).is_zero());
    // zeta_5^5 = 1
    CHECK(Cyc::make(5, {0, 0, 0, 0, 0, 1}).is_one());
}

TEST_CASE("field arithmetic") {
    // roots of unity invert to powers
    CHECK(Cyc::zeta_pow(3, 1).inverse() == Cyc::zeta_pow(3, 2));
    // (1 + i)(1 - i) = 2
    Cyc i4 = Cyc::zeta_pow(4, 1);
    Cyc one = Cyc::one(4);
    CHECK((one + i4) * (one - i4) == Cyc::from_rational(4, 2));
    // inv(1 + zeta_3) checked by multiplying back
    Cyc a = Cyc::one(3) + Cyc::zeta_pow(3, 1);
    CHECK((a * a.inverse()).is_one());
    CHECK_THROWS_AS(Cyc::zero(7).inverse(), InvalidInput);
}

TEST_CASE("root orders") {
    CHECK(Cyc::one(6).multiplicative_order() == 1);
    CHECK(Cyc::from_rational(6, -1).multiplicative_order() == 2);
    CHECK_FALSE(Cyc::from_rational(6, 2).multiplicative_order().has_value());
    // root_order_of(zeta^k) = N / gcd(N, k)
    for (std::int64_t n : {4, 5, 6, 12}) {
        for (std::int64_t k = 0; k < n; ++k) {
            auto ord = Cyc::zeta_pow(n, k).multiplicative_order();
            REQUIRE(ord.has_value());
            CHECK(*ord == n / std::gcd(n, k));
        }
    }
}

TEST_CASE("properties: inverse and idempotent reduction") {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::int64_t n = std::vector<std::int64_t>{3, 4, 5, 8, 12}[trial % 5];
        std::vector<Rational> raw(static_cast<size_t>(2 * n));
        for (auto& c : raw) c = coeff(rng);
        Cyc x = Cyc::make(n, raw);
        // reduction idempotence
        CHECK(Cyc::make(n, x.coeffs()) == x);
        if (!x.is_zero()) CHECK((x * x.inverse()).is_one());
    }
}
