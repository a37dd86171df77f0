#include "rwm/errors.hpp"
#include "rwm/growth_codes.hpp"

#include "support/gen.hpp"

#include <doctest.h>

#include <map>

using namespace rwm;

namespace {

GrowthSequence seq(std::initializer_list<long> terms) {
    std::vector<BigInt> q;
    for (long t : terms) q.emplace_back(t);
    return GrowthSequence(std::move(q));
}

// All 3^K digit vectors, keyed by value.
std::multimap<BigInt, SignedCode> all_codes(const GrowthSequence& q) {
    std::multimap<BigInt, SignedCode> out;
    const std::size_t K = q.size();
    std::vector<int> digits(K, -1);
    while (true) {
        std::map<std::size_t, int> m;
        BigInt value = 0;
        for (std::size_t k = 0; k < K; ++k) {
            m[k + 1] = digits[k];
            value += digits[k] * q.term(k + 1);
        }
        out.emplace(value, SignedCode(m));
        std::size_t k = 0;
        while (k < K && digits[k] == 1) digits[k++] = -1;
        if (k == K) break;
        ++digits[k];
    }
    return out;
}

} // namespace

TEST_CASE("growth classes") {
    CHECK(validate_class(seq({1, 2, 4}).terms()) == GrowthClass::growth);
    CHECK(validate_class(seq({1, 4, 13, 40}).terms()) == GrowthClass::super_growth);
    CHECK(validate_class(seq({1, 3, 9, 27}).terms()) == GrowthClass::super_growth);
    CHECK(validate_class(seq({1, 2, 3}).terms()) == GrowthClass::none);
    CHECK(seq({1, 2, 4}).growth_class() == GrowthClass::growth);
    CHECK_THROWS_AS(seq({1, 1}), InvalidArgument);
    CHECK_THROWS_AS(seq({0, 1}), InvalidArgument);
    CHECK_THROWS_AS(seq({3, 2}), InvalidArgument);
    CHECK_THROWS_AS(seq({}), InvalidArgument);
}

TEST_CASE("Peres sequence with a = 3 follows its recurrence") {
    const std::vector<std::int64_t> a(11, 3);
    const auto p = make_peres_sequence(a, 1, 12);
    long expected = 1;
    for (std::size_t k = 1; k <= 12; ++k) {
        CHECK(p.q.term(k) == expected);
        expected = 3 * expected + 1;
    }
    CHECK(p.q.term(12) == 265720);
    CHECK(p.q.is_super_growth());
    REQUIRE(p.inverse_square_partials.size() == 11);
    CHECK(p.inverse_square_partials.back() == doctest::Approx(11.0 / 9.0));
    CHECK_THROWS_AS(make_peres_sequence(a, 1, 14), InvalidArgument);
}

TEST_CASE("Peres sequences with multipliers >= 2 are growth sequences") {
    testing::Gen gen(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::int64_t> a(10);
        for (auto& x : a) x = gen.integer(2, 6);
        const auto p = make_peres_sequence(a, gen.integer(1, 5), 11);
        CHECK(p.q.growth_class() != GrowthClass::none);
        bool all_ge_3 = true;
        for (auto x : a) all_ge_3 = all_ge_3 && x >= 3;
        if (all_ge_3) CHECK(p.q.is_super_growth());
    }
}

TEST_CASE("encode_value agrees with exhaustive enumeration") {
    testing::Gen gen(17);
    for (int trial = 0; trial < 30; ++trial) {
        const GrowthSequence q(gen.growth_terms(static_cast<std::size_t>(gen.integer(1, 6)), 2, 3));
        const auto codes = all_codes(q);
        const long S = q.total().get_si();
        for (long n = -S - 2; n <= S + 2; ++n) {
            const auto found = encode_value(BigInt(n), q);
            const auto count = codes.count(BigInt(n));
            CHECK(count <= 1); // injectivity
            if (count == 0) {
                CHECK_FALSE(found.has_value());
            } else {
                REQUIRE(found.has_value());
                CHECK(*found == codes.find(BigInt(n))->second);
                CHECK(decode_value(*found, q) == n);
            }
        }
    }
}

TEST_CASE("sign law and roundtrip on random super-growth sequences") {
    testing::Gen gen(23);
    for (int trial = 0; trial < 200; ++trial) {
        const GrowthSequence q(gen.growth_terms(static_cast<std::size_t>(gen.integer(2, 25)), 2, 50));
        std::map<std::size_t, int> digits;
        for (std::size_t k = 1; k <= q.size(); ++k) digits[k] = static_cast<int>(gen.integer(-1, 1));
        const SignedCode code(digits);
        const BigInt n = decode_value(code, q);
        const auto back = encode_value(n, q);
        REQUIRE(back.has_value());
        CHECK(*back == code);
        const auto neg = encode_value(-n, q);
        REQUIRE(neg.has_value());
        for (std::size_t k = 1; k <= q.size(); ++k) CHECK(neg->digit(k) == -code.digit(k));
        CHECK((n > 0) == code.is_positive());
    }
}

TEST_CASE("encoding requires super-growth") {
    CHECK_THROWS_AS(encode_value(BigInt(3), seq({1, 2, 4})), Unsupported);
}

TEST_CASE("positive cone enumeration") {
    testing::Gen gen(29);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t K = static_cast<std::size_t>(gen.integer(1, 7));
        const GrowthSequence q(gen.growth_terms(K, 2, 4));
        const auto all = enumerate_positive_codes(q, q.total());
        long expected = 1;
        for (std::size_t k = 0; k < K; ++k) expected *= 3;
        CHECK(all.size() == static_cast<std::size_t>((expected - 1) / 2));
        for (std::size_t i = 0; i < all.size(); ++i) {
            CHECK(all[i].code.is_positive());
            CHECK(decode_value(all[i].code, q) == all[i].value);
            if (i > 0) CHECK(all[i - 1].value < all[i].value);
        }
        const BigInt bound = gen.integer(1, q.total().get_si());
        const auto part = enumerate_positive_codes(q, bound);
        std::size_t within = 0;
        for (const auto& pc : all) within += pc.value <= bound ? 1 : 0;
        CHECK(part.size() == within);
        const auto restricted = enumerate_positive_codes(q, q.total(), true);
        for (const auto& pc : restricted) CHECK(pc.code.digit(1) == 0);
        long restricted_expected = 1;
        for (std::size_t k = 1; k < K; ++k) restricted_expected *= 3;
        CHECK(restricted.size() == static_cast<std::size_t>((restricted_expected - 1) / 2));
    }
}

TEST_CASE("c_index is the first index with q_k >= n") {
    const auto q = seq({1, 4, 13, 40, 121});
    CHECK(c_index(1, q) == 1);
    CHECK(c_index(2, q) == 2);
    CHECK(c_index(4, q) == 2);
    CHECK(c_index(5, q) == 3);
    CHECK(c_index(121, q) == 5);
    CHECK_THROWS_AS(c_index(122, q), OutOfRange);
    CHECK_THROWS(c_index(0, q));
    std::size_t prev = 1;
    for (long n = 1; n <= 121; ++n) {
        const std::size_t c = c_index(n, q);
        CHECK(c >= prev);
        CHECK(q.term(c) >= n);
        if (c > 1) CHECK(q.term(c - 1) < n);
        prev = c;
    }
}

TEST_CASE("distance to the nearest integer and G2 partial sums") {
    CHECK(distance_to_integer(Rational(7, 3)) == Rational(1, 3));
    CHECK(distance_to_integer(Rational(-5, 4)) == Rational(1, 4));
    CHECK(distance_to_integer(Rational(1, 2)) == Rational(1, 2));
    CHECK(distance_to_integer(Rational(3)) == 0);

    const std::vector<std::int64_t> a(7, 3);
    const auto q = make_peres_sequence(a, 1, 8).q;
    for (const auto& s : g2_partial_sums(q, 0, 8)) CHECK(s == 0);
    // q_n = 1 mod 3 for every n, so each term is (1/3)^2
    const auto third = g2_partial_sums(q, Rational(1, 3), 8);
    for (std::size_t k = 1; k <= 8; ++k) CHECK(third[k - 1] == Rational(static_cast<long>(k)) / 9);
    // q_n alternates odd/even parity: 1, 4, 13, 40, ...
    const auto half = g2_partial_sums(q, Rational(1, 2), 8);
    CHECK(half[7] == Rational(1));
}

TEST_CASE("JSON round trips") {
    const auto q = seq({1, 4, 13, 40});
    CHECK(growth_from_json(to_json(q)) == q);
    const SignedCode code({{1, -1}, {3, 1}});
    CHECK(code_from_json(to_json(code)) == code);
    CHECK(code.norm() == 2);
    CHECK(code.kappa_max() == 3);
    CHECK_THROWS(SignedCode(std::map<std::size_t, int>{{0, 1}}));
    CHECK_THROWS(SignedCode(std::map<std::size_t, int>{{1, 2}}));
}
