#include "rwm/errors.hpp"
#include "rwm/odometer_tower.hpp"

#include "support/gen.hpp"

#include <doctest.h>

using namespace rwm;

namespace {

GrowthSequence seq(std::initializer_list<long> terms) {
    std::vector<BigInt> q;
    for (long t : terms) q.emplace_back(t);
    return GrowthSequence(std::move(q));
}

// Direct orbit simulation over all 2^L cylinders with plain integers.
// Requires super-growth q and q_1 + ... + q_L >= n_max, so that any height
// depending on coordinates past L exceeds n_max.
std::vector<Rational> simulate_correlations(const std::vector<long>& q, unsigned L, long n_max) {
    std::vector<long> S(q.size() + 1, 0);
    for (std::size_t k = 0; k < q.size(); ++k) S[k + 1] = S[k] + q[k];
    REQUIRE(S[L] >= n_max);
    std::vector<long> hits(static_cast<std::size_t>(n_max) + 1, 0);
    const unsigned long words = 1UL << L;
    for (unsigned long w0 = 0; w0 < words; ++w0) {
        unsigned long w = w0;
        long t = 0;
        while (true) {
            if (w == words - 1) break; // next jump exceeds S_L >= n_max
            unsigned l = 1;
            while ((w >> (l - 1)) & 1UL) ++l;
            t += q[l - 1] - S[l - 1];
            if (t > n_max) break;
            ++hits[static_cast<std::size_t>(t)];
            ++w;
        }
    }
    std::vector<Rational> u;
    for (long n = 1; n <= n_max; ++n) {
        Rational r(hits[static_cast<std::size_t>(n)], static_cast<long>(words));
        r.canonicalize();
        u.push_back(r);
    }
    return u;
}

std::vector<long> as_longs(const GrowthSequence& q) {
    std::vector<long> out;
    for (const auto& t : q.terms()) out.push_back(t.get_si());
    return out;
}

} // namespace

TEST_CASE("odometer words and the carry step") {
    const auto w = OdometerWord::from_string("110");
    CHECK(w.coordinate(1) == 1);
    CHECK(w.coordinate(3) == 0);
    CHECK(lowest_zero(w) == 3u);
    const auto next = odometer_step(w);
    REQUIRE(next.has_value());
    CHECK(next->to_string() == "001");
    CHECK_FALSE(odometer_step(OdometerWord::from_string("111")).has_value());
    CHECK_FALSE(lowest_zero(OdometerWord::from_string("11")).has_value());
    CHECK(OdometerWord::from_string("0101").to_string() == "0101");
    CHECK_THROWS(OdometerWord::from_string("012"));
}

TEST_CASE("cocycle values") {
    const auto q = seq({1, 4, 13, 40});
    CHECK(cocycle_phi(OdometerWord::from_string("0000"), q) == 1);
    CHECK(cocycle_phi(OdometerWord::from_string("1000"), q) == 3);
    CHECK(cocycle_phi(OdometerWord::from_string("1100"), q) == 8);
    CHECK(cocycle_phi(OdometerWord::from_string("1110"), q) == 22);
    CHECK_THROWS_AS(cocycle_phi(OdometerWord::from_string("1111"), q), DepthError);
}

TEST_CASE("cocycle equals its telescoped form and is additive") {
    testing::Gen gen(41);
    for (int trial = 0; trial < 20; ++trial) {
        const GrowthSequence q(gen.growth_terms(10, static_cast<int>(gen.integer(1, 2)), 5));
        for (std::uint64_t bits = 0; bits + 1 < (1u << 10); ++bits) {
            const OdometerWord w(bits, 10);
            CHECK(cocycle_phi(w, q) == cocycle_phi_telescoped(w, q));
        }
        for (int rep = 0; rep < 50; ++rep) {
            const std::uint64_t a = static_cast<std::uint64_t>(gen.integer(0, 200));
            const std::uint64_t b = static_cast<std::uint64_t>(gen.integer(0, 200));
            const OdometerWord w(static_cast<std::uint64_t>(gen.integer(0, 400)), 10);
            OdometerWord shifted = w;
            for (std::uint64_t i = 0; i < a; ++i) shifted = *odometer_step(shifted);
            CHECK(cocycle_phi_iterate(w, a + b, q) ==
                  cocycle_phi_iterate(w, a, q) + cocycle_phi_iterate(shifted, b, q));
        }
        // phi_N telescopes to sum_k q_k ((tau^N w)_k - w_k)
        const OdometerWord w(5, 10);
        OdometerWord end = w;
        for (int i = 0; i < 300; ++i) end = *odometer_step(end);
        BigInt expected = 0;
        for (unsigned k = 1; k <= 10; ++k) expected += q.term(k) * (end.coordinate(k) - w.coordinate(k));
        CHECK(cocycle_phi_iterate(w, 300, q) == expected);
    }
}

TEST_CASE("first correlations by hand") {
    const auto q = seq({1, 4, 13, 40, 121});
    const auto half = Dyadic::inverse_power_of_two(1);
    const auto quarter = Dyadic::inverse_power_of_two(2);
    CHECK(correlation_exact(1, q) == half);
    CHECK(correlation_exact(2, q) == Dyadic());
    CHECK(correlation_exact(3, q) == quarter);
    CHECK(correlation_exact(4, q) == half);
    CHECK(correlation_exact(5, q) == quarter);
    CHECK(correlation_exact(6, q) == Dyadic());
    CHECK(correlation_exact(13, q) == half);
    CHECK(correlation_exact(18, q) == Dyadic::inverse_power_of_two(3));
    CHECK_THROWS_AS(correlation_exact(180, q), OutOfRange);
    CHECK_THROWS_AS(correlation_exact(3, seq({1, 2, 4})), Unsupported);
}

TEST_CASE("closed form matches direct simulation on random super-growth sequences") {
    testing::Gen gen(43);
    for (int trial = 0; trial < 15; ++trial) {
        const GrowthSequence q(gen.growth_terms(7, 2, 3));
        const unsigned L = 6;
        const long n_max = q.prefix_sum(5).get_si();
        const auto oracle = simulate_correlations(as_longs(q), L, n_max);
        const auto exact = correlation_exact_sequence(n_max, q);
        for (long n = 1; n <= n_max; ++n) {
            CHECK(exact.at(n).to_rational() == oracle[static_cast<std::size_t>(n - 1)]);
        }
    }
}

TEST_CASE("brute force matches closed form and is depth stable") {
    testing::Gen gen(47);
    for (int trial = 0; trial < 10; ++trial) {
        const GrowthSequence q(gen.growth_terms(9, 2, 2));
        const long n_max = q.prefix_sum(5).get_si();
        const unsigned L = auto_depth(n_max, q);
        const auto exact = correlation_exact_sequence(n_max, q);
        const auto a = correlation_bruteforce(n_max, q, L);
        const auto b = correlation_bruteforce(n_max, q, L + 2);
        CHECK(a == exact);
        CHECK(b == exact);
    }
}

TEST_CASE("brute force cannot certify a plain growth sequence") {
    // Past the known coordinates a height can be as small as 1.
    CHECK_THROWS_AS(correlation_bruteforce(60, seq({1, 2, 4, 8, 16, 32, 64, 128}), 8), DepthError);
}

TEST_CASE("brute force refuses depths that cannot decide n_max") {
    const auto q = seq({1, 4, 13, 40, 121, 364});
    CHECK_THROWS_AS(correlation_bruteforce(200, q, 2), DepthError);
}

TEST_CASE("return sequence and smiley ratios by direct summation") {
    const std::vector<std::int64_t> a(11, 3);
    const auto q = make_peres_sequence(a, 1, 12).q;
    const long n_max = 2000;
    const auto u = correlation_exact_sequence(n_max + 1, q);
    const auto rows = return_sequence_report(n_max, q);
    const auto smiley = smiley_series(n_max, q);
    Rational partial = 0;
    Rational diff = 0;
    for (long n = 1; n <= n_max; ++n) {
        partial += u.at(n).to_rational();
        diff += abs(u.at(n).to_rational() - u.at(n + 1).to_rational());
        Rational scale(1);
        mpq_mul_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<unsigned long>(c_index(n, q)));
        const auto& r = rows[static_cast<std::size_t>(n - 1)];
        CHECK(r.partial_sum.to_rational() == partial);
        CHECK(r.ratio.to_rational() == partial / scale);
        const auto& s = smiley[static_cast<std::size_t>(n - 1)];
        CHECK(s.difference_sum.to_rational() == diff);
        CHECK(s.ratio.to_rational() == diff / scale);
        CHECK(smiley_ratio(n, q) == s.ratio);
    }
    // checkpoints at n = q_1 + ... + q_K
    CHECK(smiley[4].ratio == Dyadic(BigInt(3), 4));
    CHECK(smiley[17].ratio == Dyadic(BigInt(7), 5));
    CHECK(smiley[57].ratio == Dyadic(BigInt(15), 6));
    CHECK(smiley[178].ratio == Dyadic(BigInt(31), 7));
    CHECK(smiley[542].ratio == Dyadic(BigInt(63), 8));
}

TEST_CASE("correlation sequence export") {
    const auto q = seq({1, 4, 13});
    const auto u = correlation_exact_sequence(5, q);
    CHECK(u.to_csv() == "n,numerator,log2_denominator,value_decimal\n1,1,1,0.5\n2,0,0,0\n3,1,2,0.25\n"
                        "4,1,1,0.5\n5,1,2,0.25\n");
    CHECK(u.to_json()["values"].size() == 5);
    CHECK_THROWS_AS(u.at(6), OutOfRange);
}
