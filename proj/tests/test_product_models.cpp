#include "rwm/errors.hpp"
#include "rwm/product_models.hpp"

#include "support/gen.hpp"

#include <doctest.h>

#include <cmath>

using namespace rwm;

namespace {

GrowthSequence peres(std::size_t length) {
    const std::vector<std::int64_t> a(length, 3);
    return make_peres_sequence(a, 1, length).q;
}

ProductModel model(KaluzaRule rule, std::int64_t horizon, const GrowthSequence& q) {
    return ProductModel(kaluza_sequence(rule, static_cast<std::size_t>(horizon)),
                        correlation_exact_sequence(horizon, q));
}

} // namespace

TEST_CASE("non-Kaluza Markov sequences are rejected with their index") {
    const auto q = peres(6);
    try {
        ProductModel(RenewalSequence<double>({1.0, 0.5, 0.3, 0.2, 0.1}),
                     correlation_exact_sequence(4, q));
        FAIL("expected a Kaluza violation");
    } catch (const KaluzaViolation& e) {
        CHECK(e.index == 3);
    }
    try {
        ProductModel(RenewalSequence<double>({1.0, 0.0, 1.0, 0.0}), correlation_exact_sequence(3, q));
        FAIL("expected a Kaluza violation");
    } catch (const KaluzaViolation& e) {
        CHECK(e.index == 1);
    }
}

TEST_CASE("with u = 1 the code sums are the tower partial sums") {
    const auto q = peres(9);
    const auto pm = model(KaluzaRule::constant, 3000, q);
    Dyadic partial;
    for (std::int64_t n = 1; n <= 2000; ++n) {
        partial += pm.tower_corr().at(n);
        const auto sums = product_return_sequence(pm, n);
        CHECK(sums.full == partial.to_double());
        CHECK(product_correlation(pm, n) == pm.tower_corr().at(n).to_double());
    }
}

TEST_CASE("half law over codes with first digit zero") {
    const auto q = peres(10);
    const auto codes = enumerate_positive_codes(q, q.prefix_sum(8), true);
    const long q1 = q.term(1).get_si();
    std::size_t checked = 0;
    for (const auto& pc : codes) {
        if (pc.code.kappa_max() > 8) continue;
        const long k = pc.value.get_si();
        const Dyadic here = correlation_exact(k, q);
        const Dyadic shifted = correlation_exact(k + q1, q);
        CHECK(here - shifted == here.scaled_down(1));
        ++checked;
    }
    CHECK(checked == (2187 - 1) / 2); // digits 2..8 free, top digit +1
}

TEST_CASE("product series agrees with the pointwise functions") {
    const auto q = peres(9);
    const auto pm = model(KaluzaRule::harmonic, 602, q);
    const auto rows = product_series(pm, 600);
    REQUIRE(rows.size() == 600);
    double diff = 0.0;
    for (const auto& r : rows) {
        const auto sums = product_return_sequence(pm, r.n);
        CHECK(r.code_sum == doctest::Approx(sums.full).epsilon(1e-14));
        CHECK(r.restricted_sum == doctest::Approx(sums.restricted).epsilon(1e-14));
        CHECK(r.product == product_correlation(pm, r.n));
        CHECK(r.markov_u == doctest::Approx(1.0 / static_cast<double>(r.n + 1)));
        diff += r.markov_u * std::abs(r.tower - pm.tower_corr().at(r.n + 1).to_double());
        CHECK(r.difference_sum == doctest::Approx(diff).epsilon(1e-13));
        const auto ratio = difference_sum_ratio(pm, r.n);
        REQUIRE(ratio.has_value() == r.ratio.has_value());
        if (ratio) CHECK(*ratio == doctest::Approx(*r.ratio).epsilon(1e-13));
    }
    CHECK_THROWS(product_series(pm, 602));
}

TEST_CASE("code sums match direct summation over codes") {
    const auto q = peres(8);
    const auto pm = model(KaluzaRule::harmonic, 1000, q);
    const auto codes = enumerate_positive_codes(q, BigInt(1000));
    for (std::int64_t n : {1, 5, 17, 100, 555, 1000}) {
        double full = 0.0, restricted = 0.0;
        for (const auto& pc : codes) {
            if (pc.value > n) continue;
            const double term = pm.markov_u().u(pc.value.get_ui()) * std::ldexp(1.0, -static_cast<int>(pc.code.norm()));
            full += term;
            if (pc.code.digit(1) == 0) restricted += term;
        }
        const auto sums = product_return_sequence(pm, n);
        CHECK(sums.full == doctest::Approx(full).epsilon(1e-14));
        CHECK(sums.restricted == doctest::Approx(restricted).epsilon(1e-14));
    }
}

TEST_CASE("zero-type windows") {
    const auto q = peres(10);
    const auto flat = zero_type_report(model(KaluzaRule::constant, 10001, q));
    CHECK_FALSE(flat.monotone_decreasing);
    CHECK_FALSE(flat.markov_u_decays);
    for (const auto& w : flat.windows) CHECK(w.max_correlation == 0.5);

    const auto decay = zero_type_report(model(KaluzaRule::harmonic, 10001, q));
    CHECK(decay.monotone_decreasing);
    CHECK(decay.markov_u_decays);
    for (const auto& w : decay.windows) {
        // the maximum sits at n = q_k, the window's left end
        CHECK(w.max_correlation == doctest::Approx(0.5 / static_cast<double>(w.lo + 1)));
    }

    const auto custom = zero_type_report(model(KaluzaRule::harmonic, 100, q), {1, 10, 50, 200});
    REQUIRE(custom.windows.size() == 3);
    CHECK(custom.windows[2].hi == 200);
}

TEST_CASE("restricted code sums are comparable to full ones when u = 1") {
    const auto q = peres(10);
    const auto pm = model(KaluzaRule::constant, 10001, q);
    const auto rows = product_series(pm, 10000);
    for (const auto& r : rows) {
        if (r.code_sum <= 0.0) continue;
        const double c = r.restricted_sum / r.code_sum;
        CHECK(c <= 1.0);
        if (r.n >= 4) CHECK(c >= 0.25); // before q_2 the restricted stream is empty
    }
}
