#include "rwm/odometer_tower.hpp"

#include "rwm/errors.hpp"

#include <bit>
#include <limits>
#include <sstream>

namespace rwm {

OdometerWord::OdometerWord(std::uint64_t bits, unsigned length) : bits_(bits), length_(length) {
    if (length < 1 || length > 63) throw InvalidArgument("odometer word length must be in 1..63");
    if ((bits >> length) != 0) throw InvalidArgument("odometer word has bits beyond its length");
}

OdometerWord OdometerWord::from_string(std::string_view coordinates) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < coordinates.size(); ++i) {
        const char c = coordinates[i];
        if (c != '0' && c != '1') throw InvalidArgument("odometer word must be a 0/1 string");
        if (c == '1') bits |= std::uint64_t{1} << i;
    }
    return OdometerWord(bits, static_cast<unsigned>(coordinates.size()));
}

int OdometerWord::coordinate(unsigned k) const {
    if (k < 1 || k > length_) throw OutOfRange("odometer coordinate out of range");
    return static_cast<int>((bits_ >> (k - 1)) & 1U);
}

bool OdometerWord::all_ones() const { return bits_ == (std::uint64_t{1} << length_) - 1; }

std::string OdometerWord::to_string() const {
    std::string s(length_, '0');
    for (unsigned k = 0; k < length_; ++k) {
        if ((bits_ >> k) & 1U) s[k] = '1';
    }
    return s;
}

std::optional<unsigned> lowest_zero(const OdometerWord& w) {
    if (w.all_ones()) return std::nullopt;
    return static_cast<unsigned>(std::countr_one(w.bits())) + 1;
}

std::optional<OdometerWord> odometer_step(const OdometerWord& w) {
    if (w.all_ones()) return std::nullopt;
    return OdometerWord(w.bits() + 1, w.length());
}

BigInt cocycle_phi(const OdometerWord& w, const GrowthSequence& q) {
    const auto ell = lowest_zero(w);
    if (!ell) throw DepthError("cocycle undefined on the all-ones word: depth too small");
    if (*ell > q.size()) {
        throw InvalidArgument("growth sequence too short for l(omega) = " + std::to_string(*ell));
    }
    return q.term(*ell) - q.prefix_sum(*ell - 1);
}

BigInt cocycle_phi_telescoped(const OdometerWord& w, const GrowthSequence& q) {
    const auto next = odometer_step(w);
    if (!next) throw DepthError("cocycle undefined on the all-ones word: depth too small");
    BigInt value = 0;
    for (unsigned k = 1; k <= w.length(); ++k) {
        const int delta = next->coordinate(k) - w.coordinate(k);
        if (delta == 0) continue;
        if (k > q.size()) {
            throw InvalidArgument("growth sequence too short for coordinate " + std::to_string(k));
        }
        if (delta > 0) {
            value += q.term(k);
        } else {
            value -= q.term(k);
        }
    }
    return value;
}

BigInt cocycle_phi_iterate(const OdometerWord& w, std::uint64_t steps, const GrowthSequence& q) {
    BigInt total = 0;
    OdometerWord current = w;
    for (std::uint64_t j = 0; j < steps; ++j) {
        total += cocycle_phi(current, q);
        if (j + 1 < steps) {
            const auto next = odometer_step(current);
            if (!next) throw DepthError("odometer orbit overflowed before the requested step");
            current = *next;
        }
    }
    return total;
}

CorrelationSequence::CorrelationSequence(GrowthSequence q, std::vector<Dyadic> values)
    : q_(std::move(q)), values_(std::move(values)) {}

const Dyadic& CorrelationSequence::at(std::int64_t n) const {
    if (n < 1 || n > horizon()) {
        throw OutOfRange("correlation index " + std::to_string(n) + " outside 1.." +
                         std::to_string(horizon()));
    }
    return values_[static_cast<std::size_t>(n - 1)];
}

std::string CorrelationSequence::to_csv() const {
    std::ostringstream os;
    os << "n,numerator,log2_denominator,value_decimal\n";
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const auto& v = values_[i];
        os << (i + 1) << ',' << to_string(v.numerator()) << ',' << v.log2_denominator() << ','
           << v.decimal() << '\n';
    }
    return os.str();
}

nlohmann::json CorrelationSequence::to_json() const {
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const auto& v = values_[i];
        rows.push_back({{"n", i + 1},
                        {"numerator", to_string(v.numerator())},
                        {"log2_denominator", v.log2_denominator()},
                        {"value_decimal", v.decimal()}});
    }
    return {{"q", rwm::to_json(q_)}, {"values", rows}};
}

namespace {

void require_in_range(std::int64_t n, const GrowthSequence& q) {
    if (n < 1) throw InvalidArgument("correlation index must be >= 1");
    if (BigInt(static_cast<long>(n)) > q.total()) {
        throw OutOfRange("n = " + std::to_string(n) + " exceeds q_1 + ... + q_K = " +
                         to_string(q.total()));
    }
}

std::int64_t clamp_to(const BigInt& value, std::int64_t cap) {
    if (value > cap) return cap;
    return value.get_si();
}

} // namespace

Dyadic correlation_exact(std::int64_t n, const GrowthSequence& q) {
    if (!q.is_super_growth()) {
        throw Unsupported("closed-form correlations need a super-growth sequence");
    }
    require_in_range(n, q);
    const auto code = encode_value(BigInt(static_cast<long>(n)), q);
    if (!code) return Dyadic();
    return Dyadic::inverse_power_of_two(static_cast<unsigned>(code->norm()));
}

CorrelationSequence correlation_exact_sequence(std::int64_t n_max, const GrowthSequence& q) {
    if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
    if (n_max > 0) require_in_range(n_max, q);
    std::vector<Dyadic> values;
    values.reserve(static_cast<std::size_t>(n_max));
    for (std::int64_t n = 1; n <= n_max; ++n) values.push_back(correlation_exact(n, q));
    return CorrelationSequence(q, std::move(values));
}

unsigned auto_depth(std::int64_t n_max, const GrowthSequence& q) {
    return static_cast<unsigned>(c_index(BigInt(static_cast<long>(n_max)), q)) + 2;
}

CorrelationSequence correlation_bruteforce(std::int64_t n_max, const GrowthSequence& q,
                                           unsigned depth) {
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    if (depth < 1 || depth > 40) throw InvalidArgument("brute-force depth must be in 1..40");
    if (q.growth_class() == GrowthClass::none) {
        throw InvalidArgument("tower heights need a growth sequence (phi >= 1)");
    }
    const std::int64_t cap = n_max + 1;
    const std::size_t known = std::min<std::size_t>(depth, q.size());

    // heights[l] = q_l - S_{l-1}, saturated at n_max + 1.
    std::vector<std::int64_t> heights(known + 1, 0);
    for (std::size_t l = 1; l <= known; ++l) {
        heights[l] = clamp_to(q.term(l) - q.prefix_sum(l - 1), cap);
    }
    // Lower bound for any height whose l lies past the known coordinates.
    const std::int64_t unknown_jump =
        q.is_super_growth() ? clamp_to(q.prefix_sum(known) + 1, cap) : 1;

    std::vector<std::uint64_t> hits(static_cast<std::size_t>(n_max) + 1, 0);
    const std::uint64_t words = std::uint64_t{1} << depth;
    for (std::uint64_t w = 0; w < words; ++w) {
        std::uint64_t state = w;
        std::int64_t sum = 0;
        while (true) {
            const auto ell = static_cast<std::size_t>(std::countr_one(state)) + 1;
            if (ell > known) {
                // Either overflow past the depth or a height beyond q's length.
                if (sum + unknown_jump > n_max) break;
                throw DepthError("depth " + std::to_string(depth) +
                                 " cannot decide return times up to n_max = " +
                                 std::to_string(n_max) + "; increase depth or extend q");
            }
            sum += heights[ell];
            if (sum > n_max) break;
            ++hits[static_cast<std::size_t>(sum)];
            ++state;
        }
    }

    std::vector<Dyadic> values;
    values.reserve(static_cast<std::size_t>(n_max));
    for (std::int64_t n = 1; n <= n_max; ++n) {
        values.emplace_back(BigInt(static_cast<unsigned long>(hits[static_cast<std::size_t>(n)])),
                            depth);
    }
    return CorrelationSequence(q, std::move(values));
}

std::vector<ReturnRow> return_sequence_report(std::int64_t n_max, const GrowthSequence& q) {
    if (n_max < 1) return {};
    c_index(BigInt(static_cast<long>(n_max)), q); // range check: n_max <= q_K
    std::vector<ReturnRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    Dyadic a;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        a += correlation_exact(n, q);
        const std::size_t c = c_index(BigInt(static_cast<long>(n)), q);
        rows.push_back({n, a, c, a.scaled_down(static_cast<unsigned>(c))});
    }
    return rows;
}

Dyadic shift_difference_sum(std::int64_t n, std::int64_t shift, const GrowthSequence& q) {
    if (n <= 0) return Dyadic();
    if (shift < 0) throw InvalidArgument("shift must be non-negative");
    require_in_range(n + shift, q);
    Dyadic total;
    for (std::int64_t k = 1; k <= n; ++k) {
        total += abs(correlation_exact(k, q) - correlation_exact(k + shift, q));
    }
    return total;
}

Dyadic smiley_ratio(std::int64_t n, const GrowthSequence& q) {
    const std::int64_t shift = q.term(1).get_si();
    const std::size_t c = c_index(BigInt(static_cast<long>(n)), q);
    return shift_difference_sum(n, shift, q).scaled_down(static_cast<unsigned>(c));
}

std::vector<SmileyRow> smiley_series(std::int64_t n_max, const GrowthSequence& q) {
    if (n_max < 1) return {};
    const std::int64_t shift = q.term(1).get_si();
    c_index(BigInt(static_cast<long>(n_max)), q);
    require_in_range(n_max + shift, q);
    const auto u = correlation_exact_sequence(n_max + shift, q);
    std::vector<SmileyRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    Dyadic total;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        total += abs(u.at(n) - u.at(n + shift));
        const std::size_t c = c_index(BigInt(static_cast<long>(n)), q);
        rows.push_back({n, total, c, total.scaled_down(static_cast<unsigned>(c))});
    }
    return rows;
}

} // namespace rwm
