#pragma once

// The dyadic odometer, its height cocycle for a growth sequence, and the
// return correlations u_n = m(Omega ∩ T^-n Omega) of the tower built on it.
//
// Correlations are exact dyadic rationals. Two routes compute them: a closed
// form through the signed-digit code of n, and a brute-force orbit count over
// all binary words of a fixed depth. They are independent of each other and
// are checked against one another.

#include "rwm/growth_codes.hpp"
#include "rwm/numeric.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rwm {

/// Binary word of length 1..63; bit k (1-based) is the k-th coordinate, so
/// coordinate 1 is the least significant bit.
class OdometerWord {
public:
    OdometerWord(std::uint64_t bits, unsigned length);
    /// "110" means omega_1 = 1, omega_2 = 1, omega_3 = 0.
    static OdometerWord from_string(std::string_view coordinates);

    unsigned length() const { return length_; }
    std::uint64_t bits() const { return bits_; }
    int coordinate(unsigned k) const;
    bool all_ones() const;
    std::string to_string() const;

    friend bool operator==(const OdometerWord&, const OdometerWord&) = default;

private:
    std::uint64_t bits_;
    unsigned length_;
};

/// l(omega) = min{k : omega_k = 0}; nullopt for the all-ones word.
std::optional<unsigned> lowest_zero(const OdometerWord& w);

/// Adds one with carry; nullopt (overflow) for the all-ones word.
std::optional<OdometerWord> odometer_step(const OdometerWord& w);

/// phi(omega) = q_l - (q_1 + ... + q_{l-1}).
/// Throws DepthError on the all-ones word and InvalidArgument if l > |q|.
BigInt cocycle_phi(const OdometerWord& w, const GrowthSequence& q);

/// sum_k q_k ((tau omega)_k - omega_k); equals cocycle_phi.
BigInt cocycle_phi_telescoped(const OdometerWord& w, const GrowthSequence& q);

/// phi_N(omega) = phi(omega) + phi(tau omega) + ... + phi(tau^{N-1} omega).
BigInt cocycle_phi_iterate(const OdometerWord& w, std::uint64_t steps, const GrowthSequence& q);

/// u_n for 1 <= n <= n_max, bound to the growth sequence that produced it.
class CorrelationSequence {
public:
    CorrelationSequence(GrowthSequence q, std::vector<Dyadic> values);

    std::int64_t horizon() const { return static_cast<std::int64_t>(values_.size()); }
    /// u_n, 1 <= n <= horizon(). Throws OutOfRange otherwise.
    const Dyadic& at(std::int64_t n) const;
    const GrowthSequence& growth() const { return q_; }
    const std::vector<Dyadic>& values() const { return values_; }

    /// Columns n, numerator, log2_denominator, value_decimal.
    std::string to_csv() const;
    nlohmann::json to_json() const;

    friend bool operator==(const CorrelationSequence& a, const CorrelationSequence& b) {
        return a.q_ == b.q_ && a.values_ == b.values_;
    }

private:
    GrowthSequence q_;
    std::vector<Dyadic> values_;
};

/// 2^-||eps|| when n = N_eps has a code, else 0. Requires super-growth q and
/// 1 <= n <= q_1 + ... + q_K.
Dyadic correlation_exact(std::int64_t n, const GrowthSequence& q);

CorrelationSequence correlation_exact_sequence(std::int64_t n_max, const GrowthSequence& q);

/// Depth used when none is given: c(n_max) + 2.
unsigned auto_depth(std::int64_t n_max, const GrowthSequence& q);

/// Counts, over all 2^depth cylinder words, those whose return times
/// phi_1 < phi_2 < ... hit n. Once an orbit needs a height that depends on
/// coordinates past min(depth, K), the jump is bounded below (by S+1 for
/// super-growth q) and the word is retired if that jump clears n_max;
/// otherwise a DepthError is thrown. Without super-growth the bound is 1, so
/// in practice only super-growth sequences can be certified.
CorrelationSequence correlation_bruteforce(std::int64_t n_max, const GrowthSequence& q,
                                           unsigned depth);

struct ReturnRow {
    std::int64_t n;
    Dyadic partial_sum;    // a_n = u_1 + ... + u_n
    std::size_t c;         // c(n)
    Dyadic ratio;          // a_n / 2^c(n)
};

std::vector<ReturnRow> return_sequence_report(std::int64_t n_max, const GrowthSequence& q);

/// sum_{k=1}^{n} |u_k - u_{k+shift}|.
Dyadic shift_difference_sum(std::int64_t n, std::int64_t shift, const GrowthSequence& q);

/// shift_difference_sum(n, q_1) / 2^c(n).
Dyadic smiley_ratio(std::int64_t n, const GrowthSequence& q);

struct SmileyRow {
    std::int64_t n;
    Dyadic difference_sum;
    std::size_t c;
    Dyadic ratio;
};

/// smiley_ratio for every n in 1..n_max in one pass.
std::vector<SmileyRow> smiley_series(std::int64_t n_max, const GrowthSequence& q);

} // namespace rwm
