#pragma once

// Growth sequences q_1 < q_2 < ... and signed-digit codes over {-1, 0, +1}.
//
// All sequences are finite truncations of length K; every operation is taken
// relative to that working length. Indices are 1-based throughout, matching
// the way the sequences are written mathematically.

#include "rwm/numeric.hpp"

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace rwm {

enum class GrowthClass {
    none,         // strictly increasing only
    growth,       // q_n > q_1 + ... + q_{n-1}
    super_growth, // q_n > 2 (q_1 + ... + q_{n-1})
};

std::string_view to_string(GrowthClass cls);

/// Strongest class satisfied at every index. Throws InvalidArgument unless
/// the input is a strictly increasing list of positive integers.
GrowthClass validate_class(std::span<const BigInt> q);

class GrowthSequence {
public:
    explicit GrowthSequence(std::vector<BigInt> terms);

    std::size_t size() const { return terms_.size(); }
    /// q_k, 1 <= k <= size().
    const BigInt& term(std::size_t k) const;
    /// q_1 + ... + q_k; prefix_sum(0) == 0.
    const BigInt& prefix_sum(std::size_t k) const;
    const BigInt& total() const { return prefix_.back(); }

    GrowthClass growth_class() const { return class_; }
    bool is_super_growth() const { return class_ == GrowthClass::super_growth; }
    std::span<const BigInt> terms() const { return terms_; }

    friend bool operator==(const GrowthSequence& a, const GrowthSequence& b) {
        return a.terms_ == b.terms_;
    }

private:
    std::vector<BigInt> terms_;
    std::vector<BigInt> prefix_;
    GrowthClass class_;
};

struct PeresSequence {
    GrowthSequence q;
    /// Partial sums of 1/a_n^2 over the multipliers actually used.
    std::vector<double> inverse_square_partials;
};

/// q_{n+1} = a_n q_n + 1. Uses the first length-1 multipliers.
PeresSequence make_peres_sequence(std::span<const std::int64_t> multipliers, const BigInt& q1,
                                  std::size_t length);

/// Finitely supported sequence over {-1, 0, +1}; only non-zero digits are stored.
class SignedCode {
public:
    SignedCode() = default;
    /// Zero digits are dropped; anything outside {-1,0,1} or index 0 is rejected.
    explicit SignedCode(const std::map<std::size_t, int>& digits);

    int digit(std::size_t k) const;
    const std::map<std::size_t, int>& digits() const { return digits_; }
    bool empty() const { return digits_.empty(); }
    /// Number of non-zero digits.
    std::size_t norm() const { return digits_.size(); }
    /// Largest supported index, 0 for the empty code.
    std::size_t kappa_max() const { return digits_.empty() ? 0 : digits_.rbegin()->first; }
    /// Member of the positive cone: nonempty with +1 at kappa_max.
    bool is_positive() const { return !digits_.empty() && digits_.rbegin()->second == 1; }

    friend bool operator==(const SignedCode&, const SignedCode&) = default;
    friend auto operator<=>(const SignedCode&, const SignedCode&) = default;

private:
    std::map<std::size_t, int> digits_;
};

/// Sum of eps_k q_k. Throws InvalidArgument if kappa_max exceeds q's length.
BigInt decode_value(const SignedCode& code, const GrowthSequence& q);

/// The unique code with value n, or nullopt when none exists or |n| exceeds
/// q_1 + ... + q_K. Throws Unsupported unless q is super-growth.
std::optional<SignedCode> encode_value(const BigInt& n, const GrowthSequence& q);

struct PositiveCode {
    SignedCode code;
    BigInt value;
};

/// Every positive-cone code with 0 < value <= bound, sorted by value (ties,
/// possible only without super-growth, by code). With first_digit_zero the
/// stream is restricted to codes with eps_1 = 0.
std::vector<PositiveCode> enumerate_positive_codes(const GrowthSequence& q, const BigInt& bound,
                                                   bool first_digit_zero = false);

/// c(n) = min{k >= 1 : q_k >= n}. Requires 1 <= n <= q_K.
std::size_t c_index(const BigInt& n, const GrowthSequence& q);

/// Distance from x to the nearest integer.
Rational distance_to_integer(const Rational& x);

/// Partial sums sum_{n<=k} ||q_n t||^2 for k = 1..count.
std::vector<Rational> g2_partial_sums(const GrowthSequence& q, const Rational& t,
                                      std::size_t count);

nlohmann::json to_json(const GrowthSequence& q);
GrowthSequence growth_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SignedCode& code);
SignedCode code_from_json(const nlohmann::json& j);

} // namespace rwm
