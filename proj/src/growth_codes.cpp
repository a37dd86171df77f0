#include "rwm/growth_codes.hpp"

#include "rwm/errors.hpp"

#include <algorithm>
#include <string>

namespace rwm {

std::string_view to_string(GrowthClass cls) {
    switch (cls) {
    case GrowthClass::none: return "none";
    case GrowthClass::growth: return "growth";
    case GrowthClass::super_growth: return "super_growth";
    }
    return "none";
}

GrowthClass validate_class(std::span<const BigInt> q) {
    if (q.empty()) throw InvalidArgument("growth sequence is empty");
    if (q.front() <= 0) throw InvalidArgument("growth sequence terms must be positive");
    bool growth = true;
    bool super_growth = true;
    BigInt prefix = 0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (i > 0 && q[i] <= q[i - 1]) {
            throw InvalidArgument("growth sequence must be strictly increasing (index " +
                                  std::to_string(i + 1) + ")");
        }
        if (q[i] <= prefix) growth = false;
        if (q[i] <= 2 * prefix) super_growth = false;
        prefix += q[i];
    }
    if (super_growth) return GrowthClass::super_growth;
    return growth ? GrowthClass::growth : GrowthClass::none;
}

GrowthSequence::GrowthSequence(std::vector<BigInt> terms)
    : terms_(std::move(terms)), class_(validate_class(terms_)) {
    prefix_.reserve(terms_.size() + 1);
    prefix_.emplace_back(0);
    for (const auto& t : terms_) prefix_.push_back(prefix_.back() + t);
}

const BigInt& GrowthSequence::term(std::size_t k) const {
    if (k == 0 || k > terms_.size()) {
        throw OutOfRange("growth index " + std::to_string(k) + " outside 1.." +
                         std::to_string(terms_.size()));
    }
    return terms_[k - 1];
}

const BigInt& GrowthSequence::prefix_sum(std::size_t k) const {
    if (k > terms_.size()) {
        throw OutOfRange("prefix length " + std::to_string(k) + " exceeds " +
                         std::to_string(terms_.size()));
    }
    return prefix_[k];
}

PeresSequence make_peres_sequence(std::span<const std::int64_t> multipliers, const BigInt& q1,
                                  std::size_t length) {
    if (length == 0) throw InvalidArgument("Peres sequence length must be at least 1");
    if (q1 <= 0) throw InvalidArgument("q1 must be positive");
    if (multipliers.size() + 1 < length) {
        throw InvalidArgument("need at least " + std::to_string(length - 1) + " multipliers");
    }
    std::vector<BigInt> q{q1};
    std::vector<double> partials;
    double acc = 0.0;
    for (std::size_t n = 0; n + 1 < length; ++n) {
        const std::int64_t a = multipliers[n];
        if (a < 1) throw InvalidArgument("Peres multipliers must be >= 1");
        q.push_back(q.back() * static_cast<long>(a) + 1);
        acc += 1.0 / (static_cast<double>(a) * static_cast<double>(a));
        partials.push_back(acc);
    }
    return {GrowthSequence(std::move(q)), std::move(partials)};
}

SignedCode::SignedCode(const std::map<std::size_t, int>& digits) {
    for (const auto& [k, d] : digits) {
        if (k == 0) throw InvalidArgument("code indices start at 1");
        if (d < -1 || d > 1) {
            throw InvalidArgument("code digit at " + std::to_string(k) + " is not in {-1,0,1}");
        }
        if (d != 0) digits_.emplace(k, d);
    }
}

int SignedCode::digit(std::size_t k) const {
    const auto it = digits_.find(k);
    return it == digits_.end() ? 0 : it->second;
}

BigInt decode_value(const SignedCode& code, const GrowthSequence& q) {
    if (code.kappa_max() > q.size()) {
        throw InvalidArgument("code index " + std::to_string(code.kappa_max()) +
                              " exceeds growth sequence length " + std::to_string(q.size()));
    }
    BigInt value = 0;
    for (const auto& [k, d] : code.digits()) {
        if (d > 0) {
            value += q.term(k);
        } else {
            value -= q.term(k);
        }
    }
    return value;
}

std::optional<SignedCode> encode_value(const BigInt& n, const GrowthSequence& q) {
    if (!q.is_super_growth()) {
        throw Unsupported("encode_value needs a super-growth sequence (unique representations)");
    }
    if (abs(n) > q.total()) return std::nullopt;
    // The intervals d*q_k + [-S_{k-1}, S_{k-1}] are disjoint for super-growth q,
    // so at most one digit keeps the remainder reachable at each level.
    std::map<std::size_t, int> digits;
    BigInt rest = n;
    for (std::size_t k = q.size(); k >= 1; --k) {
        const BigInt& reach = q.prefix_sum(k - 1);
        int chosen = 2;
        for (int d : {-1, 0, 1}) {
            BigInt left = rest - d * q.term(k);
            if (abs(left) <= reach) {
                chosen = d;
                break;
            }
        }
        if (chosen == 2) return std::nullopt;
        if (chosen != 0) {
            digits.emplace(k, chosen);
            rest -= chosen * q.term(k);
        }
    }
    if (rest != 0) return std::nullopt;
    return SignedCode(digits);
}

namespace {

struct CodeSearch {
    const GrowthSequence& q;
    const BigInt& bound;
    bool first_digit_zero;
    std::map<std::size_t, int> digits;
    std::vector<PositiveCode> out;

    // Assign digits k, k-1, ..., 1 given the partial value of higher digits.
    void visit(std::size_t k, const BigInt& partial) {
        if (k == 0) {
            if (partial > 0 && partial <= bound) {
                SignedCode code(digits);
                if (code.is_positive()) out.push_back({std::move(code), partial});
            }
            return;
        }
        const BigInt& reach = q.prefix_sum(k - 1);
        for (int d : {-1, 0, 1}) {
            if (k == 1 && first_digit_zero && d != 0) continue;
            BigInt next = partial + d * q.term(k);
            // Remaining digits move the value by at most reach.
            if (next + reach < 1 || next - reach > bound) continue;
            if (d != 0) digits[k] = d;
            visit(k - 1, next);
            digits.erase(k);
        }
    }
};

} // namespace

std::vector<PositiveCode> enumerate_positive_codes(const GrowthSequence& q, const BigInt& bound,
                                                   bool first_digit_zero) {
    if (bound < 1) return {};
    CodeSearch search{q, bound, first_digit_zero, {}, {}};
    search.visit(q.size(), BigInt(0));
    std::sort(search.out.begin(), search.out.end(), [](const PositiveCode& a, const PositiveCode& b) {
        const int c = cmp(a.value, b.value);
        return c != 0 ? c < 0 : a.code < b.code;
    });
    return std::move(search.out);
}

std::size_t c_index(const BigInt& n, const GrowthSequence& q) {
    if (n < 1) throw InvalidArgument("c(n) needs n >= 1");
    const auto terms = q.terms();
    const auto it = std::lower_bound(terms.begin(), terms.end(), n,
                                     [](const BigInt& t, const BigInt& v) { return t < v; });
    if (it == terms.end()) {
        throw OutOfRange("n = " + to_string(n) + " exceeds q_K = " + to_string(terms.back()));
    }
    return static_cast<std::size_t>(it - terms.begin()) + 1;
}

Rational distance_to_integer(const Rational& x) {
    BigInt floor_value;
    mpz_fdiv_q(floor_value.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Rational frac = x - Rational(floor_value);
    Rational other = Rational(1) - frac;
    return frac < other ? frac : other;
}

std::vector<Rational> g2_partial_sums(const GrowthSequence& q, const Rational& t,
                                      std::size_t count) {
    if (count > q.size()) {
        throw OutOfRange("G2 partial sums requested for " + std::to_string(count) +
                         " terms, sequence has " + std::to_string(q.size()));
    }
    std::vector<Rational> sums;
    sums.reserve(count);
    Rational acc = 0;
    for (std::size_t k = 1; k <= count; ++k) {
        Rational d = distance_to_integer(Rational(q.term(k)) * t);
        acc += d * d;
        sums.push_back(acc);
    }
    return sums;
}

nlohmann::json to_json(const GrowthSequence& q) {
    auto arr = nlohmann::json::array();
    for (const auto& t : q.terms()) arr.push_back(to_string(t));
    return arr;
}

GrowthSequence growth_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw InvalidArgument("growth sequence JSON must be an array");
    std::vector<BigInt> terms;
    for (const auto& item : j) {
        if (item.is_string()) {
            terms.push_back(parse_bigint(item.get<std::string>()));
        } else if (item.is_number_integer()) {
            terms.push_back(parse_bigint(item.dump()));
        } else {
            throw InvalidArgument("growth sequence entries must be decimal strings");
        }
    }
    return GrowthSequence(std::move(terms));
}

nlohmann::json to_json(const SignedCode& code) {
    auto digits = nlohmann::json::object();
    for (const auto& [k, d] : code.digits()) digits[std::to_string(k)] = d;
    return {{"digits", digits}};
}

SignedCode code_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("digits") || !j.at("digits").is_object()) {
        throw InvalidArgument("code JSON must look like {\"digits\": {\"k\": +-1}}");
    }
    std::map<std::size_t, int> digits;
    for (const auto& [key, value] : j.at("digits").items()) {
        std::size_t k = 0;
        try {
            k = std::stoul(key);
        } catch (const std::exception&) {
            throw InvalidArgument("code index '" + key + "' is not an integer");
        }
        if (!value.is_number_integer()) throw InvalidArgument("code digits must be integers");
        digits[k] = value.get<int>();
    }
    return SignedCode(digits);
}

} // namespace rwm
