#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace rwm {

using BigInt = mpz_class;
using Rational = mpq_class;

BigInt parse_bigint(std::string_view text);
// Accepts "p/q", "p" or a finite decimal such as "0.25".
Rational parse_rational(std::string_view text);

std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);

// Shortest decimal that round-trips the double.
std::string format_double(double value);

/// Exact rational of the form numerator / 2^exponent.
///
/// Kept normalized: the numerator is odd whenever the exponent is positive,
/// and zero is stored as 0 / 2^0, so equal values compare equal field-wise.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(BigInt numerator, unsigned log2_denominator);
    explicit Dyadic(long integer) : Dyadic(BigInt(integer), 0) {}

    /// 2^-exponent
    static Dyadic inverse_power_of_two(unsigned exponent);

    const BigInt& numerator() const { return numerator_; }
    unsigned log2_denominator() const { return exponent_; }
    bool is_zero() const { return numerator_ == 0; }
    int sign() const { return sgn(numerator_); }

    Dyadic& operator+=(const Dyadic& other);
    Dyadic& operator-=(const Dyadic& other);
    Dyadic operator-() const;

    /// Divides by 2^k.
    Dyadic scaled_down(unsigned k) const;

    Rational to_rational() const;
    double to_double() const;

    /// Exact base-10 expansion (always finite for a dyadic value).
    std::string decimal() const;
    /// "p/2^k" written as "p/q", or "p" for integers.
    std::string fraction() const;

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.exponent_ == b.exponent_ && a.numerator_ == b.numerator_;
    }
    friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

private:
    void normalize();

    BigInt numerator_ = 0;
    unsigned exponent_ = 0;
};

inline Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
inline Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
Dyadic abs(const Dyadic& value);

} // namespace rwm
