#include "rwm/numeric.hpp"

#include "rwm/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace rwm {

BigInt parse_bigint(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (!s.empty() && s.front() == '+') s.erase(0, 1);
    BigInt value;
    if (s.empty() || value.set_str(s, 10) != 0) {
        throw InvalidArgument("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

Rational parse_rational(std::string_view text) {
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
            s.end());
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        BigInt num = parse_bigint(s.substr(0, slash));
        BigInt den = parse_bigint(s.substr(slash + 1));
        if (den == 0) throw InvalidArgument("zero denominator: '" + s + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    if (const auto dot = s.find('.'); dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        const auto places = s.size() - dot - 1;
        BigInt den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, places);
        if (digits.empty() || digits == "-" || digits == "+") {
            throw InvalidArgument("not a number: '" + s + "'");
        }
        Rational r(parse_bigint(digits), den);
        r.canonicalize();
        return r;
    }
    return Rational(parse_bigint(s));
}

std::string to_string(const BigInt& value) { return value.get_str(10); }

std::string to_string(const Rational& value) {
    if (value.get_den() == 1) return value.get_num().get_str(10);
    return value.get_num().get_str(10) + "/" + value.get_den().get_str(10);
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

Dyadic::Dyadic(BigInt numerator, unsigned log2_denominator)
    : numerator_(std::move(numerator)), exponent_(log2_denominator) {
    normalize();
}

Dyadic Dyadic::inverse_power_of_two(unsigned exponent) { return Dyadic(BigInt(1), exponent); }

void Dyadic::normalize() {
    if (numerator_ == 0) {
        exponent_ = 0;
        return;
    }
    if (exponent_ == 0) return;
    const auto twos = static_cast<unsigned>(mpz_scan1(numerator_.get_mpz_t(), 0));
    const unsigned shift = std::min(twos, exponent_);
    if (shift > 0) {
        mpz_tdiv_q_2exp(numerator_.get_mpz_t(), numerator_.get_mpz_t(), shift);
        exponent_ -= shift;
    }
}

Dyadic& Dyadic::operator+=(const Dyadic& other) {
    if (other.exponent_ > exponent_) {
        numerator_ <<= (other.exponent_ - exponent_);
        exponent_ = other.exponent_;
        numerator_ += other.numerator_;
    } else {
        BigInt aligned = other.numerator_;
        aligned <<= (exponent_ - other.exponent_);
        numerator_ += aligned;
    }
    normalize();
    return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& other) { return *this += -other; }

Dyadic Dyadic::operator-() const {
    Dyadic out = *this;
    out.numerator_ = -out.numerator_;
    return out;
}

Dyadic Dyadic::scaled_down(unsigned k) const {
    if (is_zero()) return *this;
    return Dyadic(numerator_, exponent_ + k);
}

Rational Dyadic::to_rational() const {
    BigInt den(1);
    den <<= exponent_;
    Rational r(numerator_, den);
    r.canonicalize();
    return r;
}

double Dyadic::to_double() const { return to_rational().get_d(); }

std::string Dyadic::decimal() const {
    if (exponent_ == 0) return numerator_.get_str(10);
    // n / 2^e = n * 5^e / 10^e
    BigInt scaled;
    mpz_ui_pow_ui(scaled.get_mpz_t(), 5, exponent_);
    scaled *= abs(numerator_);
    std::string digits = scaled.get_str(10);
    if (digits.size() <= exponent_) digits.insert(0, exponent_ + 1 - digits.size(), '0');
    digits.insert(digits.size() - exponent_, ".");
    return (numerator_ < 0 ? "-" : "") + digits;
}

std::string Dyadic::fraction() const {
    if (exponent_ == 0) return numerator_.get_str(10);
    BigInt den(1);
    den <<= exponent_;
    return numerator_.get_str(10) + "/" + den.get_str(10);
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    BigInt lhs = a.numerator();
    BigInt rhs = b.numerator();
    if (a.log2_denominator() < b.log2_denominator()) {
        lhs <<= (b.log2_denominator() - a.log2_denominator());
    } else {
        rhs <<= (a.log2_denominator() - b.log2_denominator());
    }
    const int c = cmp(lhs, rhs);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

Dyadic abs(const Dyadic& value) { return value.sign() < 0 ? -value : value; }

} // namespace rwm
