#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace jsw {

// Arbitrary-precision signed integer, sign + magnitude in base 1e9.
// Limbs are little-endian; the zero value has an empty limb vector and
// non-negative sign.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);

    static BigInt from_decimal(std::string_view digits); // digits only, no sign
    static BigInt pow10(unsigned e);

    bool is_zero() const { return limbs_.empty(); }
    bool negative() const { return neg_; }
    int sign() const { return is_zero() ? 0 : (neg_ ? -1 : 1); }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);

    // Truncated division (quotient rounds toward zero, like C++ integers).
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    friend BigInt operator/(const BigInt& a, const BigInt& b);
    friend BigInt operator%(const BigInt& a, const BigInt& b);

    static int cmp(const BigInt& a, const BigInt& b);
    friend bool operator==(const BigInt& a, const BigInt& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return cmp(a, b) != 0; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return cmp(a, b) >= 0; }

    static BigInt gcd(BigInt a, BigInt b); // non-negative
    static BigInt lcm(const BigInt& a, const BigInt& b);

    bool is_odd() const { return !limbs_.empty() && (limbs_[0] & 1u); }
    bool fits_i64() const;
    long long to_i64() const; // precondition: fits_i64()

    std::string to_string() const;
    size_t hash() const;

private:
    static int cmp_mag(const BigInt& a, const BigInt& b);
    static BigInt add_mag(const BigInt& a, const BigInt& b);
    static BigInt sub_mag(const BigInt& a, const BigInt& b); // |a| >= |b|
    void trim();

    bool neg_ = false;
    std::vector<uint32_t> limbs_; // base 1e9
};

// Exact rational with normalized representation: den > 0, gcd(num, den) = 1,
// zero is 0/1.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(BigInt num, BigInt den); // normalizes; den must be nonzero

    // Parses a JSON number token: [-]int[.frac][(e|E)[+-]exp], exactly.
    static Rational from_decimal_string(std::string_view text);

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == BigInt(1); }
    int sign() const { return num_.sign(); }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b); // b nonzero
    Rational operator-() const;

    static int cmp(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a, b) == 0; }
    friend bool operator!=(const Rational& a, const Rational& b) { return cmp(a, b) != 0; }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return cmp(a, b) <= 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return cmp(a, b) > 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return cmp(a, b) >= 0; }

    // True iff this is an integer multiple of m (m nonzero).
    bool is_multiple_of(const Rational& m) const;

    BigInt floor() const;
    BigInt ceil() const;

    // Least positive common multiple of two positive rationals:
    // lcm(a/b, c/d) = lcm(a,c) / gcd(b,d).
    static Rational lcm(const Rational& a, const Rational& b);

    // True iff the reduced denominator is of the form 2^a * 5^b, i.e. the
    // value has a finite decimal expansion.
    bool is_decimal() const;
    // Number of fractional decimal digits needed (0 for integers).
    // Precondition: is_decimal().
    unsigned decimal_scale() const;
    // Shortest exact decimal text. Precondition: is_decimal().
    std::string to_decimal_string() const;

    std::string to_string() const; // num/den debug form
    size_t hash() const;

private:
    void normalize();
    BigInt num_, den_;
};

} // namespace jsw
