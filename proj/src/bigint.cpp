#include "jsw/bigint.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace jsw {

namespace {
constexpr uint32_t kBase = 1000000000u;
constexpr int kBaseDigits = 9;
} // namespace

BigInt::BigInt(long long v) {
    if (v < 0) {
        neg_ = true;
    }
    unsigned long long m = neg_ ? 0ull - static_cast<unsigned long long>(v)
                                : static_cast<unsigned long long>(v);
    while (m != 0) {
        limbs_.push_back(static_cast<uint32_t>(m % kBase));
        m /= kBase;
    }
}

BigInt BigInt::from_decimal(std::string_view digits) {
    BigInt r;
    if (digits.empty()) return r;
    size_t first = digits.size();
    while (first >= kBaseDigits) {
        first -= kBaseDigits;
    }
    // leading partial limb is digits[0, first)
    std::vector<uint32_t> groups;
    for (size_t pos = digits.size(); pos > first;) {
        size_t start = pos - kBaseDigits;
        uint32_t limb = 0;
        for (size_t i = start; i < pos; ++i) {
            char c = digits[i];
            if (c < '0' || c > '9') throw std::invalid_argument("BigInt: non-digit");
            limb = limb * 10u + static_cast<uint32_t>(c - '0');
        }
        groups.push_back(limb);
        pos = start;
    }
    if (first > 0) {
        uint32_t limb = 0;
        for (size_t i = 0; i < first; ++i) {
            char c = digits[i];
            if (c < '0' || c > '9') throw std::invalid_argument("BigInt: non-digit");
            limb = limb * 10u + static_cast<uint32_t>(c - '0');
        }
        groups.push_back(limb);
    }
    r.limbs_ = std::move(groups);
    r.trim();
    return r;
}

BigInt BigInt::pow10(unsigned e) {
    BigInt r(1);
    std::vector<uint32_t> limbs(e / kBaseDigits, 0u);
    uint32_t head = 1;
    for (unsigned i = 0; i < e % kBaseDigits; ++i) head *= 10u;
    limbs.push_back(head);
    r.limbs_ = std::move(limbs);
    r.trim();
    return r;
}

void BigInt::trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) neg_ = false;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    if (!r.is_zero()) r.neg_ = !r.neg_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    r.neg_ = false;
    return r;
}

int BigInt::cmp_mag(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size())
        return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;) {
        if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    }
    return 0;
}

int BigInt::cmp(const BigInt& a, const BigInt& b) {
    if (a.neg_ != b.neg_) return a.neg_ ? -1 : 1;
    int m = cmp_mag(a, b);
    return a.neg_ ? -m : m;
}

BigInt BigInt::add_mag(const BigInt& a, const BigInt& b) {
    BigInt r;
    const auto& x = a.limbs_;
    const auto& y = b.limbs_;
    size_t n = std::max(x.size(), y.size());
    r.limbs_.reserve(n + 1);
    uint32_t carry = 0;
    for (size_t i = 0; i < n; ++i) {
        uint64_t s = carry;
        if (i < x.size()) s += x[i];
        if (i < y.size()) s += y[i];
        r.limbs_.push_back(static_cast<uint32_t>(s % kBase));
        carry = static_cast<uint32_t>(s / kBase);
    }
    if (carry) r.limbs_.push_back(carry);
    return r;
}

BigInt BigInt::sub_mag(const BigInt& a, const BigInt& b) {
    assert(cmp_mag(a, b) >= 0);
    BigInt r;
    r.limbs_ = a.limbs_;
    int64_t borrow = 0;
    for (size_t i = 0; i < r.limbs_.size(); ++i) {
        int64_t s = static_cast<int64_t>(r.limbs_[i]) - borrow -
                    (i < b.limbs_.size() ? static_cast<int64_t>(b.limbs_[i]) : 0);
        if (s < 0) {
            s += kBase;
            borrow = 1;
        } else {
            borrow = 0;
        }
        r.limbs_[i] = static_cast<uint32_t>(s);
    }
    r.trim();
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.neg_ == b.neg_) {
        BigInt r = BigInt::add_mag(a, b);
        r.neg_ = a.neg_;
        r.trim();
        return r;
    }
    int m = BigInt::cmp_mag(a, b);
    if (m == 0) return BigInt();
    if (m > 0) {
        BigInt r = BigInt::sub_mag(a, b);
        r.neg_ = a.neg_;
        r.trim();
        return r;
    }
    BigInt r = BigInt::sub_mag(b, a);
    r.neg_ = b.neg_;
    r.trim();
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt r;
    r.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0u);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < b.limbs_.size() || carry; ++j) {
            uint64_t cur = r.limbs_[i + j] + carry;
            if (j < b.limbs_.size())
                cur += static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j];
            r.limbs_[i + j] = static_cast<uint32_t>(cur % kBase);
            carry = cur / kBase;
        }
    }
    r.neg_ = a.neg_ != b.neg_;
    r.trim();
    return r;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt: division by zero");
    // Schoolbook long division on magnitudes, one decimal limb at a time.
    BigInt qa, ra;
    qa.limbs_.assign(a.limbs_.size(), 0u);
    for (size_t i = a.limbs_.size(); i-- > 0;) {
        // ra = ra * base + limb
        ra.limbs_.insert(ra.limbs_.begin(), a.limbs_[i]);
        ra.trim();
        // binary-search the quotient digit in [0, base)
        uint32_t lo = 0, hi = kBase - 1, digit = 0;
        while (lo <= hi) {
            uint32_t mid = lo + (hi - lo) / 2;
            BigInt t = b.abs() * BigInt(static_cast<long long>(mid));
            if (cmp_mag(t, ra) <= 0) {
                digit = mid;
                lo = mid + 1;
            } else {
                if (mid == 0) break;
                hi = mid - 1;
            }
        }
        if (digit) {
            ra = sub_mag(ra, b.abs() * BigInt(static_cast<long long>(digit)));
        }
        qa.limbs_[i] = digit;
    }
    qa.trim();
    ra.trim();
    qa.neg_ = !qa.is_zero() && (a.neg_ != b.neg_);
    ra.neg_ = !ra.is_zero() && a.neg_;
    q = std::move(qa);
    r = std::move(ra);
}

BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    BigInt::divmod(a, b, q, r);
    return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
    a.neg_ = false;
    b.neg_ = false;
    while (!b.is_zero()) {
        BigInt r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

BigInt BigInt::lcm(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    return (a.abs() / gcd(a, b)) * b.abs();
}

bool BigInt::fits_i64() const {
    static const BigInt kMin(std::numeric_limits<long long>::min());
    static const BigInt kMax(std::numeric_limits<long long>::max());
    return cmp(kMin, *this) <= 0 && cmp(*this, kMax) <= 0;
}

long long BigInt::to_i64() const {
    long long v = 0;
    for (size_t i = limbs_.size(); i-- > 0;) v = v * kBase + limbs_[i];
    return neg_ ? -v : v;
}

std::string BigInt::to_string() const {
    if (is_zero()) return "0";
    std::string s;
    if (neg_) s.push_back('-');
    char buf[16];
    snprintf(buf, sizeof(buf), "%u", limbs_.back());
    s += buf;
    for (size_t i = limbs_.size() - 1; i-- > 0;) {
        snprintf(buf, sizeof(buf), "%09u", limbs_[i]);
        s += buf;
    }
    return s;
}

size_t BigInt::hash() const {
    size_t h = neg_ ? 0x9e3779b97f4a7c15ull : 0;
    for (uint32_t l : limbs_) h = h * 1000003u + l;
    return h;
}

// ---- Rational ----

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::domain_error("Rational: zero denominator");
    normalize();
}

void Rational::normalize() {
    if (den_.negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (g != BigInt(1)) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

Rational Rational::from_decimal_string(std::string_view text) {
    size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    std::string intpart, fracpart;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') intpart.push_back(text[i++]);
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') fracpart.push_back(text[i++]);
    }
    long long exp10 = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
            eneg = text[i] == '-';
            ++i;
        }
        long long e = 0;
        bool any = false;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            e = e * 10 + (text[i++] - '0');
            if (e > 1000000) throw std::invalid_argument("Rational: exponent too large");
            any = true;
        }
        if (!any) throw std::invalid_argument("Rational: malformed exponent");
        exp10 = eneg ? -e : e;
    }
    if (i != text.size() || intpart.empty())
        throw std::invalid_argument("Rational: malformed number");
    BigInt mantissa = BigInt::from_decimal(intpart + fracpart);
    if (neg) mantissa = -mantissa;
    long long scale = exp10 - static_cast<long long>(fracpart.size());
    if (scale >= 0) return Rational(mantissa * BigInt::pow10(static_cast<unsigned>(scale)), BigInt(1));
    return Rational(std::move(mantissa), BigInt::pow10(static_cast<unsigned>(-scale)));
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}
Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}
Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("Rational: division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}
Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

int Rational::cmp(const Rational& a, const Rational& b) {
    return BigInt::cmp(a.num_ * b.den_, b.num_ * a.den_);
}

bool Rational::is_multiple_of(const Rational& m) const {
    // this / m = (num*m.den) / (den*m.num) must be an integer
    BigInt n = num_ * m.den();
    BigInt d = den_ * m.num();
    if (d.is_zero()) throw std::domain_error("Rational: multiple-of zero");
    return (n % d).is_zero();
}

BigInt Rational::floor() const {
    BigInt q, r;
    BigInt::divmod(num_, den_, q, r);
    if (!r.is_zero() && num_.negative()) q = q - BigInt(1);
    return q;
}

BigInt Rational::ceil() const {
    BigInt q, r;
    BigInt::divmod(num_, den_, q, r);
    if (!r.is_zero() && !num_.negative()) q = q + BigInt(1);
    return q;
}

Rational Rational::lcm(const Rational& a, const Rational& b) {
    return Rational(BigInt::lcm(a.num_, b.num_), BigInt::gcd(a.den_, b.den_));
}

bool Rational::is_decimal() const {
    BigInt d = den_;
    for (long long p : {2ll, 5ll}) {
        BigInt pb(p);
        while (true) {
            BigInt q, r;
            BigInt::divmod(d, pb, q, r);
            if (!r.is_zero()) break;
            d = q;
        }
    }
    return d == BigInt(1);
}

unsigned Rational::decimal_scale() const {
    unsigned twos = 0, fives = 0;
    BigInt d = den_;
    while (true) {
        BigInt q, r;
        BigInt::divmod(d, BigInt(2), q, r);
        if (!r.is_zero()) break;
        d = q;
        ++twos;
    }
    while (true) {
        BigInt q, r;
        BigInt::divmod(d, BigInt(5), q, r);
        if (!r.is_zero()) break;
        d = q;
        ++fives;
    }
    if (d != BigInt(1)) throw std::domain_error("Rational: not a decimal value");
    return std::max(twos, fives);
}

std::string Rational::to_decimal_string() const {
    unsigned scale = decimal_scale();
    if (scale == 0) return num_.to_string();
    BigInt scaled = num_ * (BigInt::pow10(scale) / den_);
    std::string digits = scaled.abs().to_string();
    if (digits.size() <= scale) digits.insert(0, scale + 1 - digits.size(), '0');
    digits.insert(digits.size() - scale, 1, '.');
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return (num_.negative() ? "-" : "") + digits;
}

std::string Rational::to_string() const {
    if (is_integer()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

size_t Rational::hash() const { return num_.hash() * 31u + den_.hash(); }

} // namespace jsw
